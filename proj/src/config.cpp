#include "disklab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace disklab {

namespace {
using Json = nlohmann::ordered_json;
}

LabConfig LabConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("LabConfig: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

LabConfig LabConfig::from_json_text(const std::string& text) {
  const Json j = Json::parse(text);
  if (!j.is_object()) throw std::runtime_error("LabConfig: top level must be an object");
  static const std::set<std::string> known = {
      "nodes_per_axis", "map_dim",  "lambdas", "seed",      "tol_flow", "tol_solve",
      "tol_gauge_rel",  "tol_ab",   "eps_gauge", "out_dir"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::runtime_error("LabConfig: unknown key \"" + it.key() + "\"");

  LabConfig c;
  if (j.contains("nodes_per_axis")) c.nodes_per_axis = j.at("nodes_per_axis").get<int>();
  if (j.contains("map_dim")) c.map_dim = j.at("map_dim").get<int>();
  if (j.contains("lambdas")) c.lambdas = j.at("lambdas").get<std::vector<double>>();
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("tol_flow")) c.tol_flow = j.at("tol_flow").get<double>();
  if (j.contains("tol_solve")) c.tol_solve = j.at("tol_solve").get<double>();
  if (j.contains("tol_gauge_rel")) c.tol_gauge_rel = j.at("tol_gauge_rel").get<double>();
  if (j.contains("tol_ab")) c.tol_ab = j.at("tol_ab").get<double>();
  if (j.contains("eps_gauge")) c.eps_gauge = j.at("eps_gauge").get<double>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();

  if (c.nodes_per_axis < 17 || c.nodes_per_axis % 2 == 0)
    throw std::runtime_error("LabConfig: nodes_per_axis must be odd and >= 17");
  if (c.map_dim < 2) throw std::runtime_error("LabConfig: map_dim must be >= 2");
  if (c.lambdas.empty()) throw std::runtime_error("LabConfig: lambdas must be non-empty");
  return c;
}

std::string LabConfig::canonical_json() const {
  Json j;
  j["nodes_per_axis"] = nodes_per_axis;
  j["map_dim"] = map_dim;
  j["lambdas"] = lambdas;
  j["seed"] = seed;
  j["tol_flow"] = tol_flow;
  j["tol_solve"] = tol_solve;
  j["tol_gauge_rel"] = tol_gauge_rel;
  j["tol_ab"] = tol_ab;
  j["eps_gauge"] = eps_gauge;
  j["out_dir"] = out_dir;
  return j.dump();
}

std::string LabConfig::hash_hex() const {
  const std::string s = canonical_json();
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace disklab
