#include "disklab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace disklab {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

const char* class_name(NodeClass c) {
  switch (c) {
    case NodeClass::Interior: return "interior";
    case NodeClass::Boundary: return "boundary";
    default: return "exterior";
  }
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_fields_csv(const std::string& path,
                      const std::vector<const ScalarField*>& comps) {
  if (comps.empty()) throw std::invalid_argument("write_fields_csv: no components");
  const DiskGrid& g = comps.front()->grid();
  std::ofstream out = open_out(path);
  out << "i,j,x,y,class";
  for (size_t c = 0; c < comps.size(); ++c) out << ",v" << c;
  out << "\n";
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const Vec2 p = g.node(i, j);
      out << i << ',' << j << ',' << fmt_double(p.x) << ',' << fmt_double(p.y)
          << ',' << class_name(g.node_class(i, j));
      for (const ScalarField* f : comps) out << ',' << fmt_double((*f)(i, j));
      out << "\n";
    }
  }
}

void write_field_csv(const std::string& path, const ScalarField& f) {
  write_fields_csv(path, {&f});
}

void write_map_csv(const std::string& path, const MapField& u) {
  std::vector<const ScalarField*> comps;
  for (int c = 0; c < u.dim(); ++c) comps.push_back(&u.component(c));
  write_fields_csv(path, comps);
}

void write_field_ppm(const std::string& path, const ScalarField& f) {
  const DiskGrid& g = f.grid();
  const int n = g.n();
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (int idx = 0; idx < n * n; ++idx) {
    if (g.node_class(idx) == NodeClass::Exterior) continue;
    const double v = f[idx];
    if (first || v < lo) lo = v;
    if (first || v > hi) hi = v;
    first = false;
  }
  const double span = (hi > lo) ? (hi - lo) : 1.0;
  std::ofstream out = open_out(path, true);
  out << "P6\n" << n << " " << n << "\n255\n";
  std::string row(static_cast<size_t>(n) * 3, '\0');
  for (int r = 0; r < n; ++r) {
    const int j = n - 1 - r;
    for (int i = 0; i < n; ++i) {
      uint8_t px = 0;
      if (g.node_class(i, j) != NodeClass::Exterior) {
        const double t = (f(i, j) - lo) / span;
        px = static_cast<uint8_t>(std::lround(255.0 * std::min(1.0, std::max(0.0, t))));
      }
      row[3 * i] = row[3 * i + 1] = row[3 * i + 2] = static_cast<char>(px);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

}  // namespace disklab
