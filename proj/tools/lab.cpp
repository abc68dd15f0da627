#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "disklab/config.hpp"
#include "disklab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"disk laboratory: harmonic maps, gauge frames and conservation laws"};
  app.get_formatter()->column_width(28);

  std::string kind;
  app.add_option("kind", kind, "experiment kind")
      ->required()
      ->check(CLI::IsMember(disklab::runner_kinds()));

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (strict keys)")
      ->check(CLI::ExistingFile);

  std::string out_dir;
  app.add_option("--out", out_dir, "output directory (overrides the config)");

  std::uint64_t seed = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed, "seed override");

  int nodes = 0;
  CLI::Option* nodes_opt =
      app.add_option("--nodes", nodes, "nodes per axis override (odd, >= 17)");

  CLI11_PARSE(app, argc, argv);

  try {
    disklab::LabConfig cfg = config_path.empty()
                                 ? disklab::LabConfig{}
                                 : disklab::LabConfig::from_json_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (nodes_opt->count() > 0) cfg.nodes_per_axis = nodes;

    const disklab::RunOutcome out = disklab::run_experiment(kind, cfg);
    if (kind != "verify") std::cout << "artifacts in " << cfg.out_dir << "\n";
    for (const std::string& f : out.failures) std::cerr << "failure: " << f << "\n";
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
