#pragma once

#include <string>
#include <vector>

#include "disklab/config.hpp"
#include "disklab/scan.hpp"

namespace disklab {

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> failures;  // one line per failed stage or check
};

// Experiment kinds understood by run_experiment and the `lab` tool.
std::vector<std::string> runner_kinds();

// Runs one experiment kind under cfg and writes its artifacts into
// cfg.out_dir: experiments.csv plus kind-specific reports and field dumps.
// Unknown kinds throw std::invalid_argument.
RunOutcome run_experiment(const std::string& kind, const LabConfig& cfg);

// Serializers shared between the runner and the repeatability check. Pure
// functions of their inputs: two identical runs produce byte-identical text.
std::string experiments_csv_text(const std::string& kind, const LabConfig& cfg,
                                 const std::vector<PipelineResult>& rows);
std::string gauge_report_text(const std::vector<PipelineResult>& rows);
std::string hardy_report_text(const std::vector<PipelineResult>& rows);

}  // namespace disklab
