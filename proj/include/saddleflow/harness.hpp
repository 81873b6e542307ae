#pragma once

#include <string>
#include <vector>

#include "saddleflow/config.hpp"

namespace saddleflow {

// Exit codes: 0 success, 1 usage/config error, 2 completed with divergences.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitDiverged = 2;

struct RunOutcome {
  int exit_code{kExitOk};
  std::string out_dir;
  int diverged_seeds{0};
};

/// Output root: $SADDLEFLOW_OUT when set, else ./runs.
std::string output_root();

/// Resolve the run directory for a config (CLI --out wins, then the config's
/// out_dir, then a name derived from the config path).
std::string resolve_out_dir(const std::string& config_path, const std::string& cli_out,
                            const std::string& config_out);

/// Executes all seeds (and sweep cells), writing per-seed CSVs, an aggregate
/// CSV, optional SVG plots, and a resolved config copy into out_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int jobs);

/// Integrates the configured flows, writing per-flow trace CSVs and phase
/// portrait SVGs into out_dir.
int run_phase(const PhaseConfig& cfg, const std::string& out_dir);

/// Post-processes a run directory: rate fits, theorem-bound comparators,
/// appendix-lemma checks. Writes report.json and summary.txt.
int run_report(const std::string& run_dir, const std::string& checks);

// CLI entry points; parse the config file and dispatch.
int cmd_run(const std::string& config_path, int jobs, const std::string& cli_out);
int cmd_phase(const std::string& config_path, const std::string& cli_out);
int cmd_report(const std::string& run_dir, const std::string& checks);

// Shipped preset configurations.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

} // namespace saddleflow
