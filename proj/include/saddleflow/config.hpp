#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saddleflow/core.hpp"
#include "saddleflow/methods.hpp"
#include "saddleflow/schedule.hpp"

namespace saddleflow {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MethodId { sssgd, simgd_o, simgd_os, simgd_a, sssgd_a };

std::string method_name(MethodId m);
MethodId method_from_name(const std::string& name);

enum class Emit { csv, svg, both };

struct SeedSpec {
  std::uint64_t base_seed{1};
  int count{1};
};

struct AnchorParams {
  double p{};
  double gamma{};
  double epsilon{};
};

/// One sweep cell: label plus parameter overrides applied to the base method
/// settings (p/q patch the alpha/beta exponents for simgd-os; p, gamma,
/// epsilon patch the anchor for the anchored methods).
struct SweepCell {
  std::string label;
  std::optional<double> p, q, gamma, epsilon;
};

struct ExperimentConfig {
  nlohmann::json problem_spec;  // id string or {"quadratic": {...}} object
  MethodId method{MethodId::sssgd};
  Vec z0;
  std::int64_t max_iter{};
  double noise_sigma{};
  SeedSpec seeds;
  LogPolicy log_policy{LogPolicy::geometric()};
  Emit emit{Emit::csv};
  std::optional<StepSchedule> alpha;
  std::optional<StepSchedule> beta;
  std::optional<AnchorParams> anchor;
  std::vector<SweepCell> sweep;
  std::string out_dir;  // optional; relative names resolve under the output root

  SaddleProblem make_problem() const;
  /// Method settings with a sweep cell's overrides applied.
  ExperimentConfig with_cell(const SweepCell& cell) const;
  /// Canonical resolved form; excludes volatile fields so copies are
  /// byte-stable across reruns.
  nlohmann::json resolved() const;
};

struct FlowRequest {
  std::string label;
  std::string kind;  // "plain" | "optimistic" | "anchored"
  double alpha{1.0};
  double beta{0.5};
  double gamma{2.0};
  double t0{1e-4};
  double h{1e-3};
  double horizon{10.0};
  Vec z0;
};

struct PhaseConfig {
  nlohmann::json problem_spec;
  std::vector<FlowRequest> flows;
  Emit emit{Emit::both};
  std::string out_dir;

  SaddleProblem make_problem() const;
  nlohmann::json resolved() const;
};

ExperimentConfig parse_run_config(const nlohmann::json& j);
PhaseConfig parse_phase_config(const nlohmann::json& j);

/// Loads and parses a config file; parse errors carry the offending line.
nlohmann::json load_config_json(const std::string& path);

} // namespace saddleflow
