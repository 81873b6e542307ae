#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "saddleflow/core.hpp"
#include "saddleflow/methods.hpp"

namespace saddleflow {

/// Ordinary least squares of log(value) on log(k) over a window.
struct RateFit {
  double slope{};
  double intercept{};
  std::int64_t window_lo{};
  std::int64_t window_hi{};
  double r_squared{};
  std::size_t points{};
};

RateFit fit_rate(const std::vector<std::pair<std::int64_t, double>>& series,
                 std::int64_t window_lo, std::int64_t window_hi);
RateFit fit_rate(const std::vector<std::int64_t>& ks, const std::vector<double>& values,
                 std::int64_t window_lo, std::int64_t window_hi);

/// Comparator for the optimistic-method gradient bound
///   min_{i<=k} |G(z_i)|^2 <= (2 + 2 b^2 R^2) / (a (2b - a - 4 b^2 R) k)
///                            * |z_0 + b G(z_0) - z*|^2.
struct Theorem2Report {
  bool holds{};
  double worst_ratio{};
  std::int64_t worst_k{};
  double bound_constant{};   // (2 + 2 b^2 R^2) / (a (2b - a - 4 b^2 R))
  double initial_distance2{};  // |z_0 + b G(z_0) - z*|^2
  double lhs_at_worst{};
  double rhs_at_worst{};
};

Theorem2Report check_theorem2_bound(const RunRecord& record, const SaddleProblem& problem,
                                    double alpha, double beta);

/// Per-checkpoint statistics of one metric across seeds.
struct SeedAggregate {
  std::vector<std::int64_t> steps;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> median;
  int seed_count{};
};

/// metric is one of "dist2_ref", "grad_norm2", "min_grad_norm2".
SeedAggregate aggregate_seeds(const std::vector<RunRecord>& records, const std::string& metric);

/// Numeric checks of the k^p inequalities and the summation/polarization
/// identities used by the anchored-method analysis.
struct LemmaInstance {
  std::string lemma;
  double p{};
  std::int64_t k{};
  double slack{};  // distance to the violated (or tightest) bound
};

struct LemmaReport {
  std::int64_t checks{};
  std::vector<LemmaInstance> violations;
  std::vector<LemmaInstance> tightest;  // minimum-slack instance per lemma
  bool all_hold() const { return violations.empty(); }
};

LemmaReport check_appendix_lemmas(const std::vector<double>& p_grid,
                                  const std::vector<std::int64_t>& k_grid,
                                  const RngStream& rng);
LemmaReport check_appendix_lemmas();  // default grids

/// Distance columns derived from a record: the fixed-reference distance
/// |z_k - P(z_0)|^2 and the pointwise distance |z_k - P(z_k)|^2.
struct DistanceColumns {
  std::vector<double> dist2_fixed;
  std::vector<double> dist2_pointwise;
};

DistanceColumns distance_metrics(const RunRecord& record, const SaddleProblem& problem);

nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const Theorem2Report& report);
nlohmann::json to_json(const LemmaReport& report);

} // namespace saddleflow
