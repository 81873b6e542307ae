#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saddleflow/core.hpp"
#include "saddleflow/schedule.hpp"

namespace saddleflow {

/// Which iterations get logged. Geometric logging keeps the k <= 100 prefix
/// dense and then checkpoints at ratio steps, so 1e6-step runs stay O(log k)
/// in memory while log-log fits keep their resolution.
struct LogPolicy {
  enum class Kind { every, geometric };
  Kind kind{Kind::geometric};
  double ratio{1.05};

  static LogPolicy every() { return {Kind::every, 1.0}; }
  static LogPolicy geometric(double ratio = 1.05) { return {Kind::geometric, ratio}; }
};

enum class Termination { completed, diverged };

/// Time series of one seeded run: logged iterates, the metrics plotted in the
/// experiments, and the termination status. min_grad_norm2 is maintained
/// online over every iterate, not just logged ones.
struct RunRecord {
  std::vector<std::int64_t> steps;
  std::vector<Vec> iterates;
  std::vector<double> dist2_ref;
  std::vector<double> grad_norm2;
  std::vector<double> min_grad_norm2;

  Vec reference;  // projection of z0 onto the zero set; empty if unknown
  Termination termination{Termination::completed};
  std::int64_t diverged_at{-1};
  std::int64_t oracle_calls{0};  // stochastic-oracle invocations
  std::vector<std::string> warnings;

  bool diverged() const { return termination == Termination::diverged; }
  std::size_t rows() const { return steps.size(); }
};

/// z_{k+1} = z_k - a_k g(z_k; w_k).
RunRecord run_sssgd(const SaddleProblem& problem, const StepSchedule& alpha, const Vec& z0,
                    std::int64_t max_iter, const RngStream& rng,
                    const LogPolicy& log = LogPolicy::geometric());

/// z_{k+1} = z_k - a G(z_k) - b (G(z_k) - G(z_{k-1})), z_{-1} = z_0.
/// One deterministic oracle call per step; the previous gradient is cached.
RunRecord run_simgd_o(const SaddleProblem& problem, double alpha, double beta, const Vec& z0,
                      std::int64_t max_iter, const LogPolicy& log = LogPolicy::geometric());

/// Stochastic optimism: z_{k+1} = z_k - a_k g_k - b_k (g_k - g_{k-1}) with
/// g_k = g(z_k; w_k); the previous draw is reused, one fresh call per step
/// plus one initial call for g(z_{-1}; w_{-1}).
RunRecord run_simgd_os(const SaddleProblem& problem, const StepSchedule& alpha,
                       const StepSchedule& beta, const Vec& z0, std::int64_t max_iter,
                       const RngStream& rng, const LogPolicy& log = LogPolicy::geometric());

/// z_{k+1} = z_k - (1-p)/(k+1)^p G(z_k) + (1-p) gamma/(k+1) (z_0 - z_k).
RunRecord run_simgd_a(const SaddleProblem& problem, double p, double gamma, const Vec& z0,
                      std::int64_t max_iter, const LogPolicy& log = LogPolicy::geometric());

/// z_{k+1} = z_k - (1-p)/(k+1)^p g(z_k; w_k)
///               + (1-p) gamma/(k+1)^{1-eps} (z_0 - z_k).
RunRecord run_sssgd_a(const SaddleProblem& problem, double p, double gamma, double epsilon,
                      const Vec& z0, std::int64_t max_iter, const RngStream& rng,
                      const LogPolicy& log = LogPolicy::geometric());

} // namespace saddleflow
