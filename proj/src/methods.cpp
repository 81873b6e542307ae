#include "saddleflow/methods.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace saddleflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class RunLoop {
 public:
  RunLoop(const SaddleProblem& problem, const Vec& z0, std::int64_t max_iter,
          const LogPolicy& log)
      : problem_(problem), max_iter_(max_iter), log_(log) {
    detail::require(z0.size() == problem.dim(), "run: z0 dimension mismatch");
    detail::require(iterate_ok(z0), "run: z0 must be finite");
    detail::require(max_iter >= 0, "run: max_iter must be nonnegative");
    if (problem.zero_set()) record_.reference = problem.zero_set()->project(z0);
  }

  // step(k, z, g) -> z_{k+1}, where g = G(z_k) is the deterministic oracle
  // value (shared between metrics and the update).
  template <class StepFn>
  RunRecord run(Vec z, StepFn&& step) {
    double min_g = std::numeric_limits<double>::infinity();
    std::int64_t next_log = 0;
    for (std::int64_t k = 0;; ++k) {
      const Vec g = problem_.oracle(z);
      const double gn2 = g.squaredNorm();
      min_g = std::min(min_g, gn2);
      if (k == next_log || k == max_iter_) {
        log_row(k, z, gn2, min_g);
        if (k == next_log) next_log = advance(next_log);
      }
      if (k == max_iter_) break;
      Vec next = step(k, z, g);
      if (!iterate_ok(next)) {
        record_.termination = Termination::diverged;
        record_.diverged_at = k + 1;
        break;
      }
      z = std::move(next);
    }
    return std::move(record_);
  }

  RunRecord& record() { return record_; }

 private:
  std::int64_t advance(std::int64_t k) const {
    if (log_.kind == LogPolicy::Kind::every || k < 100) return k + 1;
    return std::max(k + 1, static_cast<std::int64_t>(std::ceil(static_cast<double>(k) * log_.ratio)));
  }

  void log_row(std::int64_t k, const Vec& z, double gn2, double min_g) {
    if (!record_.steps.empty() && record_.steps.back() == k) return;
    record_.steps.push_back(k);
    record_.iterates.push_back(z);
    record_.dist2_ref.push_back(record_.reference.size() > 0
                                    ? (z - record_.reference).squaredNorm()
                                    : kNaN);
    record_.grad_norm2.push_back(gn2);
    record_.min_grad_norm2.push_back(min_g);
  }

  const SaddleProblem& problem_;
  std::int64_t max_iter_;
  LogPolicy log_;
  RunRecord record_;
};

} // namespace

RunRecord run_sssgd(const SaddleProblem& problem, const StepSchedule& alpha, const Vec& z0,
                    std::int64_t max_iter, const RngStream& rng, const LogPolicy& log) {
  RunLoop loop(problem, z0, max_iter, log);
  if (!alpha.summability_ok())
    loop.record().warnings.push_back(
        "alpha schedule is outside the summable range (exponent in (1/2, 1])");
  const double sigma = problem.noise_sigma();
  const Index d = problem.dim();
  RunRecord* rec = &loop.record();
  return loop.run(z0, [&, sigma, d](std::int64_t k, const Vec& z, const Vec& g) {
    Vec gs = g;
    if (sigma != 0.0) gs += sigma * rng::gaussian(rng, static_cast<std::uint64_t>(k) + 1, d);
    ++rec->oracle_calls;
    const double a = alpha.value_at_step(k);
    return Vec(z - a * gs);
  });
}

RunRecord run_simgd_o(const SaddleProblem& problem, double alpha, double beta, const Vec& z0,
                      std::int64_t max_iter, const LogPolicy& log) {
  detail::require(alpha > 0.0 && beta > 0.0, "simgd-o: alpha and beta must be positive");
  RunLoop loop(problem, z0, max_iter, log);
  if (const auto R = problem.lipschitz()) {
    if (!(alpha < 2.0 * beta * (1.0 - 2.0 * beta * *R)))
      loop.record().warnings.push_back(
          "step sizes violate alpha < 2*beta*(1 - 2*beta*R); convergence not guaranteed");
  } else {
    loop.record().warnings.push_back("lipschitz constant unknown; step-size condition unchecked");
  }
  std::optional<Vec> gprev;  // G(z_{-1}) with z_{-1} = z_0
  RunRecord* rec = &loop.record();
  return loop.run(z0, [&](std::int64_t, const Vec& z, const Vec& g) {
    if (!gprev) gprev = g;
    Vec out = z - alpha * g - beta * (g - *gprev);
    *gprev = g;
    ++rec->oracle_calls;
    return out;
  });
}

RunRecord run_simgd_os(const SaddleProblem& problem, const StepSchedule& alpha,
                       const StepSchedule& beta, const Vec& z0, std::int64_t max_iter,
                       const RngStream& rng, const LogPolicy& log) {
  RunLoop loop(problem, z0, max_iter, log);
  const double sigma = problem.noise_sigma();
  const Index d = problem.dim();
  RunRecord* rec = &loop.record();
  // g(z_{-1}; w_{-1}) with z_{-1} = z_0 seeds the optimism cache (draw 0).
  std::optional<Vec> gprev;
  return loop.run(z0, [&, sigma, d](std::int64_t k, const Vec& z, const Vec& g) {
    if (!gprev) {
      gprev = g;
      if (sigma != 0.0) *gprev += sigma * rng::gaussian(rng, 0, d);
      ++rec->oracle_calls;
    }
    Vec gs = g;
    if (sigma != 0.0) gs += sigma * rng::gaussian(rng, static_cast<std::uint64_t>(k) + 1, d);
    ++rec->oracle_calls;
    const double a = alpha.value_at_step(k);
    const double b = beta.value_at_step(k);
    Vec out = z - a * gs - b * (gs - *gprev);
    *gprev = std::move(gs);
    return out;
  });
}

namespace {

RunRecord run_anchored_core(const SaddleProblem& problem, double p, double gamma, double epsilon,
                            const Vec& z0, std::int64_t max_iter, const RngStream* rng,
                            const LogPolicy& log, std::vector<std::string> warnings) {
  RunLoop loop(problem, z0, max_iter, log);
  loop.record().warnings = std::move(warnings);
  const double sigma = rng != nullptr ? problem.noise_sigma() : 0.0;
  const Index d = problem.dim();
  RunRecord* rec = &loop.record();
  const Vec anchor = z0;
  return loop.run(z0, [&, p, gamma, epsilon, sigma, d](std::int64_t k, const Vec& z,
                                                       const Vec& g) {
    Vec gs = g;
    if (sigma != 0.0) gs += sigma * rng::gaussian(*rng, static_cast<std::uint64_t>(k) + 1, d);
    ++rec->oracle_calls;
    const double kp1 = static_cast<double>(k) + 1.0;
    const double lr = (1.0 - p) / std::pow(kp1, p);
    const double pull = (1.0 - p) * gamma / std::pow(kp1, 1.0 - epsilon);
    return Vec(z - lr * gs + pull * (anchor - z));
  });
}

} // namespace

RunRecord run_simgd_a(const SaddleProblem& problem, double p, double gamma, const Vec& z0,
                      std::int64_t max_iter, const LogPolicy& log) {
  detail::require(p > 0.5 && p < 1.0, "simgd-a: p must lie in (1/2, 1)");
  detail::require(gamma > 0.0, "simgd-a: gamma must be positive");
  std::vector<std::string> warnings;
  if (gamma < 2.0)
    warnings.push_back("gamma < 2 is outside the convergence theorem's hypothesis");
  return run_anchored_core(problem, p, gamma, 0.0, z0, max_iter, nullptr, log,
                           std::move(warnings));
}

RunRecord run_sssgd_a(const SaddleProblem& problem, double p, double gamma, double epsilon,
                      const Vec& z0, std::int64_t max_iter, const RngStream& rng,
                      const LogPolicy& log) {
  detail::require(p > 0.5 && p < 1.0, "sssgd-a: p must lie in (1/2, 1)");
  detail::require(gamma > 0.0, "sssgd-a: gamma must be positive");
  detail::require(epsilon >= 0.0 && epsilon < 0.5, "sssgd-a: epsilon must lie in [0, 1/2)");
  std::vector<std::string> warnings;
  if (epsilon == 0.0)
    warnings.push_back("epsilon = 0 is outside the convergence theorem's hypothesis");
  return run_anchored_core(problem, p, gamma, epsilon, z0, max_iter, &rng, log,
                           std::move(warnings));
}

} // namespace saddleflow
