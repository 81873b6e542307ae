#include "saddleflow/flows.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace saddleflow {

namespace {

// Near t = 0 the gamma/t pull is singular; cap steps at this fraction of t.
constexpr double kAnchoredStepFraction = 0.05;

void check_smooth(const SaddleProblem& problem) {
  if (!problem.smooth())
    throw std::invalid_argument("flows: nonsmooth problems are not integrable (G must be "
                                "single-valued and smooth)");
}

void check_spec(const Vec& z0, const SaddleProblem& problem, double h, double horizon,
                double t_start) {
  detail::require(z0.size() == problem.dim(), "flows: z0 dimension mismatch");
  detail::require(h > 0.0, "flows: step h must be positive");
  detail::require(horizon > t_start, "flows: horizon must exceed the start time");
}

Vec rk4_step(const std::function<Vec(double, const Vec&)>& f, double t, const Vec& z, double h) {
  const Vec k1 = f(t, z);
  const Vec k2 = f(t + 0.5 * h, z + (0.5 * h) * k1);
  const Vec k3 = f(t + 0.5 * h, z + (0.5 * h) * k2);
  const Vec k4 = f(t + h, z + h * k3);
  return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates f over [t_start, horizon]; step sizes come from next_h(t) so the
// anchored flow can shrink steps near its singular start. sample(t, z) is
// invoked on the stored subsequence of steps.
void integrate(const std::function<Vec(double, const Vec&)>& f, Vec z, double t_start,
               double horizon, const std::function<double(double)>& next_h,
               const std::function<void(double, const Vec&)>& sample, std::int64_t stride) {
  double t = t_start;
  sample(t, z);
  double guard_norm = std::max(1.0, z.norm());
  std::int64_t step_count = 0;
  while (t < horizon) {
    double h = next_h(t);
    const bool final_step = h >= horizon - t;
    if (final_step) h = horizon - t;
    z = rk4_step(f, t, z, h);
    t = final_step ? horizon : t + h;
    ++step_count;
    if (!z.allFinite() || z.norm() > 1e6 * guard_norm)
      throw FlowError("flow integration unstable: trajectory norm grew by more than 1e6");
    if (step_count % stride == 0 || final_step) {
      sample(t, z);
      guard_norm = std::max(guard_norm, z.norm());
    }
  }
}

std::int64_t sample_stride(double t_start, double horizon, double h) {
  // store roughly every ceil((T - t0)/(1000 h))-th step, at least 1000 samples
  const double steps = (horizon - t_start) / h;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(steps / 1000.0)));
}

} // namespace

FlowTrace integrate_plain(const SaddleProblem& problem, const Vec& z0, double h, double horizon) {
  check_smooth(problem);
  check_spec(z0, problem, h, horizon, 0.0);

  FlowTrace trace;
  if (problem.zero_set()) trace.reference = problem.zero_set()->project(z0);
  const auto f = [&](double, const Vec& z) { return Vec(-problem.oracle(z)); };
  const auto sample = [&](double t, const Vec& z) {
    trace.t.push_back(t);
    trace.state.push_back(z);
    trace.grad_norm2.push_back(problem.oracle(z).squaredNorm());
    trace.dist2_ref.push_back(trace.reference.size() > 0
                                  ? (z - trace.reference).squaredNorm()
                                  : std::numeric_limits<double>::quiet_NaN());
  };
  integrate(f, z0, 0.0, horizon, [h](double) { return h; }, sample,
            sample_stride(0.0, horizon, h));
  return trace;
}

FlowTrace integrate_optimistic(const SaddleProblem& problem, double alpha, double beta,
                               const Vec& z0, double h, double horizon) {
  check_smooth(problem);
  check_spec(z0, problem, h, horizon, 0.0);
  detail::require(alpha > 0.0 && beta > 0.0, "flows: alpha and beta must be positive");

  const AffineForm& form = *problem.affine_form();
  const Index d = problem.dim();
  const Eigen::PartialPivLU<Mat> lu(Mat(Mat::Identity(d, d) + beta * form.M));
  const auto resolvent = [&](const Vec& zeta) { return Vec(lu.solve(zeta - beta * form.c)); };
  const auto g_beta = [&](const Vec& zeta) { return Vec((zeta - resolvent(zeta)) / beta); };

  FlowTrace trace;
  const Vec zeta0 = z0 + beta * problem.oracle(z0);
  if (problem.zero_set()) trace.reference = problem.zero_set()->project(z0);
  const auto f = [&](double, const Vec& zeta) { return Vec(-alpha * g_beta(zeta)); };
  const auto sample = [&](double t, const Vec& zeta) {
    const Vec z = resolvent(zeta);
    trace.t.push_back(t);
    trace.state.push_back(z);
    trace.zeta.push_back(zeta);
    trace.grad_norm2.push_back(problem.oracle(z).squaredNorm());
    trace.dist2_ref.push_back(trace.reference.size() > 0
                                  ? (z - trace.reference).squaredNorm()
                                  : std::numeric_limits<double>::quiet_NaN());
  };
  integrate(f, zeta0, 0.0, horizon, [h](double) { return h; }, sample,
            sample_stride(0.0, horizon, h));
  return trace;
}

FlowTrace integrate_anchored(const SaddleProblem& problem, double gamma, const Vec& z0, double h,
                             double horizon, double t0) {
  check_smooth(problem);
  check_spec(z0, problem, h, horizon, t0);
  detail::require(gamma >= 1.0, "flows: anchored flow requires gamma >= 1");
  detail::require(t0 > 0.0, "flows: anchored flow requires t0 > 0");

  FlowTrace trace;
  if (problem.zero_set()) trace.reference = problem.zero_set()->project(z0);
  const Vec anchor = z0;
  const auto f = [&](double t, const Vec& z) {
    return Vec(-problem.oracle(z) + (gamma / t) * (anchor - z));
  };
  const auto sample = [&](double t, const Vec& z) {
    const Vec g = problem.oracle(z);
    const Vec dz = z - anchor;
    trace.t.push_back(t);
    trace.state.push_back(z);
    trace.grad_norm2.push_back(g.squaredNorm());
    trace.dist2_ref.push_back(trace.reference.size() > 0
                                  ? (z - trace.reference).squaredNorm()
                                  : std::numeric_limits<double>::quiet_NaN());
    trace.lyapunov.push_back(t * t * g.squaredNorm() + 2.0 * gamma * t * g.dot(dz) +
                             gamma * (gamma - 1.0) * dz.squaredNorm());
  };
  const auto next_h = [h](double t) { return std::min(h, kAnchoredStepFraction * t); };
  integrate(f, z0, t0, horizon, next_h, sample, sample_stride(t0, horizon, h));
  return trace;
}

} // namespace saddleflow
