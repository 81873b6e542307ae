#pragma once

#include <vector>

#include "saddleflow/core.hpp"

namespace saddleflow {

/// One integrated trajectory. zeta is populated by the optimistic flow only;
/// lyapunov by the anchored flow only.
struct FlowTrace {
  std::vector<double> t;
  std::vector<Vec> state;
  std::vector<Vec> zeta;
  std::vector<double> grad_norm2;
  std::vector<double> dist2_ref;
  std::vector<double> lyapunov;
  Vec reference;

  std::size_t rows() const { return t.size(); }
};

struct FlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Classical RK4 on dz/dt = -G(z) from z(0) = z0. Smooth problems only.
FlowTrace integrate_plain(const SaddleProblem& problem, const Vec& z0, double h, double horizon);

/// Regularized dynamics dzeta/dt = -alpha * G_beta(zeta) with
/// zeta(0) = z0 + beta G(z0); the trace reports z(t) = (I + beta G)^{-1}(zeta)
/// and g(t) = G(z(t)) at each sample.
FlowTrace integrate_optimistic(const SaddleProblem& problem, double alpha, double beta,
                               const Vec& z0, double h, double horizon);

/// Anchored dynamics dz/dt = -G(z) + gamma/t (z0 - z) from z(t0) = z0, with
/// the Lyapunov series V(t) = t^2 |g|^2 + 2 gamma t <g, z - z0>
///                         + gamma (gamma - 1) |z - z0|^2.
/// Steps are capped at a fraction of t near the singular start, then fixed h.
FlowTrace integrate_anchored(const SaddleProblem& problem, double gamma, const Vec& z0, double h,
                             double horizon, double t0 = 1e-4);

} // namespace saddleflow
