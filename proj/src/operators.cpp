#include "saddleflow/operators.hpp"

#include <cmath>
#include <limits>

namespace saddleflow {

ResolventSolver::ResolventSolver(const SaddleProblem& problem) : problem_(&problem) {
  detail::require(problem.kind() == ProblemKind::affine ||
                      problem.kind() == ProblemKind::nonsmooth_abs,
                  "ResolventSolver: unsupported problem structure");
}

Vec ResolventSolver::resolve(double tau, const Vec& z0) const {
  detail::require(tau > 0.0, "resolve: tau must be positive");
  detail::require(z0.size() == problem_->dim(), "resolve: dimension mismatch");
  return problem_->kind() == ProblemKind::affine ? resolve_affine(tau, z0)
                                                 : resolve_nonsmooth(tau, z0);
}

Vec ResolventSolver::resolve_affine(double tau, const Vec& z0) const {
  const AffineForm& f = *problem_->affine_form();
  const Mat A = Mat::Identity(f.M.rows(), f.M.cols()) + tau * f.M;
  return A.partialPivLu().solve(z0 - tau * f.c);
}

namespace {

// y + tau*G(y) = z for G(x,u) = (d|x| + u, -x + d|u|), solved by scanning the
// nine sign patterns of (x, u). Maximal monotonicity makes the solution
// unique, so the first consistent pattern wins.
Vec resolve_abs_case(double tau, const Vec& z) {
  const double zx = z[0], zu = z[1];
  const double det = 1.0 + tau * tau;
  constexpr double tol = 1e-12;

  // x != 0, u != 0
  for (double sx : {1.0, -1.0}) {
    for (double su : {1.0, -1.0}) {
      const double bx = zx - tau * sx;
      const double bu = zu - tau * su;
      const double x = (bx - tau * bu) / det;
      const double u = (tau * bx + bu) / det;
      if (x * sx > tol && u * su > tol) return Vec{{x, u}};
    }
  }
  // x = 0, u != 0: the x-subgradient v = zx/tau - u must fit in [-1, 1]
  for (double su : {1.0, -1.0}) {
    const double u = zu - tau * su;
    if (u * su > tol && std::abs(zx / tau - u) <= 1.0 + tol) return Vec{{0.0, u}};
  }
  // x != 0, u = 0: the u-subgradient w = zu/tau + x must fit in [-1, 1]
  for (double sx : {1.0, -1.0}) {
    const double x = zx - tau * sx;
    if (x * sx > tol && std::abs(zu / tau + x) <= 1.0 + tol) return Vec{{x, 0.0}};
  }
  // x = 0, u = 0
  if (std::abs(zx) <= tau * (1.0 + tol) && std::abs(zu) <= tau * (1.0 + tol))
    return Vec::Zero(2);

  throw std::runtime_error("resolve: no consistent sign pattern (should not happen)");
}

} // namespace

Vec ResolventSolver::resolve_nonsmooth(double tau, const Vec& z0) const {
  return resolve_abs_case(tau, z0);
}

Vec ResolventSolver::moreau_yosida(double beta, const Vec& z) const {
  detail::require(beta > 0.0, "moreau_yosida: beta must be positive");
  return (z - resolve(beta, z)) / beta;
}

CocoercivityReport ResolventSolver::certify_cocoercivity(double beta, int n_pairs,
                                                         const RngStream& rng,
                                                         double box_halfwidth) const {
  detail::require(n_pairs >= 1, "certify_cocoercivity: need at least one pair");
  const Index d = problem_->dim();
  CocoercivityReport report{std::numeric_limits<double>::infinity(), n_pairs};
  for (int i = 0; i < n_pairs; ++i) {
    const Vec z1 = rng::uniform_box(rng, 2 * static_cast<std::uint64_t>(i), d, -box_halfwidth,
                                    box_halfwidth);
    const Vec z2 = rng::uniform_box(rng, 2 * static_cast<std::uint64_t>(i) + 1, d,
                                    -box_halfwidth, box_halfwidth);
    const Vec dg = moreau_yosida(beta, z1) - moreau_yosida(beta, z2);
    const double slack = dg.dot(z1 - z2) - beta * dg.squaredNorm();
    report.min_slack = std::min(report.min_slack, slack);
  }
  return report;
}

std::vector<Vec> ResolventSolver::trajectory(std::span<const double> tau_grid,
                                             const Vec& z0) const {
  detail::require(!tau_grid.empty(), "trajectory: empty tau grid");
  for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i)
    detail::require(tau_grid[i] < tau_grid[i + 1], "trajectory: tau grid must be increasing");
  std::vector<Vec> out;
  out.reserve(tau_grid.size());
  for (double tau : tau_grid) out.push_back(resolve(tau, z0));
  return out;
}

} // namespace saddleflow
