#pragma once

#include <span>
#include <vector>

#include "saddleflow/core.hpp"

namespace saddleflow {

struct CocoercivityReport {
  double min_slack{};   // min over pairs of <Gb1-Gb2, z1-z2> - beta |Gb1-Gb2|^2
  int pairs_checked{};
};

/// Resolvent machinery for the supported operator families. Affine G uses a
/// direct linear solve of (I + tau*M); the nonsmooth separable problem is
/// solved exactly by case analysis over the sign pattern.
class ResolventSolver {
 public:
  explicit ResolventSolver(const SaddleProblem& problem);

  const SaddleProblem& problem() const { return *problem_; }

  /// (I + tau*G)^{-1}(z0); nonexpansive, exact up to the linear solve.
  Vec resolve(double tau, const Vec& z0) const;

  /// Moreau-Yosida regularized operator G_beta(z) = (z - resolve(beta, z)) / beta.
  Vec moreau_yosida(double beta, const Vec& z) const;

  /// Samples pairs in a box and reports the minimum cocoercivity slack of
  /// G_beta; the operator contract is min_slack >= -1e-9.
  CocoercivityReport certify_cocoercivity(double beta, int n_pairs, const RngStream& rng,
                                          double box_halfwidth = 2.0) const;

  /// Resolvent points (I + tau*G)^{-1}(z0) along an increasing tau grid;
  /// their distances to the zero-set projection of z0 decay like O(1/tau).
  std::vector<Vec> trajectory(std::span<const double> tau_grid, const Vec& z0) const;

 private:
  Vec resolve_affine(double tau, const Vec& z0) const;
  Vec resolve_nonsmooth(double tau, const Vec& z0) const;

  const SaddleProblem* problem_;
};

} // namespace saddleflow
