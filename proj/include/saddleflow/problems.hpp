#pragma once

#include <string>

#include "saddleflow/core.hpp"

namespace saddleflow {

/// L0(x,u) = xu, the canonical cycling counterexample: G0(x,u) = (u, -x).
SaddleProblem make_bilinear(double sigma = 0.0);

/// L_rho(x,u) = (rho/2) x^2 + xu: G(x,u) = (rho*x + u, -x). Strictly convex
/// in x for rho > 0.
SaddleProblem make_regularized(double rho, double sigma = 0.0);

/// General monotone-affine member: L = (1/2)x'Px + x'Bu - (1/2)u'Qu plus
/// linear terms, so G(z) = Mz + c with M = [[P, B], [-B', Q]].
/// Rejects indefinite symmetric parts and inconsistent c (no saddle point).
SaddleProblem make_quadratic(const Mat& P, const Mat& Q, const Mat& B, const Vec& c,
                             double sigma = 0.0);

/// L(x,u) = |x| + xu - |u| with the sign(0)=0 subgradient selection.
SaddleProblem make_nonsmooth_abs(double sigma = 0.0);

/// The rank-deficient coupling L = x1*u1 on R^2 x R^2; its zero set is the
/// plane {x1 = 0, u1 = 0}.
SaddleProblem make_rank_deficient(double sigma = 0.0);

/// Quadratic instance from a JSON file {"P": [[..]], "Q": [[..]], "B": [[..]], "c": [..]}.
SaddleProblem load_quadratic_file(const std::string& path, double sigma = 0.0);

/// Resolve a problem id: "bilinear", "regularized:<rho>", "quadratic:<file>",
/// "nonsmooth-abs", "rank-deficient".
SaddleProblem problem_by_id(const std::string& id, double sigma = 0.0);

} // namespace saddleflow
