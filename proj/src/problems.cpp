#include "saddleflow/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace saddleflow {

namespace {

// Singular values below this fraction of sigma_max are treated as zero when
// identifying the null space.
constexpr double kNullSpaceCut = 1e-10;

AffineSet solve_zero_set(const Mat& M, const Vec& c) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec particular = svd.solve(-c); // min-norm least-squares solution
  const double residual = (M * particular + c).norm();
  const double scale = std::max(1.0, c.norm());
  detail::require(residual <= 1e-8 * scale,
                  "make_quadratic: Mz = -c is inconsistent (no saddle point exists)");

  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kNullSpaceCut * smax) ++rank;

  AffineSet zs;
  zs.basepoint = particular;
  zs.null_basis = svd.matrixV().rightCols(M.cols() - rank);
  return zs;
}

} // namespace

SaddleProblem SaddleProblem::make_affine(std::string id, Index primal_dim, Mat M, Vec c,
                                         double sigma) {
  detail::require(M.rows() == M.cols(), "make_affine: M must be square");
  detail::require(c.size() == M.rows(), "make_affine: c/M size mismatch");
  detail::require(primal_dim >= 0 && primal_dim <= M.rows(), "make_affine: bad primal dim");
  detail::require(sigma >= 0.0, "make_affine: sigma must be nonnegative");

  const Mat sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const double min_eig = es.eigenvalues().size() > 0 ? es.eigenvalues().minCoeff() : 0.0;
  detail::require(min_eig >= -1e-10,
                  "make_affine: symmetric part of M is indefinite (operator not monotone)");

  SaddleProblem p;
  p.kind_ = ProblemKind::affine;
  p.id_ = std::move(id);
  p.m_ = primal_dim;
  p.n_ = M.rows() - primal_dim;
  p.zero_set_ = solve_zero_set(M, c);
  p.lipschitz_ = M.jacobiSvd().singularValues()(0);
  p.sigma_ = sigma;
  p.noise_bounds_ =
      NoiseBounds{*p.lipschitz_, std::sqrt(2.0 * static_cast<double>(M.rows())) * sigma};
  p.affine_ = AffineForm{std::move(M), std::move(c)};
  return p;
}

SaddleProblem make_bilinear(double sigma) {
  Mat M(2, 2);
  M << 0, 1, -1, 0;
  return SaddleProblem::make_affine("bilinear", 1, std::move(M), Vec::Zero(2), sigma);
}

SaddleProblem make_regularized(double rho, double sigma) {
  detail::require(rho > 0.0, "make_regularized: rho must be positive");
  Mat M(2, 2);
  M << rho, 1, -1, 0;
  std::ostringstream id;
  id << "regularized:" << rho;
  return SaddleProblem::make_affine(id.str(), 1, std::move(M), Vec::Zero(2), sigma);
}

SaddleProblem make_quadratic(const Mat& P, const Mat& Q, const Mat& B, const Vec& c,
                             double sigma) {
  const Index m = P.rows();
  const Index n = Q.rows();
  detail::require(m >= 1 && n >= 1, "make_quadratic: need m >= 1 and n >= 1");
  detail::require(P.cols() == m && Q.cols() == n, "make_quadratic: P, Q must be square");
  detail::require(B.rows() == m && B.cols() == n, "make_quadratic: B must be m x n");
  detail::require(c.size() == m + n, "make_quadratic: c must have length m + n");
  detail::require((P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, P.cwiseAbs().maxCoeff()),
                  "make_quadratic: P must be symmetric");
  detail::require((Q - Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, Q.cwiseAbs().maxCoeff()),
                  "make_quadratic: Q must be symmetric");

  Mat M(m + n, m + n);
  M.topLeftCorner(m, m) = P;
  M.topRightCorner(m, n) = B;
  M.bottomLeftCorner(n, m) = -B.transpose();
  M.bottomRightCorner(n, n) = Q;
  return SaddleProblem::make_affine("quadratic", m, std::move(M), c, sigma);
}

SaddleProblem make_nonsmooth_abs(double sigma) { return SaddleProblem::make_nonsmooth_abs(sigma); }

SaddleProblem make_rank_deficient(double sigma) {
  Mat M = Mat::Zero(4, 4);
  M(0, 2) = 1.0;  // B coupling on the (x1, u1) pair only
  M(2, 0) = -1.0;
  return SaddleProblem::make_affine("rank-deficient", 2, std::move(M), Vec::Zero(4), sigma);
}

namespace {

Mat parse_matrix(const nlohmann::json& j, const std::string& name) {
  detail::require(j.is_array() && !j.empty(), "quadratic file: " + name + " must be a nonempty array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Mat out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    detail::require(static_cast<Index>(j[i].size()) == cols,
                    "quadratic file: ragged rows in " + name);
    for (Index k = 0; k < cols; ++k) out(i, k) = j[i][k].get<double>();
  }
  return out;
}

Vec parse_vector(const nlohmann::json& j, const std::string& name) {
  detail::require(j.is_array(), "quadratic file: " + name + " must be an array");
  Vec out(static_cast<Index>(j.size()));
  for (Index i = 0; i < out.size(); ++i) out[i] = j[i].get<double>();
  return out;
}

} // namespace

SaddleProblem load_quadratic_file(const std::string& path, double sigma) {
  std::ifstream in(path);
  detail::require(in.good(), "quadratic file: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  for (const char* key : {"P", "Q", "B", "c"})
    detail::require(j.contains(key), std::string("quadratic file: missing key ") + key);
  return make_quadratic(parse_matrix(j["P"], "P"), parse_matrix(j["Q"], "Q"),
                        parse_matrix(j["B"], "B"), parse_vector(j["c"], "c"), sigma);
}

SaddleProblem problem_by_id(const std::string& id, double sigma) {
  if (id == "bilinear") return make_bilinear(sigma);
  if (id == "nonsmooth-abs") return make_nonsmooth_abs(sigma);
  if (id == "rank-deficient") return make_rank_deficient(sigma);
  if (id.rfind("regularized:", 0) == 0) {
    const std::string arg = id.substr(12);
    try {
      return make_regularized(std::stod(arg), sigma);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("problem id: bad rho in '" + id + "'");
    }
  }
  if (id.rfind("quadratic:", 0) == 0) return load_quadratic_file(id.substr(10), sigma);
  throw std::invalid_argument("unknown problem id '" + id + "'");
}

} // namespace saddleflow
