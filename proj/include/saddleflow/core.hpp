#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace saddleflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A point z = (x, u) in the product space R^m x R^n, stored stacked.
struct IteratePoint {
  Vec z;     // stacked (x, u)
  Index m{}; // primal block size; dual size is z.size() - m

  IteratePoint() = default;
  IteratePoint(Vec joint, Index primal_dim);
  static IteratePoint from_blocks(const Vec& x, const Vec& u);

  Index n() const { return z.size() - m; }
  auto x() const { return z.head(m); }
  auto u() const { return z.tail(z.size() - m); }
  bool finite() const;
};

// Magnitude beyond which a run is declared diverged (well before overflow,
// so CSV output stays parseable).
inline constexpr double kDivergenceLimit = 1e152;

bool iterate_ok(const Vec& z);

/// Counter-based random stream. A draw is a pure function of
/// (base_seed, stream_index, draw_index, lane), so identical streams replay
/// bit-for-bit and distinct stream indices are independent.
struct RngStream {
  std::uint64_t base_seed{};
  std::uint64_t stream_index{};
};

namespace rng {

std::uint64_t word(const RngStream& s, std::uint64_t draw_index, std::uint64_t lane);

// uniform in (0,1]
double uniform(const RngStream& s, std::uint64_t draw_index, std::uint64_t lane);

// dim unit Gaussian draws for the given draw_index (Box-Muller on counter words)
Vec gaussian(const RngStream& s, std::uint64_t draw_index, Index dim);

// uniform in [lo, hi]^dim
Vec uniform_box(const RngStream& s, std::uint64_t draw_index, Index dim, double lo, double hi);

} // namespace rng

/// Zero-mean Gaussian noise vector with scale sigma; the deterministic
/// function of (stream, k) behind every stochastic oracle draw.
Vec sample_noise(const RngStream& s, std::uint64_t k, Index dim, double sigma);

/// Affine solution set: basepoint + span(null_basis), columns orthonormal.
/// Zero columns means a singleton.
struct AffineSet {
  Vec basepoint;
  Mat null_basis;

  Index dim() const { return basepoint.size(); }
  bool singleton() const { return null_basis.cols() == 0; }
  Vec project(const Vec& z) const;
};

/// project_affine: Euclidean projection of z onto the set.
Vec project_affine(const AffineSet& set, const Vec& z);
IteratePoint project_affine(const AffineSet& set, const IteratePoint& z);

/// Certified second-moment bounds for the stochastic oracle:
/// E |g(z1;w1) - g(z2;w2)|^2 <= r1^2 |z1 - z2|^2 + r2^2.
struct NoiseBounds {
  double r1{};
  double r2{};
};

/// G(z) = Mz + c for the quadratic family.
struct AffineForm {
  Mat M;
  Vec c;
};

enum class ProblemKind { affine, nonsmooth_abs };

/// Immutable bundle of a monotone saddle operator: deterministic oracle G,
/// stochastic oracle G + sigma*xi, dimensions, and the solution set when known.
/// Shareable across concurrent runs.
class SaddleProblem {
 public:
  static SaddleProblem make_affine(std::string id, Index primal_dim, Mat M, Vec c,
                                   double sigma = 0.0);
  static SaddleProblem make_nonsmooth_abs(double sigma = 0.0);

  ProblemKind kind() const { return kind_; }
  bool smooth() const { return kind_ == ProblemKind::affine; }
  Index primal_dim() const { return m_; }
  Index dual_dim() const { return n_; }
  Index dim() const { return m_ + n_; }
  const std::string& id() const { return id_; }

  /// Deterministic oracle: the selected subdifferential element
  /// (sign(0) = 0 at kinks).
  Vec oracle(const Vec& z) const;

  /// Stochastic oracle g(z; w_k) = G(z) + sigma * xi_k. draw_index keys the
  /// noise; equal (stream, draw_index) replays the same draw.
  Vec stochastic_oracle(const Vec& z, const RngStream& s, std::uint64_t draw_index) const;

  double noise_sigma() const { return sigma_; }
  std::optional<double> lipschitz() const { return lipschitz_; }
  std::optional<NoiseBounds> noise_bounds() const { return noise_bounds_; }
  const std::optional<AffineSet>& zero_set() const { return zero_set_; }
  const std::optional<AffineForm>& affine_form() const { return affine_; }

  /// Same problem with a different noise scale.
  SaddleProblem with_noise(double sigma) const;

 private:
  SaddleProblem() = default;

  ProblemKind kind_{ProblemKind::affine};
  std::string id_;
  Index m_{}, n_{};
  std::optional<AffineForm> affine_;
  double sigma_{};
  std::optional<double> lipschitz_;
  std::optional<NoiseBounds> noise_bounds_;
  std::optional<AffineSet> zero_set_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

} // namespace detail

} // namespace saddleflow
