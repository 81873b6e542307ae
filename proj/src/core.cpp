#include "saddleflow/core.hpp"

#include <cmath>
#include <numbers>

namespace saddleflow {

IteratePoint::IteratePoint(Vec joint, Index primal_dim) : z(std::move(joint)), m(primal_dim) {
  detail::require(m >= 0 && m <= z.size(), "IteratePoint: primal dimension out of range");
}

IteratePoint IteratePoint::from_blocks(const Vec& x, const Vec& u) {
  Vec joint(x.size() + u.size());
  joint << x, u;
  return IteratePoint(std::move(joint), x.size());
}

bool IteratePoint::finite() const { return iterate_ok(z); }

bool iterate_ok(const Vec& z) {
  if (!z.allFinite()) return false;
  return z.size() == 0 || z.cwiseAbs().maxCoeff() <= kDivergenceLimit;
}

namespace rng {

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

std::uint64_t word(const RngStream& s, std::uint64_t draw_index, std::uint64_t lane) {
  std::uint64_t h = splitmix64(s.base_seed);
  h = splitmix64(h ^ (s.stream_index + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ (draw_index + 0x9e6c63d0876a46c3ULL));
  return splitmix64(h ^ lane);
}

double uniform(const RngStream& s, std::uint64_t draw_index, std::uint64_t lane) {
  // 53 random bits, mapped to (0, 1] so log() below is safe
  return static_cast<double>((word(s, draw_index, lane) >> 11) + 1) * 0x1.0p-53;
}

Vec gaussian(const RngStream& s, std::uint64_t draw_index, Index dim) {
  Vec out(dim);
  for (Index i = 0; i < dim; i += 2) {
    const double u1 = uniform(s, draw_index, static_cast<std::uint64_t>(i));
    const double u2 = uniform(s, draw_index, static_cast<std::uint64_t>(i) + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    out[i] = r * std::cos(phi);
    if (i + 1 < dim) out[i + 1] = r * std::sin(phi);
  }
  return out;
}

Vec uniform_box(const RngStream& s, std::uint64_t draw_index, Index dim, double lo, double hi) {
  Vec out(dim);
  for (Index i = 0; i < dim; ++i)
    out[i] = lo + (hi - lo) * uniform(s, draw_index, static_cast<std::uint64_t>(i));
  return out;
}

} // namespace rng

Vec sample_noise(const RngStream& s, std::uint64_t k, Index dim, double sigma) {
  detail::require(dim >= 1, "sample_noise: dim must be >= 1");
  if (sigma == 0.0) return Vec::Zero(dim);
  return sigma * rng::gaussian(s, k, dim);
}

Vec AffineSet::project(const Vec& z) const {
  detail::require(z.size() == basepoint.size(), "project_affine: dimension mismatch");
  if (singleton()) return basepoint;
  const Vec delta = z - basepoint;
  return basepoint + null_basis * (null_basis.transpose() * delta);
}

Vec project_affine(const AffineSet& set, const Vec& z) { return set.project(z); }

IteratePoint project_affine(const AffineSet& set, const IteratePoint& z) {
  return IteratePoint(set.project(z.z), z.m);
}

SaddleProblem SaddleProblem::make_nonsmooth_abs(double sigma) {
  SaddleProblem p;
  p.kind_ = ProblemKind::nonsmooth_abs;
  p.id_ = "nonsmooth-abs";
  p.m_ = 1;
  p.n_ = 1;
  p.sigma_ = sigma;
  // |G(z1)-G(z2)|^2 <= 2|A(z1-z2)|^2 + 2|sign jumps|^2 with |A|=1 and sign
  // jumps of at most 2 per coordinate; noise adds 2*sigma^2*dim.
  p.noise_bounds_ = NoiseBounds{std::sqrt(2.0), std::sqrt(16.0 + 2.0 * sigma * sigma * 2.0)};
  AffineSet zs;
  zs.basepoint = Vec::Zero(2);
  zs.null_basis = Mat::Zero(2, 0);
  p.zero_set_ = std::move(zs);
  return p;
}

namespace {

inline double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

} // namespace

Vec SaddleProblem::oracle(const Vec& z) const {
  detail::require(z.size() == dim(), "oracle: dimension mismatch");
  if (kind_ == ProblemKind::affine) return affine_->M * z + affine_->c;
  // L(x,u) = |x| + xu - |u|
  Vec g(2);
  g[0] = sign0(z[0]) + z[1];
  g[1] = -z[0] + sign0(z[1]);
  return g;
}

Vec SaddleProblem::stochastic_oracle(const Vec& z, const RngStream& s,
                                     std::uint64_t draw_index) const {
  Vec g = oracle(z);
  if (sigma_ != 0.0) g += sigma_ * rng::gaussian(s, draw_index, dim());
  return g;
}

SaddleProblem SaddleProblem::with_noise(double sigma) const {
  detail::require(sigma >= 0.0, "with_noise: sigma must be nonnegative");
  if (kind_ == ProblemKind::nonsmooth_abs) return make_nonsmooth_abs(sigma);
  SaddleProblem p = *this;
  p.sigma_ = sigma;
  if (p.lipschitz_)
    p.noise_bounds_ =
        NoiseBounds{*p.lipschitz_, std::sqrt(2.0 * static_cast<double>(dim())) * sigma};
  return p;
}

} // namespace saddleflow
