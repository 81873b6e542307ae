#include "saddleflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace saddleflow {

RateFit fit_rate(const std::vector<std::pair<std::int64_t, double>>& series,
                 std::int64_t window_lo, std::int64_t window_hi) {
  detail::require(window_lo >= 1 && window_lo < window_hi, "fit_rate: bad window");
  std::vector<double> lx, ly;
  for (const auto& [k, v] : series) {
    if (k < window_lo || k > window_hi) continue;
    detail::require(v > 0.0, "fit_rate: nonpositive value inside the fit window");
    lx.push_back(std::log(static_cast<double>(k)));
    ly.push_back(std::log(v));
  }
  detail::require(lx.size() >= 10, "fit_rate: need at least 10 points in the window");

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.points = lx.size();
  const double ss_res = syy - fit.slope * sxy;
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  return fit;
}

RateFit fit_rate(const std::vector<std::int64_t>& ks, const std::vector<double>& values,
                 std::int64_t window_lo, std::int64_t window_hi) {
  detail::require(ks.size() == values.size(), "fit_rate: size mismatch");
  std::vector<std::pair<std::int64_t, double>> series(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) series[i] = {ks[i], values[i]};
  return fit_rate(series, window_lo, window_hi);
}

Theorem2Report check_theorem2_bound(const RunRecord& record, const SaddleProblem& problem,
                                    double alpha, double beta) {
  detail::require(alpha > 0.0 && beta > 0.0,
                  "theorem-2 bound: requires alpha > 0 and beta > 0");
  const auto R_opt = problem.lipschitz();
  detail::require(R_opt.has_value(), "theorem-2 bound: problem has no Lipschitz constant");
  const double R = *R_opt;
  detail::require(alpha < 2.0 * beta * (1.0 - 2.0 * beta * R),
                  "theorem-2 bound: precondition alpha < 2*beta*(1 - 2*beta*R) fails");
  detail::require(problem.zero_set().has_value(), "theorem-2 bound: zero set unknown");
  detail::require(!record.steps.empty() && record.steps.front() == 0,
                  "theorem-2 bound: record must log k = 0");

  const Vec& z0 = record.iterates.front();
  const Vec zeta0 = z0 + beta * problem.oracle(z0);
  const Vec zstar = problem.zero_set()->project(zeta0);
  const double dist2 = (zeta0 - zstar).squaredNorm();

  Theorem2Report report;
  report.bound_constant =
      (2.0 + 2.0 * beta * beta * R * R) / (alpha * (2.0 * beta - alpha - 4.0 * beta * beta * R));
  report.initial_distance2 = dist2;
  report.worst_ratio = 0.0;
  report.worst_k = -1;

  for (std::size_t i = 0; i < record.rows(); ++i) {
    const std::int64_t k = record.steps[i];
    if (k < 1) continue;
    const double lhs = record.min_grad_norm2[i];
    const double rhs = report.bound_constant * dist2 / static_cast<double>(k);
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs <= 1e-24 ? 0.0
                                                : std::numeric_limits<double>::infinity());
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_k = k;
      report.lhs_at_worst = lhs;
      report.rhs_at_worst = rhs;
    }
  }
  report.holds = report.worst_ratio <= 1.0;
  return report;
}

SeedAggregate aggregate_seeds(const std::vector<RunRecord>& records, const std::string& metric) {
  detail::require(records.size() >= 2, "aggregate_seeds: need at least 2 records");
  const auto column = [&](const RunRecord& r) -> const std::vector<double>& {
    if (metric == "dist2_ref") return r.dist2_ref;
    if (metric == "grad_norm2") return r.grad_norm2;
    if (metric == "min_grad_norm2") return r.min_grad_norm2;
    throw std::invalid_argument("aggregate_seeds: unknown metric '" + metric + "'");
  };
  for (const auto& r : records)
    detail::require(r.steps == records.front().steps,
                    "aggregate_seeds: records have mismatched checkpoint grids");

  const std::size_t rows = records.front().rows();
  const double n = static_cast<double>(records.size());
  SeedAggregate agg;
  agg.steps = records.front().steps;
  agg.seed_count = static_cast<int>(records.size());
  agg.mean.resize(rows);
  agg.stderr_.resize(rows);
  agg.median.resize(rows);

  std::vector<double> sample(records.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t s = 0; s < records.size(); ++s) sample[s] = column(records[s])[i];
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    agg.mean[i] = mean;
    agg.stderr_[i] = std::sqrt(var / n);
    std::sort(sample.begin(), sample.end());
    const std::size_t mid = sample.size() / 2;
    agg.median[i] =
        sample.size() % 2 == 1 ? sample[mid] : 0.5 * (sample[mid - 1] + sample[mid]);
  }
  return agg;
}

namespace {

struct LemmaTracker {
  LemmaReport* report;

  void check(const std::string& lemma, double p, std::int64_t k, double slack) {
    ++report->checks;
    if (slack < 0.0) report->violations.push_back({lemma, p, k, slack});
    auto it = std::find_if(report->tightest.begin(), report->tightest.end(),
                           [&](const LemmaInstance& e) { return e.lemma == lemma; });
    if (it == report->tightest.end())
      report->tightest.push_back({lemma, p, k, slack});
    else if (slack < it->slack)
      *it = {lemma, p, k, slack};
  }
};

} // namespace

LemmaReport check_appendix_lemmas(const std::vector<double>& p_grid,
                                  const std::vector<std::int64_t>& k_grid,
                                  const RngStream& rng) {
  LemmaReport report;
  LemmaTracker track{&report};

  for (double p : p_grid) {
    detail::require(p > 0.0 && p < 1.0, "lemma check: p grid must lie in (0, 1)");
    for (std::int64_t k : k_grid) {
      detail::require(k >= 1, "lemma check: k grid must be >= 1");
      const double kd = static_cast<double>(k);
      // ((k+1)^p - k^p) / k^p = (1 + 1/k)^p - 1, evaluated in expm1/log1p
      // form; the naive power difference loses the low bits that the k^{-3}
      // scale comparisons below depend on.
      const double mid = std::expm1(p * std::log1p(1.0 / kd));

      // p/k - p(1-p)/(2k^2) < mid < p/k
      track.check("kp-ineq1-lower", p, k, mid - (p / kd - p * (1.0 - p) / (2.0 * kd * kd)));
      track.check("kp-ineq1-upper", p, k, p / kd - mid);
      // p/(k+1) < mid
      track.check("kp-ineq2", p, k, mid - p / (kd + 1.0));
      // 0 <= p/(k(k+1)) - mid/(k+1) <= p(1-p)/(2k^3)
      const double diff = (p / kd - mid) / (kd + 1.0);
      track.check("c1kp-lower", p, k, diff);
      track.check("c1kp-upper", p, k, p * (1.0 - p) / (2.0 * kd * kd * kd) - diff);
    }
  }

  // Summation identity: sum_{j=1..k} [ j(j+1)/2 (V_j - V_{j-1}) + j V_{j-1} ]
  //                     = k(k+1)/2 V_k, for arbitrary real sequences.
  for (int rep = 0; rep < 8; ++rep) {
    const std::int64_t k = 1 + (rep % 4) * 333;
    const Vec v = rng::gaussian(rng, 1000 + static_cast<std::uint64_t>(rep), k + 1);
    double lhs = 0.0;
    for (std::int64_t j = 1; j <= k; ++j) {
      const double jd = static_cast<double>(j);
      lhs += jd * (jd + 1.0) / 2.0 * (v[j] - v[j - 1]) + jd * v[j - 1];
    }
    const double rhs = static_cast<double>(k) * (static_cast<double>(k) + 1.0) / 2.0 * v[k];
    const double scale = std::max(1.0, std::abs(rhs));
    track.check("summation-identity", 0.0, k, 1e-9 - std::abs(lhs - rhs) / scale);
  }

  // Polarization identity: |z_{k+1}-z_0|^2/2 - |z_k-z_0|^2/2
  //                        = <z_{k+1}-z_k, (z_{k+1}+z_k)/2 - z_0>.
  for (int rep = 0; rep < 8; ++rep) {
    const Index d = 3;
    const Vec z0 = rng::gaussian(rng, 2000 + static_cast<std::uint64_t>(rep), d);
    const Vec zk = rng::gaussian(rng, 3000 + static_cast<std::uint64_t>(rep), d);
    const Vec zk1 = rep % 2 == 0
                        ? Vec(rng::gaussian(rng, 4000 + static_cast<std::uint64_t>(rep), d))
                        : zk;  // the z_{k+1} = z_k degenerate case
    const double lhs = 0.5 * (zk1 - z0).squaredNorm() - 0.5 * (zk - z0).squaredNorm();
    const double rhs = (zk1 - zk).dot(0.5 * (zk1 + zk) - z0);
    const double scale = std::max(1.0, std::abs(rhs));
    track.check("polarization-identity", 0.0, rep, 1e-12 - std::abs(lhs - rhs) / scale);
  }

  return report;
}

LemmaReport check_appendix_lemmas() {
  std::vector<double> p_grid;
  for (int i = 1; i <= 9; ++i) p_grid.push_back(0.1 * i);
  return check_appendix_lemmas(p_grid, {1, 2, 10, 1000, 1000000}, RngStream{0x5eed, 0});
}

DistanceColumns distance_metrics(const RunRecord& record, const SaddleProblem& problem) {
  detail::require(problem.zero_set().has_value(), "distance_metrics: zero set unknown");
  const AffineSet& zs = *problem.zero_set();
  detail::require(!record.iterates.empty(), "distance_metrics: empty record");
  const Vec ref = zs.project(record.iterates.front());
  DistanceColumns cols;
  cols.dist2_fixed.reserve(record.rows());
  cols.dist2_pointwise.reserve(record.rows());
  for (const Vec& z : record.iterates) {
    cols.dist2_fixed.push_back((z - ref).squaredNorm());
    cols.dist2_pointwise.push_back((z - zs.project(z)).squaredNorm());
  }
  return cols;
}

nlohmann::json to_json(const RateFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"window", {fit.window_lo, fit.window_hi}},
          {"r_squared", fit.r_squared},
          {"points", fit.points}};
}

nlohmann::json to_json(const Theorem2Report& report) {
  return {{"holds", report.holds},
          {"worst_ratio", report.worst_ratio},
          {"worst_k", report.worst_k},
          {"bound_constant", report.bound_constant},
          {"initial_distance2", report.initial_distance2},
          {"lhs_at_worst", report.lhs_at_worst},
          {"rhs_at_worst", report.rhs_at_worst}};
}

nlohmann::json to_json(const LemmaReport& report) {
  nlohmann::json viol = nlohmann::json::array();
  for (const auto& v : report.violations)
    viol.push_back({{"lemma", v.lemma}, {"p", v.p}, {"k", v.k}, {"slack", v.slack}});
  nlohmann::json tight = nlohmann::json::array();
  for (const auto& v : report.tightest)
    tight.push_back({{"lemma", v.lemma}, {"p", v.p}, {"k", v.k}, {"slack", v.slack}});
  return {{"checks", report.checks},
          {"all_hold", report.all_hold()},
          {"violations", viol},
          {"tightest_instances", tight}};
}

} // namespace saddleflow
