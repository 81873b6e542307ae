#include "saddleflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace saddleflow {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

struct Axis {
  double lo{}, hi{};
  double to_px(double v, double px_lo, double px_hi) const {
    const double f = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return px_lo + f * (px_hi - px_lo);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void expand(Axis& a, double v) {
  a.lo = std::min(a.lo, v);
  a.hi = std::max(a.hi, v);
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                     double width) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
     << "\" points=\"";
  for (const auto& [x, y] : pts) os << fmt(x) << ',' << fmt(y) << ' ';
  os << "\"/>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw std::runtime_error("svg: cannot open " + path);
  out << body;
}

} // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<LogLogSeries>& series,
                      const std::vector<LogLogBand>& bands) {
  constexpr double kFloor = 1e-300;
  Axis ax{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Axis ay = ax;
  const auto scan = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] <= 0.0 || ys[i] <= 0.0 || !std::isfinite(ys[i])) continue;
      expand(ax, std::log10(xs[i]));
      expand(ay, std::log10(std::max(ys[i], kFloor)));
    }
  };
  for (const auto& s : series) scan(s.x, s.y);
  for (const auto& b : bands) {
    scan(b.x, b.lo);
    scan(b.x, b.hi);
  }
  if (!(ax.lo < ax.hi)) { ax.lo -= 0.5; ax.hi += 0.5; }
  if (!(ay.lo < ay.hi)) { ay.lo -= 0.5; ay.hi += 0.5; }

  const auto px = [&](double lx) { return ax.to_px(lx, kMarginL, kWidth - kMarginR); };
  const auto py = [&](double ly) { return ay.to_px(ly, kHeight - kMarginB, kMarginT); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // decade grid and tick labels
  for (int d = static_cast<int>(std::ceil(ax.lo)); d <= static_cast<int>(std::floor(ax.hi)); ++d) {
    const double x = px(d);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kMarginT << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << fmt(x) << "\" y=\"" << kHeight - kMarginB + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ay.lo)); d <= static_cast<int>(std::floor(ay.hi)); ++d) {
    const double y = py(d);
    svg << "<line x1=\"" << kMarginL << "\" y1=\"" << fmt(y) << "\" x2=\"" << kWidth - kMarginR
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kMarginL - 6 << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
  }

  for (const auto& b : bands) {
    std::ostringstream poly;
    poly << "<polygon fill=\"" << b.color << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < b.x.size(); ++i)
      if (b.x[i] > 0.0 && b.hi[i] > 0.0)
        poly << fmt(px(std::log10(b.x[i]))) << ','
             << fmt(py(std::log10(std::max(b.hi[i], kFloor)))) << ' ';
    for (std::size_t i = b.x.size(); i-- > 0;)
      if (b.x[i] > 0.0 && b.hi[i] > 0.0)
        poly << fmt(px(std::log10(b.x[i]))) << ','
             << fmt(py(std::log10(std::max(b.lo[i], kFloor)))) << ' ';
    poly << "\"/>\n";
    svg << poly.str();
  }

  int legend_row = 0;
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.y[i]))
        pts.emplace_back(px(std::log10(s.x[i])), py(std::log10(s.y[i])));
    svg << polyline(pts, s.color, 1.5);
    svg << "<text x=\"" << kWidth - kMarginR - 8 << "\" y=\"" << kMarginT + 16 * legend_row + 12
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << s.color << "\">" << s.label
        << "</text>\n";
    ++legend_row;
  }

  svg << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << kWidth - kMarginL - kMarginR << "\" height=\"" << kHeight - kMarginT - kMarginB
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">"
      << title << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << y_label << "</text>\n</svg>\n";
  write_file(path, svg.str());
}

void write_phase_svg(const std::string& path, const std::string& title,
                     const std::vector<double>& xs, const std::vector<double>& us) {
  if (xs.size() != us.size() || xs.empty())
    throw std::invalid_argument("phase svg: bad trajectory");
  Axis ax{xs[0], xs[0]}, ay{us[0], us[0]};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    expand(ax, xs[i]);
    expand(ay, us[i]);
  }
  // pad and keep the aspect ratio square-ish
  const double span = std::max({ax.hi - ax.lo, ay.hi - ay.lo, 1e-6});
  const double cx = 0.5 * (ax.lo + ax.hi), cy = 0.5 * (ay.lo + ay.hi);
  ax = {cx - 0.6 * span, cx + 0.6 * span};
  ay = {cy - 0.6 * span, cy + 0.6 * span};

  const auto px = [&](double v) { return ax.to_px(v, kMarginL, kWidth - kMarginR); };
  const auto py = [&](double v) { return ay.to_px(v, kHeight - kMarginB, kMarginT); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (ax.lo < 0.0 && ax.hi > 0.0)
    svg << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << kMarginT << "\" x2=\"" << fmt(px(0))
        << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"#cccccc\"/>\n";
  if (ay.lo < 0.0 && ay.hi > 0.0)
    svg << "<line x1=\"" << kMarginL << "\" y1=\"" << fmt(py(0)) << "\" x2=\""
        << kWidth - kMarginR << "\" y2=\"" << fmt(py(0)) << "\" stroke=\"#cccccc\"/>\n";

  std::vector<std::pair<double, double>> pts;
  pts.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(px(xs[i]), py(us[i]));
  svg << polyline(pts, "#b22222", 1.5)
      << "<circle cx=\"" << fmt(pts.front().first) << "\" cy=\"" << fmt(pts.front().second)
      << "\" r=\"4\" fill=\"#1f6fb2\"/>\n"
      << "<circle cx=\"" << fmt(pts.back().first) << "\" cy=\"" << fmt(pts.back().second)
      << "\" r=\"4\" fill=\"#b22222\"/>\n"
      << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << kWidth - kMarginL - kMarginR << "\" height=\"" << kHeight - kMarginT - kMarginB
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">"
      << title << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">x</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2 << "\" font-size=\"12\" text-anchor=\"middle\">u"
      << "</text>\n</svg>\n";
  write_file(path, svg.str());
}

} // namespace saddleflow
