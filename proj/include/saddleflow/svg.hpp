#pragma once

#include <string>
#include <vector>

namespace saddleflow {

/// Log-log series plot: one line per series plus an optional shaded
/// mean +/- stderr band. Written directly as SVG, no plotting dependency.
struct LogLogSeries {
  std::string label;
  std::string color{"#1f6fb2"};
  std::vector<double> x;
  std::vector<double> y;
};

struct LogLogBand {
  std::string color{"#1f6fb2"};
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
};

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<LogLogSeries>& series,
                      const std::vector<LogLogBand>& bands);

/// Phase portrait in the (x, u) plane with start/end markers.
void write_phase_svg(const std::string& path, const std::string& title,
                     const std::vector<double>& xs, const std::vector<double>& us);

} // namespace saddleflow
