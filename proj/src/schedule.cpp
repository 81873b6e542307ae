#include "saddleflow/schedule.hpp"

#include <cmath>

namespace saddleflow {

StepSchedule StepSchedule::constant(double a0) {
  detail::require(a0 > 0.0, "StepSchedule: a0 must be positive");
  return StepSchedule{Kind::constant, a0, 0.0, Offset::k_plus_1};
}

StepSchedule StepSchedule::power(double a0, double exponent, Offset offset) {
  detail::require(a0 > 0.0, "StepSchedule: a0 must be positive");
  detail::require(exponent >= 0.0 && exponent <= 1.0, "StepSchedule: exponent must lie in [0, 1]");
  return StepSchedule{Kind::power, a0, exponent, offset};
}

double StepSchedule::value(std::int64_t k) const {
  detail::require(k >= 0, "schedule_value: k must be nonnegative");
  if (kind == Kind::constant) return a0;
  const std::int64_t base = offset == Offset::k ? k : k + 1;
  detail::require(base >= 1, "schedule_value: power schedule with offset k starts at k = 1");
  return a0 / std::pow(static_cast<double>(base), exponent);
}

double StepSchedule::value_at_step(std::int64_t step) const {
  if (kind == Kind::constant) return a0;
  return a0 / std::pow(static_cast<double>(step + 1), exponent);
}

bool StepSchedule::summability_ok() const {
  return kind == Kind::power && exponent > 0.5 && exponent <= 1.0;
}

double schedule_value(const StepSchedule& s, std::int64_t k) { return s.value(k); }

} // namespace saddleflow
