#pragma once

#include <cstdint>

#include "saddleflow/core.hpp"

namespace saddleflow {

/// Step-size sequence: constant a0, or a0 / (k + offset)^exponent. The two
/// power indexing conventions in use differ only in whether the sequence is
/// 1-indexed (offset k, defined for k >= 1) or 0-indexed (offset k+1).
struct StepSchedule {
  enum class Kind { constant, power };
  enum class Offset { k, k_plus_1 };

  Kind kind{Kind::constant};
  double a0{1.0};
  double exponent{0.0};
  Offset offset{Offset::k_plus_1};

  static StepSchedule constant(double a0);
  static StepSchedule power(double a0, double exponent, Offset offset = Offset::k_plus_1);

  /// Value at sequence index k under the schedule's own indexing convention.
  /// Power schedules with offset k are defined for k >= 1 only.
  double value(std::int64_t k) const;

  /// Value consumed at loop step i = 0, 1, ...; a 1-indexed schedule feeds
  /// its k = i + 1 entry, a 0-indexed one its k = i entry. For power
  /// schedules both give a0 / (i+1)^exponent.
  double value_at_step(std::int64_t step) const;

  /// True when the power exponent lies in (1/2, 1], the summability range
  /// sum a_k = inf, sum a_k^2 < inf.
  bool summability_ok() const;
};

double schedule_value(const StepSchedule& s, std::int64_t k);

} // namespace saddleflow
