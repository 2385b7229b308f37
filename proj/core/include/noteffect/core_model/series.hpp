#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "noteffect/core_model/metric.hpp"
#include "noteffect/util/time.hpp"

namespace noteffect {

enum class AvailabilityClass {
  fully_available,
  dropped_pre_treatment,
  dropped_post_treatment,
  only_post_treatment,
  unavailable,
};

std::string_view to_string(AvailabilityClass a);

// Values of one metric on the 15-minute grid anchored at post creation.
// values[k] is the value at age (first_step + k) * kGridStep.
struct EngagementSeries {
  MetricKind metric = MetricKind::views;
  int first_step = 0;
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  int last_step() const { return first_step + static_cast<int>(values.size()) - 1; }
  bool contains(int step) const { return !empty() && step >= first_step && step <= last_step(); }
  bool covers(int from, int to) const { return !empty() && from >= first_step && to <= last_step(); }
  double at(int step) const { return values[static_cast<std::size_t>(step - first_step)]; }
  std::optional<double> value_at(int step) const {
    if (!contains(step)) return std::nullopt;
    return at(step);
  }
  Millis age_of(std::size_t k) const { return (first_step + static_cast<Millis>(k)) * kGridStep; }

  friend bool operator==(const EngagementSeries&, const EngagementSeries&) = default;
};

}  // namespace noteffect
