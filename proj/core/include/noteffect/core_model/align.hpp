#pragma once

#include <span>
#include <string>
#include <vector>

#include "noteffect/core_model/series.hpp"

namespace noteffect {

struct RawObservation {
  std::string post_id;
  MetricKind metric = MetricKind::views;
  Millis observed_at = 0;
  double value = 0.0;
};

struct AlignResult {
  EngagementSeries series;
  std::vector<std::string> warnings;
};

// Linearly interpolates time-sorted observations onto the creation-anchored
// 15-minute grid. Grid points outside [first, last] observation are not
// produced. Throws DataError("no data") on an empty input, and when an
// observation precedes post creation.
AlignResult align_series(std::span<const RawObservation> observations,
                         Millis created_at, Millis grid_step = kGridStep);

}  // namespace noteffect
