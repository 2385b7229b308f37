#pragma once

#include <span>
#include <vector>

#include "noteffect/core_model/series.hpp"

namespace noteffect {

struct AnomalyThresholds {
  double min_abs_change = 25.0;
  double min_rel_change = 0.03;
};

struct AnomalyEvidence {
  Millis age = 0;
  double delta = 0.0;
  double percent = 0.0;  // relative to the value before the step, in percent
  friend bool operator==(const AnomalyEvidence&, const AnomalyEvidence&) = default;
};

struct AnomalyReport {
  bool flagged = false;
  std::vector<AnomalyEvidence> evidence;
};

// Flags a series that rises by both thresholds at one step and drops by both
// thresholds at another step. A step from 0 passes the relative test whenever
// it passes the absolute one.
AnomalyReport detect_anomalies(const EngagementSeries& series,
                               const AnomalyThresholds& thresholds = {});

// Same test on plain successive values; ages[k] labels values[k].
AnomalyReport detect_anomalies(std::span<const double> values,
                               std::span<const Millis> ages,
                               const AnomalyThresholds& thresholds = {});

}  // namespace noteffect
