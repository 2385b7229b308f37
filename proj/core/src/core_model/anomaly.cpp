#include "noteffect/core_model/anomaly.hpp"

#include <cmath>
#include <vector>

namespace noteffect {

AnomalyReport detect_anomalies(std::span<const double> values, std::span<const Millis> ages,
                               const AnomalyThresholds& thresholds) {
  AnomalyReport report;
  if (values.size() < 2) return report;
  bool rise = false, drop = false;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double prev = values[k - 1];
    const double delta = values[k] - prev;
    if (std::abs(delta) < thresholds.min_abs_change) continue;
    const double percent = prev != 0.0 ? 100.0 * delta / std::abs(prev) : (delta > 0 ? 100.0 : -100.0);
    const bool rel_ok = prev == 0.0 || std::abs(delta) >= thresholds.min_rel_change * std::abs(prev);
    if (!rel_ok) continue;
    report.evidence.push_back({ages[k], delta, percent});
    if (delta > 0) rise = true;
    else drop = true;
  }
  report.flagged = rise && drop;
  return report;
}

AnomalyReport detect_anomalies(const EngagementSeries& series,
                               const AnomalyThresholds& thresholds) {
  std::vector<Millis> ages(series.values.size());
  for (std::size_t k = 0; k < ages.size(); ++k) ages[k] = series.age_of(k);
  return detect_anomalies(series.values, ages, thresholds);
}

}  // namespace noteffect
