#include "noteffect/core_model/metric.hpp"
#include "noteffect/core_model/series.hpp"

namespace noteffect {

std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::views: return "views";
    case MetricKind::replies: return "replies";
    case MetricKind::likes: return "likes";
    case MetricKind::reposts: return "reposts";
    case MetricKind::follower_count: return "follower_count";
    case MetricKind::cascade_max_depth: return "cascade_max_depth";
    case MetricKind::cascade_max_breadth: return "cascade_max_breadth";
    case MetricKind::structural_virality: return "structural_virality";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  if (name == "impressions") return MetricKind::views;
  for (MetricKind m : kAllMetrics)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::string_view to_string(AvailabilityClass a) {
  switch (a) {
    case AvailabilityClass::fully_available: return "fully_available";
    case AvailabilityClass::dropped_pre_treatment: return "dropped_pre_treatment";
    case AvailabilityClass::dropped_post_treatment: return "dropped_post_treatment";
    case AvailabilityClass::only_post_treatment: return "only_post_treatment";
    case AvailabilityClass::unavailable: return "unavailable";
  }
  return "unknown";
}

}  // namespace noteffect
