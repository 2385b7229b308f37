#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace noteffect {

enum class MetricKind {
  views,
  replies,
  likes,
  reposts,
  follower_count,
  cascade_max_depth,
  cascade_max_breadth,
  structural_virality,
};

inline constexpr std::array<MetricKind, 8> kAllMetrics = {
    MetricKind::views,          MetricKind::replies,
    MetricKind::likes,          MetricKind::reposts,
    MetricKind::follower_count, MetricKind::cascade_max_depth,
    MetricKind::cascade_max_breadth, MetricKind::structural_virality,
};

inline constexpr std::array<MetricKind, 4> kEngagementMetrics = {
    MetricKind::views, MetricKind::replies, MetricKind::likes,
    MetricKind::reposts};

inline constexpr std::array<MetricKind, 3> kCascadeMetrics = {
    MetricKind::cascade_max_depth, MetricKind::cascade_max_breadth,
    MetricKind::structural_virality};

std::string_view to_string(MetricKind m);

// "impressions" is accepted as an alias of views.
std::optional<MetricKind> parse_metric(std::string_view name);

// Cumulative counters that should never decrease on clean data.
constexpr bool is_cumulative_count(MetricKind m) {
  return m == MetricKind::views || m == MetricKind::replies ||
         m == MetricKind::likes || m == MetricKind::reposts;
}

// Author follower count is matched on but never reported as an outcome.
constexpr bool is_outcome_metric(MetricKind m) { return m != MetricKind::follower_count; }

}  // namespace noteffect
