#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "noteffect/core_model/post.hpp"

namespace noteffect {

// Sample standard deviations (n - 1) of treated pre-treatment grid values.
struct StandardizationScales {
  std::map<MetricKind, double> scale;
  // Filled only in per-age mode: scale per grid step, indexed by step.
  std::map<MetricKind, std::vector<double>> per_step;
  std::vector<std::string> warnings;

  bool has(MetricKind m) const { return scale.count(m) != 0; }
  double at(MetricKind m, int step) const;
};

struct ScaleOptions {
  bool per_age = false;
};

// Pools every treated post's values at steps before its treatment step. A
// metric with fewer than two values or zero variance is left out with a
// warning.
StandardizationScales compute_scales(std::span<const PostRecord> treated,
                                     std::span<const MetricKind> metrics,
                                     const ScaleOptions& options = {});

}  // namespace noteffect
