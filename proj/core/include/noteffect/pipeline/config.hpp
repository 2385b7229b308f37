#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "noteffect/core_model/anomaly.hpp"
#include "noteffect/core_model/eligibility.hpp"
#include "noteffect/effects/report.hpp"
#include "noteffect/placebo/placebo.hpp"

namespace noteffect::pipeline {

struct PipelineConfig {
  std::vector<MetricKind> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  std::size_t donor_pool_size = 1000;
  double solver_tolerance = 1e-6;
  int max_iterations = 10000;
  WeightConstraint weight_constraint = WeightConstraint::simplex;
  bool per_age_scales = false;
  Millis horizon = 48 * kHour;
  Millis grid_step = kGridStep;
  AnomalyThresholds anomaly;
  Millis min_pre = 1 * kHour;
  Millis placebo_offset = 1 * kHour;
  std::vector<MetricKind> placebo_metrics{kEngagementMetrics.begin(), kEngagementMetrics.end()};
  bool bias_correction = true;
  CiVariant ci = CiVariant::sqrt_n;
  std::vector<std::string> strata = EffectsConfig{}.strata;
  std::size_t growth_bins = 8;
  std::string output_dir = "out";
  unsigned workers = 1;

  // Throws ConfigError on out-of-range values. Only the 15-minute grid is
  // supported.
  void validate() const;
  int horizon_steps() const { return static_cast<int>(horizon / grid_step); }

  FitConfig fit_config() const;
  EffectsConfig effects_config() const;
  PlaceboConfig placebo_config() const;
  EligibilityConfig eligibility_config() const;
};

// Defaults with NOTEFFECT_WORKERS (or the hardware) deciding the worker count.
PipelineConfig default_config();

// Overrides fields of `base` from a JSON object. Unknown keys are errors.
PipelineConfig config_from_json(std::string_view text, PipelineConfig base = default_config());
std::string config_to_json(const PipelineConfig& config);

}  // namespace noteffect::pipeline
