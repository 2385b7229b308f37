#pragma once

#include <vector>

#include "noteffect/effects/att.hpp"

namespace noteffect {

struct PlaceboConfig {
  Millis backdate_offset = 1 * kHour;
  Millis min_pre = 1 * kHour;
  std::vector<MetricKind> metrics{kEngagementMetrics.begin(), kEngagementMetrics.end()};

  // Throws ConfigError unless the offset is a positive multiple of the grid step.
  void validate() const;
  int offset_steps() const { return static_cast<int>(backdate_offset / kGridStep); }
};

struct BackdateResult {
  Cohort cohort;
  std::vector<Exclusion> exclusions;
};

// Moves each treatment time earlier by the offset; posts left with less than
// min_pre of pre-window are dropped.
BackdateResult backdate_cohort(const Cohort& cohort, const PlaceboConfig& config);

struct PlaceboMetricResult {
  MetricKind metric = MetricKind::views;
  std::optional<ATTEntry> at_true_treatment;
  bool pass = false;  // interval at the true treatment time covers 0
  ATTSeries series;
};

struct PlaceboReport {
  PlaceboConfig config;
  std::size_t treated_input = 0;
  std::size_t fits_feasible = 0;
  std::vector<Exclusion> exclusions;
  std::vector<PlaceboMetricResult> metrics;

  bool all_pass() const;
};

PlaceboReport run_placebo(const Cohort& cohort, const PlaceboConfig& config,
                          const FitConfig& fit_config, const AttOptions& att_options = {},
                          unsigned workers = 1);

}  // namespace noteffect
