#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noteffect/effects/distribution.hpp"
#include "noteffect/effects/growth_match.hpp"
#include "noteffect/effects/strata.hpp"

namespace noteffect {

// Built-in stratification keys besides the label keys.
namespace strata_keys {
inline constexpr const char* kAttachmentSpeed = "attachment_speed";
inline constexpr const char* kPreTreatmentReposts = "pre_treatment_reposts";
}  // namespace strata_keys

struct EffectsConfig {
  int horizon_steps = 192;
  AttOptions att;
  std::vector<std::string> strata = {
      strata_keys::kAttachmentSpeed,  strata_keys::kPreTreatmentReposts,
      label_keys::kPartisanship,      label_keys::kMediaType,
      label_keys::kAccuracyConcerns,  label_keys::kNoteGradeLevel,
      label_keys::kNoteSentenceCount,
  };
  std::size_t growth_bins = 8;
  std::vector<double> ratio_percentiles = kDefaultRatioPercentiles;
};

// Default spec for a stratification key (grade-level and sentence-count bins,
// quartiles for numeric keys, categorical otherwise).
StratumSpec default_stratum_spec(const std::string& key);

struct StratifiedEffects {
  std::string key;
  std::vector<std::string> strata;
  std::vector<double> edges;
  std::map<MetricKind, std::vector<StratumATT>> att;
  std::map<MetricKind, std::vector<ProportionInterval>> positive_share;  // strata order
  std::map<MetricKind, std::vector<std::optional<double>>> coefficient_of_variation;
};

struct MetricEffects {
  MetricKind metric = MetricKind::views;
  std::vector<std::string> posts;  // posts contributing at the horizon
  ATTSeries att;
  std::optional<double> percent_change_total;
  GrowthChange growth;
  std::optional<DistributionSummary> distribution;
  MagnitudeHistogram histogram;
};

struct GrowthMatchResult {
  MetricKind metric = MetricKind::views;
  GrowthMatchBins bins;
};

struct EffectReport {
  int horizon_steps = 192;
  std::size_t fits_total = 0;
  std::size_t fits_feasible = 0;
  std::size_t fits_low_quality = 0;
  std::size_t bias_disabled = 0;
  std::vector<MetricEffects> metrics;
  std::vector<StratifiedEffects> strata;
  std::vector<GrowthMatchResult> growth_matched;
  std::vector<std::string> warnings;

  const MetricEffects* find(MetricKind m) const;
};

// Numeric stratification values per treated post for a built-in or label key.
std::map<std::string, double> numeric_stratum_values(const Cohort& cohort,
                                                     std::span<const ITESeries> ites,
                                                     const std::string& key);

EffectReport compute_effects(const Cohort& cohort, const FitSet& fits,
                             const EffectsConfig& config = {});

}  // namespace noteffect
