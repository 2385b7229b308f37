#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noteffect/effects/att.hpp"

namespace noteffect {

inline const std::vector<double> kDefaultRatioPercentiles = {50, 75, 90, 95, 99};

struct PercentileRatio {
  double percentile = 0.0;
  std::optional<double> negative_magnitude;
  std::optional<double> positive_magnitude;
  std::optional<double> ratio;  // negative magnitude / positive magnitude
};

struct DistributionSummary {
  std::size_t n = 0;
  ProportionInterval positive_share;
  std::optional<double> positive_mean;
  std::optional<double> positive_median;
  std::optional<double> negative_mean;
  std::optional<double> negative_median;
  std::vector<PercentileRatio> ratios;
  std::optional<double> coefficient_of_variation;  // SD / mean
};

DistributionSummary effect_distribution_summary(
    std::span<const double> tau,
    std::span<const double> percentiles = kDefaultRatioPercentiles, double z = 1.96);

// Effects of every ITE carrying the metric at t, in input order.
std::vector<double> effects_at(std::span<const ITESeries> ites, MetricKind metric, int t);

std::optional<double> coefficient_of_variation(std::span<const double> values);

// Histogram of effect magnitudes on log10-spaced bins, split by sign.
struct MagnitudeHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
  std::size_t zeros = 0;
};

MagnitudeHistogram magnitude_histogram(std::span<const double> tau, std::size_t bins = 30);

}  // namespace noteffect
