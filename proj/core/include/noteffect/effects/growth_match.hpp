#pragma once

#include <optional>
#include <span>
#include <vector>

#include "noteffect/scm/fit.hpp"

namespace noteffect {

struct GrowthObservation {
  double delta_size = 0.0;
  double delta_metric = 0.0;
};

struct GrowthBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t treated_n = 0;
  std::size_t control_n = 0;
  std::optional<double> treated_mean;
  std::optional<double> control_mean;
};

struct GrowthMatchBins {
  std::vector<double> edges;
  std::vector<GrowthBin> bins;
  std::size_t treated_excluded = 0;  // nonpositive size growth
  std::size_t control_excluded = 0;
};

// bin_count + 1 edges evenly spaced in log scale from lo to hi.
std::vector<double> log_bin_edges(double lo, double hi, std::size_t bin_count);

// Bin of a positive value; the top edge belongs to the last bin.
std::size_t log_bin_index(std::span<const double> edges, double value);

GrowthMatchBins bin_growth(std::span<const GrowthObservation> treated,
                           std::span<const GrowthObservation> control,
                           std::size_t bin_count = 8);

// Growth over [0, t] of cascade size (reposts) and a structural metric: the
// observed series for the treated arm and the synthetic control for the
// control arm.
GrowthMatchBins growth_matched_structural(std::span<const ITESeries> ites,
                                          MetricKind structural_metric, int t,
                                          std::size_t bin_count = 8);

}  // namespace noteffect
