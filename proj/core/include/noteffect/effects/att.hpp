#pragma once

#include <optional>
#include <span>
#include <vector>

#include "noteffect/scm/fit.hpp"

namespace noteffect {

enum class CiVariant {
  sqrt_n,     // sigma / sqrt(n)
  literal_n,  // sigma / n, sensitivity variant
};

struct AttOptions {
  double z = 1.96;
  CiVariant ci = CiVariant::sqrt_n;
};

struct ATTEntry {
  int t = 0;  // grid steps after treatment
  std::size_t n = 0;
  double att = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_y1 = 0.0;
  double mean_y0hat = 0.0;  // mean counterfactual, so att = mean_y1 - mean_y0hat

  bool ci_covers(double value) const { return ci_low <= value && value <= ci_high; }
};

struct ATTSeries {
  MetricKind metric = MetricKind::views;
  std::vector<ATTEntry> entries;  // only time points with n >= 2

  const ATTEntry* at(int t) const;
};

// Mean effect with a Gaussian interval. Absent when fewer than two values.
std::optional<ATTEntry> att_from_values(std::span<const double> tau,
                                        std::span<const double> y1,
                                        const AttOptions& options = {});

std::optional<ATTEntry> att(std::span<const ITESeries> ites, MetricKind metric, int t,
                            const AttOptions& options = {});

ATTSeries att_series(std::span<const ITESeries> ites, MetricKind metric, int horizon_steps,
                     const AttOptions& options = {});

// Percent (not fraction) changes. Absent for a nonpositive denominator.
std::optional<double> percent_change_total(double mean_y1, double mean_y0hat);
std::optional<double> percent_change_growth(double y1_at_0, double y1_at_t,
                                            double y0hat_at_0, double y0hat_at_t);

struct GrowthChange {
  std::optional<double> percent;
  std::size_t n = 0;
  std::size_t excluded = 0;  // posts lacking the metric at 0 or t
};

// Percentage change in growth between t = 0 and t over the posts that have
// the metric at both points, using the bias-corrected counterfactual.
GrowthChange percent_change_growth(std::span<const ITESeries> ites, MetricKind metric, int t);

struct ProportionInterval {
  std::size_t k = 0;
  std::size_t n = 0;
  double share = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Wald interval p +- z sqrt(p(1-p)/n), clamped to [0, 1]. Requires n >= 1.
ProportionInterval positive_share_wald(std::size_t k, std::size_t n, double z = 1.96);

}  // namespace noteffect
