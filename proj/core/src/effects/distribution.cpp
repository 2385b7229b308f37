#include "noteffect/effects/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "noteffect/effects/growth_match.hpp"
#include "noteffect/util/stats.hpp"

namespace noteffect {

std::vector<double> effects_at(std::span<const ITESeries> ites, MetricKind metric, int t) {
  std::vector<double> out;
  for (const auto& s : ites) {
    const auto* m = s.find(metric);
    if (m && t >= 0 && static_cast<std::size_t>(t) < m->tau.size())
      out.push_back(m->tau[static_cast<std::size_t>(t)]);
  }
  return out;
}

std::optional<double> coefficient_of_variation(std::span<const double> values) {
  if (values.size() < 2) return std::nullopt;
  const double m = stats::mean(values);
  if (m == 0.0) return std::nullopt;
  return stats::sample_sd(values) / m;
}

DistributionSummary effect_distribution_summary(std::span<const double> tau,
                                                std::span<const double> percentiles, double z) {
  DistributionSummary out;
  out.n = tau.size();
  std::vector<double> pos, neg_mag;
  std::vector<double> neg;
  for (double v : tau) {
    if (v > 0.0) pos.push_back(v);
    if (v < 0.0) {
      neg.push_back(v);
      neg_mag.push_back(-v);
    }
  }
  if (out.n > 0) out.positive_share = positive_share_wald(pos.size(), out.n, z);
  if (!pos.empty()) {
    out.positive_mean = stats::mean(pos);
    out.positive_median = stats::median(pos);
  }
  if (!neg.empty()) {
    out.negative_mean = stats::mean(neg);
    out.negative_median = stats::median(neg);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg_mag.begin(), neg_mag.end());
  for (double p : percentiles) {
    PercentileRatio r;
    r.percentile = p;
    if (!neg_mag.empty()) r.negative_magnitude = stats::quantile_sorted(neg_mag, p / 100.0);
    if (!pos.empty()) r.positive_magnitude = stats::quantile_sorted(pos, p / 100.0);
    if (r.negative_magnitude && r.positive_magnitude && *r.positive_magnitude > 0.0)
      r.ratio = *r.negative_magnitude / *r.positive_magnitude;
    out.ratios.push_back(r);
  }
  out.coefficient_of_variation = coefficient_of_variation(tau);
  return out;
}

MagnitudeHistogram magnitude_histogram(std::span<const double> tau, std::size_t bins) {
  MagnitudeHistogram out;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double v : tau) {
    const double a = std::abs(v);
    if (a == 0.0) {
      ++out.zeros;
      continue;
    }
    lo = any ? std::min(lo, a) : a;
    hi = any ? std::max(hi, a) : a;
    any = true;
  }
  if (!any || bins == 0) return out;
  if (lo == hi) {
    lo /= 2.0;
    hi *= 2.0;
  }
  out.edges = log_bin_edges(lo, hi, bins);
  out.positive.assign(bins, 0);
  out.negative.assign(bins, 0);
  for (double v : tau) {
    if (v == 0.0) continue;
    const auto k = log_bin_index(out.edges, std::abs(v));
    (v > 0.0 ? out.positive : out.negative)[k]++;
  }
  return out;
}

}  // namespace noteffect
