#include "noteffect/effects/growth_match.hpp"

#include <algorithm>
#include <cmath>

#include "noteffect/util/error.hpp"
#include "noteffect/util/stats.hpp"

namespace noteffect {

std::vector<double> log_bin_edges(double lo, double hi, std::size_t bin_count) {
  if (!(lo > 0.0) || !(hi > lo) || bin_count == 0)
    throw ConfigError("log bins need 0 < lo < hi and at least one bin");
  std::vector<double> edges(bin_count + 1);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(bin_count);
  for (std::size_t i = 0; i <= bin_count; ++i)
    edges[i] = std::exp(a + step * static_cast<double>(i));
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

std::size_t log_bin_index(std::span<const double> edges, double value) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - edges.begin() - 1, 0));
  return std::min(k, edges.size() - 2);
}

GrowthMatchBins bin_growth(std::span<const GrowthObservation> treated,
                           std::span<const GrowthObservation> control, std::size_t bin_count) {
  GrowthMatchBins out;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  auto scan = [&](std::span<const GrowthObservation> obs, std::size_t& excluded) {
    for (const auto& o : obs) {
      if (!(o.delta_size > 0.0)) {
        ++excluded;
        continue;
      }
      lo = any ? std::min(lo, o.delta_size) : o.delta_size;
      hi = any ? std::max(hi, o.delta_size) : o.delta_size;
      any = true;
    }
  };
  scan(treated, out.treated_excluded);
  scan(control, out.control_excluded);
  if (!any || bin_count == 0) return out;
  if (lo == hi) {
    lo /= 2.0;
    hi *= 2.0;
  }
  out.edges = log_bin_edges(lo, hi, bin_count);
  std::vector<std::vector<double>> t_vals(bin_count), c_vals(bin_count);
  for (const auto& o : treated)
    if (o.delta_size > 0.0) t_vals[log_bin_index(out.edges, o.delta_size)].push_back(o.delta_metric);
  for (const auto& o : control)
    if (o.delta_size > 0.0) c_vals[log_bin_index(out.edges, o.delta_size)].push_back(o.delta_metric);
  for (std::size_t k = 0; k < bin_count; ++k) {
    GrowthBin b;
    b.low = out.edges[k];
    b.high = out.edges[k + 1];
    b.treated_n = t_vals[k].size();
    b.control_n = c_vals[k].size();
    if (!t_vals[k].empty()) b.treated_mean = stats::mean(t_vals[k]);
    if (!c_vals[k].empty()) b.control_mean = stats::mean(c_vals[k]);
    out.bins.push_back(b);
  }
  return out;
}

GrowthMatchBins growth_matched_structural(std::span<const ITESeries> ites,
                                          MetricKind structural_metric, int t,
                                          std::size_t bin_count) {
  std::vector<GrowthObservation> treated, control;
  const auto k = static_cast<std::size_t>(std::max(t, 0));
  for (const auto& s : ites) {
    const auto* size = s.find(MetricKind::reposts);
    const auto* m = s.find(structural_metric);
    if (!size || !m || k >= size->y1.size() || k >= m->y1.size()) continue;
    treated.push_back({size->y1[k] - size->y1[0], m->y1[k] - m->y1[0]});
    control.push_back({size->y0hat[k] - size->y0hat[0], m->y0hat[k] - m->y0hat[0]});
  }
  return bin_growth(treated, control, bin_count);
}

}  // namespace noteffect
