#include "noteffect/effects/att.hpp"

#include <algorithm>
#include <cmath>

#include "noteffect/util/stats.hpp"

namespace noteffect {

const ATTEntry* ATTSeries::at(int t) const {
  for (const auto& e : entries)
    if (e.t == t) return &e;
  return nullptr;
}

std::optional<ATTEntry> att_from_values(std::span<const double> tau, std::span<const double> y1,
                                        const AttOptions& options) {
  if (tau.size() < 2) return std::nullopt;
  ATTEntry e;
  e.n = tau.size();
  e.att = stats::mean(tau);
  e.mean_y1 = y1.empty() ? 0.0 : stats::mean(y1);
  e.mean_y0hat = e.mean_y1 - e.att;
  const double sd = stats::sample_sd(tau);
  const double n = static_cast<double>(e.n);
  e.se = options.ci == CiVariant::sqrt_n ? sd / std::sqrt(n) : sd / n;
  e.ci_low = e.att - options.z * e.se;
  e.ci_high = e.att + options.z * e.se;
  return e;
}

namespace {

void gather(std::span<const ITESeries> ites, MetricKind metric, int t, std::vector<double>& tau,
            std::vector<double>& y1) {
  for (const auto& s : ites) {
    const auto* m = s.find(metric);
    if (!m || t < 0 || static_cast<std::size_t>(t) >= m->tau.size()) continue;
    tau.push_back(m->tau[static_cast<std::size_t>(t)]);
    y1.push_back(m->y1[static_cast<std::size_t>(t)]);
  }
}

}  // namespace

std::optional<ATTEntry> att(std::span<const ITESeries> ites, MetricKind metric, int t,
                            const AttOptions& options) {
  std::vector<double> tau, y1;
  gather(ites, metric, t, tau, y1);
  auto e = att_from_values(tau, y1, options);
  if (e) e->t = t;
  return e;
}

ATTSeries att_series(std::span<const ITESeries> ites, MetricKind metric, int horizon_steps,
                     const AttOptions& options) {
  ATTSeries out;
  out.metric = metric;
  for (int t = 0; t <= horizon_steps; ++t)
    if (auto e = att(ites, metric, t, options)) out.entries.push_back(*e);
  return out;
}

std::optional<double> percent_change_total(double mean_y1, double mean_y0hat) {
  if (!(mean_y0hat > 0.0)) return std::nullopt;
  return 100.0 * (mean_y1 - mean_y0hat) / mean_y0hat;
}

std::optional<double> percent_change_growth(double y1_at_0, double y1_at_t, double y0hat_at_0,
                                            double y0hat_at_t) {
  const double control = y0hat_at_t - y0hat_at_0;
  if (!(control > 0.0)) return std::nullopt;
  return 100.0 * ((y1_at_t - y1_at_0) - control) / control;
}

GrowthChange percent_change_growth(std::span<const ITESeries> ites, MetricKind metric, int t) {
  GrowthChange out;
  std::vector<double> y1_0, y1_t, cf_0, cf_t;
  for (const auto& s : ites) {
    const auto* m = s.find(metric);
    if (!m || t < 0 || static_cast<std::size_t>(t) >= m->tau.size()) {
      ++out.excluded;
      continue;
    }
    const auto k = static_cast<std::size_t>(t);
    y1_0.push_back(m->y1[0]);
    y1_t.push_back(m->y1[k]);
    cf_0.push_back(m->counterfactual(0));
    cf_t.push_back(m->counterfactual(k));
  }
  out.n = y1_0.size();
  if (out.n == 0) return out;
  out.percent = percent_change_growth(stats::mean(y1_0), stats::mean(y1_t), stats::mean(cf_0),
                                      stats::mean(cf_t));
  return out;
}

ProportionInterval positive_share_wald(std::size_t k, std::size_t n, double z) {
  ProportionInterval out;
  out.k = k;
  out.n = n;
  if (n == 0) return out;
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  out.share = p;
  out.ci_low = std::clamp(p - half, 0.0, 1.0);
  out.ci_high = std::clamp(p + half, 0.0, 1.0);
  return out;
}

}  // namespace noteffect
