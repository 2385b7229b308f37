#include "noteffect/placebo/placebo.hpp"

#include <algorithm>

#include "noteffect/util/error.hpp"

namespace noteffect {

void PlaceboConfig::validate() const {
  if (backdate_offset <= 0 || backdate_offset % kGridStep != 0)
    throw ConfigError("placebo backdate offset must be a positive multiple of the grid step");
  if (min_pre < 0) throw ConfigError("placebo minimum pre-window must be nonnegative");
  if (metrics.empty()) throw ConfigError("placebo needs at least one metric");
}

bool PlaceboReport::all_pass() const {
  return !metrics.empty() &&
         std::all_of(metrics.begin(), metrics.end(), [](const auto& m) { return m.pass; });
}

BackdateResult backdate_cohort(const Cohort& cohort, const PlaceboConfig& config) {
  config.validate();
  BackdateResult out;
  out.cohort.donors = cohort.donors;
  for (const auto& post : cohort.treated) {
    if (!post.treatment_time) continue;
    const Millis shifted = *post.treatment_time - config.backdate_offset;
    if (shifted - post.created_at < config.min_pre) {
      out.exclusions.push_back({post.post_id, "placebo", "less than the minimum pre-window after backdating"});
      continue;
    }
    PostRecord p = post;
    p.treatment_time = shifted;
    out.cohort.treated.push_back(std::move(p));
  }
  return out;
}

PlaceboReport run_placebo(const Cohort& cohort, const PlaceboConfig& config,
                          const FitConfig& fit_config, const AttOptions& att_options,
                          unsigned workers) {
  PlaceboReport report;
  report.config = config;
  report.treated_input = cohort.treated.size();
  auto backdated = backdate_cohort(cohort, config);
  report.exclusions = backdated.exclusions;

  FitConfig fc = fit_config;
  // Only the backdate window is read; effects at the true treatment time sit
  // offset_steps after the placebo treatment.
  fc.horizon_steps = config.offset_steps();
  const auto fits = fit_cohort(backdated.cohort, fc, workers);
  report.fits_feasible = fits.feasible_count();
  for (const auto& f : fits.fits)
    if (f.status != FitStatus::ok) report.exclusions.push_back({f.treated_id, "placebo fit", f.reason});
  const auto ites = fits.ites();
  for (MetricKind m : config.metrics) {
    PlaceboMetricResult r;
    r.metric = m;
    r.series = att_series(ites, m, config.offset_steps(), att_options);
    if (const auto* e = r.series.at(config.offset_steps())) {
      r.at_true_treatment = *e;
      r.pass = e->ci_covers(0.0);
    }
    report.metrics.push_back(std::move(r));
  }
  return report;
}

}  // namespace noteffect
