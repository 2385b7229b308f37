#include "noteffect/effects/report.hpp"

#include <charconv>
#include <cmath>

#include "noteffect/core_model/treatment.hpp"

namespace noteffect {

StratumSpec default_stratum_spec(const std::string& key) {
  StratumSpec spec;
  spec.key = key;
  if (key == strata_keys::kAttachmentSpeed || key == strata_keys::kPreTreatmentReposts) {
    spec.rule = StratumRule::quartiles;
  } else if (key == label_keys::kNoteGradeLevel) {
    spec.rule = StratumRule::bins;
    spec.upper_edges = {5.0, 10.0};
    spec.bin_names = {"<=5", "6-10", ">10"};
  } else if (key == label_keys::kNoteSentenceCount) {
    spec.rule = StratumRule::bins;
    spec.upper_edges = {1.0, 3.0};
    spec.bin_names = {"1", "2-3", ">3"};
  } else {
    spec.rule = StratumRule::categorical;
  }
  return spec;
}

const MetricEffects* EffectReport::find(MetricKind m) const {
  for (const auto& e : metrics)
    if (e.metric == m) return &e;
  return nullptr;
}

namespace {

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::map<std::string, double> numeric_stratum_values(const Cohort& cohort,
                                                     std::span<const ITESeries> ites,
                                                     const std::string& key) {
  std::map<std::string, const PostRecord*> by_id;
  for (const auto& p : cohort.treated) by_id[p.post_id] = &p;
  std::map<std::string, double> out;
  for (const auto& s : ites) {
    auto it = by_id.find(s.treated_id);
    if (it == by_id.end()) continue;
    const PostRecord& post = *it->second;
    if (key == strata_keys::kAttachmentSpeed) {
      if (post.treatment_time)
        out[post.post_id] = static_cast<double>(*post.treatment_time - post.created_at) /
                            static_cast<double>(kHour);
    } else if (key == strata_keys::kPreTreatmentReposts) {
      const auto* r = post.find_series(MetricKind::reposts);
      if (r && r->contains(s.treatment_step)) out[post.post_id] = r->at(s.treatment_step);
    } else if (auto label = post.label(key); label && parse_number(*label)) {
      out[post.post_id] = *parse_number(*label);
    } else if (key == label_keys::kNoteGradeLevel || key == label_keys::kNoteSentenceCount) {
      const auto attrs = effective_note_attributes(post);
      if (auto a = attrs.find(key); a != attrs.end()) out[post.post_id] = a->second;
    }
  }
  return out;
}

EffectReport compute_effects(const Cohort& cohort, const FitSet& fits,
                             const EffectsConfig& config) {
  EffectReport report;
  const int h = config.horizon_steps;
  report.horizon_steps = h;
  report.fits_total = fits.fits.size();
  for (const auto& f : fits.fits) {
    if (f.status != FitStatus::ok) continue;
    ++report.fits_feasible;
    if (f.weights.low_quality) ++report.fits_low_quality;
    if (f.bias_disabled) ++report.bias_disabled;
  }
  const auto ites = fits.ites();
  if (ites.empty()) report.warnings.push_back("no feasible fits; effects are empty");

  std::vector<MetricKind> present;
  for (MetricKind m : kAllMetrics) {
    bool any = false;
    for (const auto& s : ites) any = any || s.find(m);
    if (any) present.push_back(m);
  }

  for (MetricKind m : present) {
    MetricEffects e;
    e.metric = m;
    e.att = att_series(ites, m, h, config.att);
    for (const auto& s : ites)
      if (const auto* mi = s.find(m); mi && mi->tau.size() > static_cast<std::size_t>(h))
        e.posts.push_back(s.treated_id);
    const std::string name(to_string(m));
    if (const auto* last = e.att.at(h)) {
      e.percent_change_total = percent_change_total(last->mean_y1, last->mean_y0hat);
      if (!e.percent_change_total)
        report.warnings.push_back(name + ": nonpositive counterfactual mean; percent change in total absent");
    }
    e.growth = percent_change_growth(ites, m, h);
    if (e.growth.n > 0 && !e.growth.percent)
      report.warnings.push_back(name + ": nonpositive counterfactual growth; percent change in growth absent");
    const auto tau = effects_at(ites, m, h);
    if (tau.size() >= 2)
      e.distribution = effect_distribution_summary(tau, config.ratio_percentiles, config.att.z);
    e.histogram = magnitude_histogram(tau);
    report.metrics.push_back(std::move(e));
  }

  std::map<std::string, std::vector<std::string>> label_map;
  for (const auto& key : config.strata) {
    const auto spec = default_stratum_spec(key);
    StratumAssignment assignment;
    if (spec.rule == StratumRule::categorical) {
      label_map.clear();
      for (const auto& p : cohort.treated)
        if (auto it = p.labels.find(key); it != p.labels.end()) label_map[p.post_id] = it->second;
      assignment = assign_label_strata(spec, label_map);
    } else {
      assignment = assign_numeric_strata(spec, numeric_stratum_values(cohort, ites, key));
    }
    if (assignment.members.empty()) continue;
    StratifiedEffects s;
    s.key = key;
    s.strata = assignment.strata;
    s.edges = assignment.edges;
    for (MetricKind m : present) {
      s.att[m] = stratified_att(ites, assignment, m, h, config.att);
      for (const auto& name : assignment.strata) {
        const auto members = stratum_members(ites, assignment, name);
        const auto tau = effects_at(members, m, h);
        std::size_t k = 0;
        for (double v : tau) k += v > 0.0;
        s.positive_share[m].push_back(positive_share_wald(k, tau.size(), config.att.z));
        s.coefficient_of_variation[m].push_back(coefficient_of_variation(tau));
      }
    }
    report.strata.push_back(std::move(s));
  }

  for (MetricKind m : kCascadeMetrics) {
    if (std::find(present.begin(), present.end(), m) == present.end()) continue;
    if (std::find(present.begin(), present.end(), MetricKind::reposts) == present.end()) continue;
    report.growth_matched.push_back({m, growth_matched_structural(ites, m, h, config.growth_bins)});
  }
  return report;
}

}  // namespace noteffect
