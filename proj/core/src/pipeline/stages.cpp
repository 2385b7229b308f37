#include "noteffect/pipeline/stages.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "noteffect/util/parallel.hpp"

namespace noteffect::pipeline {

namespace {

std::string anomaly_reason(const std::vector<std::pair<MetricKind, AnomalyReport>>& flagged) {
  std::string reason = "anomaly:";
  for (const auto& [m, r] : flagged) reason += " " + std::string(to_string(m));
  return reason;
}

}  // namespace

FilterReport filter_stage(io::Archive& archive, const PipelineConfig& config) {
  FilterReport report;
  auto& cohort = archive.cohort;
  report.treated_before = cohort.treated.size();
  report.donors_before = cohort.donors.size();

  auto screen = [&](std::vector<PostRecord>& posts) {
    std::vector<PostRecord> kept;
    kept.reserve(posts.size());
    for (auto& p : posts) {
      std::vector<std::pair<MetricKind, AnomalyReport>> flagged;
      for (MetricKind m : kEngagementMetrics) {
        const auto* s = p.find_series(m);
        if (!s) continue;
        auto r = detect_anomalies(*s, config.anomaly);
        if (r.flagged) flagged.emplace_back(m, std::move(r));
      }
      if (flagged.empty()) {
        kept.push_back(std::move(p));
        continue;
      }
      report.exclusions.push_back({p.post_id, "filter", anomaly_reason(flagged)});
      report.anomalies.emplace_back(p.post_id, std::move(flagged));
    }
    posts = std::move(kept);
  };
  screen(cohort.treated);
  screen(cohort.donors);

  auto eligible = eligibility_filter(cohort, config.eligibility_config());
  for (auto& e : eligible.exclusions) report.exclusions.push_back(std::move(e));
  cohort = std::move(eligible.cohort);

  report.treated_after = cohort.treated.size();
  report.donors_after = cohort.donors.size();
  if (cohort.treated.empty()) report.warnings.push_back("no treated posts left after filtering");
  if (cohort.donors.size() < 2) report.warnings.push_back("fewer than two donors left after filtering");
  archive.exclusions.insert(archive.exclusions.end(), report.exclusions.begin(), report.exclusions.end());
  return report;
}

CascadeReport cascade_stage(io::Archive& archive, unsigned workers) {
  CascadeReport report;
  std::vector<PostRecord*> posts;
  for (auto& p : archive.cohort.treated) posts.push_back(&p);
  for (auto& p : archive.cohort.donors) posts.push_back(&p);
  std::vector<char> replaced(posts.size(), 0);
  std::vector<char> handled(posts.size(), 0);
  parallel_for(posts.size(), workers, [&](std::size_t i) {
    PostRecord& p = *posts[i];
    auto it = archive.reposts.find(p.post_id);
    if (it == archive.reposts.end()) return;
    const auto events = normalize_reposts(it->second);
    int last = -1;
    for (const auto& [m, s] : p.series)
      if (is_cumulative_count(m) && !s.empty()) last = std::max(last, s.last_step());
    if (last < 0) {
      for (const auto& e : events)
        last = std::max(last, static_cast<int>(ceil_div(e.at - p.created_at, kGridStep)));
    }
    if (last < 0) return;
    auto series = cascade_metrics_series(p.created_at, events, archive.follows, last);
    for (MetricKind m : kCascadeMetrics) {
      auto s = series.find(m);
      if (s != series.end() && !s->second.empty())
        p.series[m] = std::move(s->second);
      else
        p.series.erase(m);
    }
    p.series[MetricKind::reposts] = repost_count_series(p.created_at, events, last);
    replaced[i] = 1;
    handled[i] = 1;
  });
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (!handled[i]) continue;
    ++report.posts;
    report.events += archive.reposts.at(posts[i]->post_id).size();
    report.repost_series_replaced += replaced[i] ? 1 : 0;
  }
  archive.cascades_built = true;
  return report;
}

FitSet fit_stage(const io::Archive& archive, const PipelineConfig& config) {
  return fit_cohort(archive.cohort, config.fit_config(), config.workers);
}

EffectReport effects_stage(const io::Archive& archive, const FitSet& fits, const PipelineConfig& config) {
  return compute_effects(archive.cohort, fits, config.effects_config());
}

PlaceboReport placebo_stage(const io::Archive& archive, const PipelineConfig& config) {
  AttOptions att;
  att.ci = config.ci;
  return run_placebo(archive.cohort, config.placebo_config(), config.fit_config(), att, config.workers);
}

io::Archive archive_from_sim(const sim::SimCohort& sc) {
  io::Archive a;
  a.cohort = sc.cohort;
  a.reposts = sc.reposts;
  a.follows = sc.follows;
  return a;
}

PipelineResult run_pipeline(io::Archive archive, const PipelineConfig& config) {
  PipelineResult r;
  r.filter = filter_stage(archive, config);
  r.cascades = cascade_stage(archive, config.workers);
  r.fits = fit_stage(archive, config);
  r.effects = effects_stage(archive, r.fits, config);
  return r;
}

std::string filter_report_to_json(const FilterReport& r) {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["schema"] = "noteffect.filter/1";
  doc["treated"] = {{"before", r.treated_before}, {"after", r.treated_after}};
  doc["donors"] = {{"before", r.donors_before}, {"after", r.donors_after}};
  Json anomalies = Json::array();
  for (const auto& [id, flagged] : r.anomalies) {
    Json metrics = Json::array();
    for (const auto& [m, rep] : flagged) {
      Json ev = Json::array();
      for (const auto& e : rep.evidence)
        ev.push_back({{"age_ms", e.age}, {"delta", e.delta}, {"percent", e.percent}});
      metrics.push_back({{"metric", to_string(m)}, {"evidence", ev}});
    }
    anomalies.push_back({{"post_id", id}, {"metrics", metrics}});
  }
  doc["anomalies"] = anomalies;
  Json ex = Json::array();
  for (const auto& e : r.exclusions) ex.push_back({{"post_id", e.post_id}, {"stage", e.stage}, {"reason", e.reason}});
  doc["exclusions"] = ex;
  doc["warnings"] = r.warnings;
  return doc.dump(1) + "\n";
}

}  // namespace noteffect::pipeline
