#include "noteffect/pipeline/validate.hpp"

#include <cmath>

#include <json.hpp>

namespace noteffect::pipeline {

const MetricRecovery* RecoveryReport::find(MetricKind m) const {
  for (const auto& r : metrics)
    if (r.metric == m) return &r;
  return nullptr;
}

RecoveryReport validate_recovery(const EffectReport& report, const sim::GroundTruth& truth) {
  RecoveryReport out;
  out.horizon_steps = report.horizon_steps;
  const auto h = static_cast<std::size_t>(report.horizon_steps);
  for (const auto& e : report.metrics) {
    MetricRecovery r;
    r.metric = e.metric;
    if (const auto* a = e.att.at(report.horizon_steps)) r.estimate = *a;
    r.n_estimate = r.estimate ? r.estimate->n : 0;
    r.est_growth = e.growth.percent;
    r.est_total = e.percent_change_total;
    if (!e.posts.empty()) {
      const auto summaries = sim::summarize_truth(truth.posts, report.horizon_steps, e.posts);
      for (const auto& s : summaries) {
        if (s.metric != e.metric || s.att.size() <= h) continue;
        r.n_truth = s.n;
        r.true_att = s.att[h];
        r.true_se = s.att_se_at_horizon;
        r.true_growth = s.percent_change_growth;
        r.true_total = s.percent_change_total;
      }
    }
    if (r.estimate && r.true_att) {
      r.abs_error = std::abs(r.estimate->att - *r.true_att);
      if (*r.true_att != 0.0) r.rel_error = *r.abs_error / std::abs(*r.true_att);
      r.ci_covers_truth = r.estimate->ci_covers(*r.true_att);
      r.true_effect_nonzero = *r.true_att != 0.0;
      if (r.true_effect_nonzero) r.sign_correct = (r.estimate->att > 0.0) == (*r.true_att > 0.0);
    }
    if (r.est_growth && r.true_growth) r.growth_error_pp = std::abs(*r.est_growth - *r.true_growth);
    if (r.est_total && r.true_total) r.total_error_pp = std::abs(*r.est_total - *r.true_total);
    out.metrics.push_back(std::move(r));
  }
  return out;
}

std::string recovery_to_json(const RecoveryReport& report) {
  using Json = nlohmann::ordered_json;
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  Json doc;
  doc["schema"] = "noteffect.recovery/1";
  doc["horizon_steps"] = report.horizon_steps;
  Json metrics = Json::array();
  for (const auto& r : report.metrics) {
    Json j;
    j["metric"] = to_string(r.metric);
    j["n_estimate"] = r.n_estimate;
    j["n_truth"] = r.n_truth;
    j["est_att"] = r.estimate ? Json(r.estimate->att) : Json(nullptr);
    j["est_ci"] = r.estimate ? Json::array({r.estimate->ci_low, r.estimate->ci_high}) : Json(nullptr);
    j["true_att"] = opt(r.true_att);
    j["true_se"] = opt(r.true_se);
    j["abs_error"] = opt(r.abs_error);
    j["rel_error"] = opt(r.rel_error);
    j["ci_covers_truth"] = opt(r.ci_covers_truth);
    j["true_effect_nonzero"] = r.true_effect_nonzero;
    j["sign_correct"] = opt(r.sign_correct);
    j["est_percent_change_growth"] = opt(r.est_growth);
    j["true_percent_change_growth"] = opt(r.true_growth);
    j["growth_error_pp"] = opt(r.growth_error_pp);
    j["est_percent_change_total"] = opt(r.est_total);
    j["true_percent_change_total"] = opt(r.true_total);
    j["total_error_pp"] = opt(r.total_error_pp);
    metrics.push_back(j);
  }
  doc["metrics"] = metrics;
  return doc.dump(1) + "\n";
}

}  // namespace noteffect::pipeline
