#include "noteffect/io/reports.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "noteffect/util/error.hpp"

namespace noteffect::io {

using Json = nlohmann::ordered_json;

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

MetricKind metric_from(const std::string& s) {
  auto m = parse_metric(s);
  if (!m) throw DataError("unknown metric " + s);
  return *m;
}

Json parse_doc(std::string_view text, const char* schema) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", std::string()) != schema)
    throw DataError(std::string("expected a document with schema ") + schema);
  return j;
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad document field: ") + e.what());
  }
}

Json entry_json(const ATTEntry& e) {
  return {{"t", e.t},          {"n", e.n},
          {"att", e.att},      {"se", e.se},
          {"ci_low", e.ci_low}, {"ci_high", e.ci_high},
          {"mean_y1", e.mean_y1}, {"mean_y0hat", e.mean_y0hat}};
}

ATTEntry entry_from(const Json& j) {
  ATTEntry e;
  e.t = j.at("t").get<int>();
  e.n = j.at("n").get<std::size_t>();
  e.att = j.at("att").get<double>();
  e.se = j.at("se").get<double>();
  e.ci_low = j.at("ci_low").get<double>();
  e.ci_high = j.at("ci_high").get<double>();
  e.mean_y1 = j.at("mean_y1").get<double>();
  e.mean_y0hat = j.at("mean_y0hat").get<double>();
  return e;
}

Json optional_entry(const std::optional<ATTEntry>& e) { return e ? entry_json(*e) : Json(nullptr); }

Json series_json(const ATTSeries& s) {
  Json out = Json::array();
  for (const auto& e : s.entries) out.push_back(entry_json(e));
  return out;
}

Json share_json(const ProportionInterval& p) {
  return {{"k", p.k}, {"n", p.n}, {"share", p.share}, {"ci_low", p.ci_low}, {"ci_high", p.ci_high}};
}

ProportionInterval share_from(const Json& j) {
  return {j.at("k").get<std::size_t>(), j.at("n").get<std::size_t>(), j.at("share").get<double>(),
          j.at("ci_low").get<double>(), j.at("ci_high").get<double>()};
}

}  // namespace

std::string fits_to_json(const FitSet& fits, bool include_bias_coefficients) {
  Json doc;
  doc["schema"] = kFitsSchema;
  Json scales = Json::object();
  for (const auto& [m, v] : fits.scales.scale) scales[std::string(to_string(m))] = v;
  doc["scales"] = scales;
  doc["scale_warnings"] = fits.scales.warnings;
  Json list = Json::array();
  for (const auto& f : fits.fits) {
    Json j;
    j["treated_id"] = f.treated_id;
    j["status"] = f.status == FitStatus::ok ? "ok" : "infeasible";
    j["reason"] = f.reason;
    j["treatment_step"] = f.plan.treatment_step;
    j["horizon_steps"] = f.plan.horizon_steps;
    Json windows = Json::array();
    for (const auto& w : f.plan.metrics)
      windows.push_back({{"metric", to_string(w.metric)},
                         {"pre_begin", w.pre_begin},
                         {"pre_end", w.pre_end},
                         {"outcome", w.outcome}});
    j["metrics"] = windows;
    j["screened_out"] = f.screened_out;
    if (f.status == FitStatus::ok) {
      Json donors = Json::array();
      for (std::size_t k = 0; k < f.weights.weights.size(); ++k)
        if (f.weights.weights[k] != 0.0) donors.push_back({f.weights.donor_ids[k], f.weights.weights[k]});
      j["weights"] = {{"pool_size", f.pool_size},
                      {"objective", f.weights.objective},
                      {"optimality_gap", f.weights.optimality_gap},
                      {"objective_scale", f.weights.objective_scale},
                      {"iterations", f.weights.iterations},
                      {"low_quality", f.weights.low_quality},
                      {"donors", donors}};
      Json bias = {{"disabled", f.bias_disabled},
                   {"ridge_used", f.bias_model.ridge_used},
                   {"ridge_lambda", f.bias_model.ridge_lambda},
                   {"condition_estimate", std::isfinite(f.bias_model.condition_estimate)
                                              ? Json(f.bias_model.condition_estimate)
                                              : Json(nullptr)},
                   {"sample_count", f.bias_model.sample_count}};
      if (include_bias_coefficients) {
        Json coef = Json::object();
        for (const auto& [m, beta] : f.bias_model.coefficients) {
          Json rows = Json::array();
          for (Eigen::Index t = 0; t < beta.cols(); ++t) {
            std::vector<double> col(beta.col(t).data(), beta.col(t).data() + beta.rows());
            rows.push_back(col);
          }
          const auto& b0 = f.bias_model.intercepts.at(m);
          coef[std::string(to_string(m))] = {
              {"intercept", std::vector<double>(b0.data(), b0.data() + b0.size())}, {"beta", rows}};
        }
        bias["coefficients"] = coef;
      }
      j["bias_model"] = bias;
      Json ite = Json::object();
      for (const auto& [m, e] : f.ite.metrics)
        ite[std::string(to_string(m))] = {{"y1", e.y1}, {"y0hat", e.y0hat}, {"tau", e.tau}};
      j["ite"] = ite;
    }
    list.push_back(j);
  }
  doc["fits"] = list;
  return doc.dump(1) + "\n";
}

FitSet fits_from_json(std::string_view text) {
  const Json doc = parse_doc(text, kFitsSchema);
  return guarded([&] {
    FitSet set;
    for (const auto& [name, v] : doc.at("scales").items()) set.scales.scale[metric_from(name)] = v.get<double>();
    set.scales.warnings = doc.value("scale_warnings", std::vector<std::string>{});
    for (const auto& j : doc.at("fits")) {
      PostFit f;
      f.treated_id = j.at("treated_id").get<std::string>();
      f.status = j.at("status").get<std::string>() == "ok" ? FitStatus::ok : FitStatus::infeasible;
      f.reason = j.value("reason", std::string());
      f.plan.treated_id = f.treated_id;
      f.plan.treatment_step = j.at("treatment_step").get<int>();
      f.plan.horizon_steps = j.at("horizon_steps").get<int>();
      for (const auto& w : j.at("metrics"))
        f.plan.metrics.push_back({metric_from(w.at("metric").get<std::string>()), w.at("pre_begin").get<int>(),
                                  w.at("pre_end").get<int>(), w.at("outcome").get<bool>()});
      f.screened_out = j.value("screened_out", std::size_t{0});
      if (f.status == FitStatus::ok) {
        const auto& w = j.at("weights");
        f.pool_size = w.at("pool_size").get<std::size_t>();
        f.weights.objective = w.at("objective").get<double>();
        f.weights.optimality_gap = w.at("optimality_gap").get<double>();
        f.weights.objective_scale = w.at("objective_scale").get<double>();
        f.weights.iterations = w.at("iterations").get<int>();
        f.weights.low_quality = w.at("low_quality").get<bool>();
        for (const auto& d : w.at("donors")) {
          f.weights.donor_ids.push_back(d.at(0).get<std::string>());
          f.weights.weights.push_back(d.at(1).get<double>());
        }
        const auto& b = j.at("bias_model");
        f.bias_disabled = b.at("disabled").get<bool>();
        f.bias_model.disabled = f.bias_disabled;
        f.bias_model.ridge_used = b.at("ridge_used").get<bool>();
        f.bias_model.ridge_lambda = b.at("ridge_lambda").get<double>();
        f.bias_model.condition_estimate = b.at("condition_estimate").is_null()
                                              ? std::numeric_limits<double>::infinity()
                                              : b.at("condition_estimate").get<double>();
        f.bias_model.sample_count = b.at("sample_count").get<std::size_t>();
        f.ite.treated_id = f.treated_id;
        f.ite.treatment_step = f.plan.treatment_step;
        for (const auto& [name, e] : j.at("ite").items()) {
          MetricITE ite;
          ite.metric = metric_from(name);
          ite.y1 = e.at("y1").get<std::vector<double>>();
          ite.y0hat = e.at("y0hat").get<std::vector<double>>();
          ite.tau = e.at("tau").get<std::vector<double>>();
          if (ite.y1.size() != ite.tau.size() || ite.y0hat.size() != ite.tau.size())
            throw DataError("ITE arrays of different lengths for " + f.treated_id);
          f.ite.metrics[ite.metric] = std::move(ite);
        }
      }
      set.fits.push_back(std::move(f));
    }
    return set;
  });
}

std::string effects_to_json(const EffectReport& r) {
  Json doc;
  doc["schema"] = kEffectsSchema;
  doc["horizon_steps"] = r.horizon_steps;
  doc["fits"] = {{"total", r.fits_total},
                 {"feasible", r.fits_feasible},
                 {"low_quality", r.fits_low_quality},
                 {"bias_disabled", r.bias_disabled}};
  Json metrics = Json::array();
  for (const auto& e : r.metrics) {
    Json j;
    j["metric"] = to_string(e.metric);
    j["posts"] = e.posts;
    j["percent_change_total"] = opt(e.percent_change_total);
    j["percent_change_growth"] = {{"percent", opt(e.growth.percent)},
                                  {"n", e.growth.n},
                                  {"excluded", e.growth.excluded}};
    if (e.distribution) {
      const auto& d = *e.distribution;
      Json ratios = Json::array();
      for (const auto& q : d.ratios)
        ratios.push_back({{"percentile", q.percentile},
                          {"negative_magnitude", opt(q.negative_magnitude)},
                          {"positive_magnitude", opt(q.positive_magnitude)},
                          {"ratio", opt(q.ratio)}});
      j["distribution"] = {{"n", d.n},
                           {"positive_share", share_json(d.positive_share)},
                           {"positive_mean", opt(d.positive_mean)},
                           {"positive_median", opt(d.positive_median)},
                           {"negative_mean", opt(d.negative_mean)},
                           {"negative_median", opt(d.negative_median)},
                           {"ratios", ratios},
                           {"coefficient_of_variation", opt(d.coefficient_of_variation)}};
    } else {
      j["distribution"] = nullptr;
    }
    j["histogram"] = {{"edges", e.histogram.edges},
                      {"positive", e.histogram.positive},
                      {"negative", e.histogram.negative},
                      {"zeros", e.histogram.zeros}};
    j["att"] = series_json(e.att);
    metrics.push_back(j);
  }
  doc["metrics"] = metrics;
  Json strata = Json::array();
  for (const auto& s : r.strata) {
    Json j;
    j["key"] = s.key;
    j["strata"] = s.strata;
    j["edges"] = s.edges;
    Json per = Json::object();
    for (const auto& [m, list] : s.att) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& a = list[i];
        rows.push_back({{"stratum", a.stratum},
                        {"members", a.members},
                        {"att", optional_entry(a.att)},
                        {"percent_change_growth", opt(a.percent_change_growth)},
                        {"positive_share", share_json(s.positive_share.at(m)[i])},
                        {"coefficient_of_variation", opt(s.coefficient_of_variation.at(m)[i])}});
      }
      per[std::string(to_string(m))] = rows;
    }
    j["metrics"] = per;
    strata.push_back(j);
  }
  doc["strata"] = strata;
  Json growth = Json::array();
  for (const auto& g : r.growth_matched) {
    Json bins = Json::array();
    for (const auto& b : g.bins.bins)
      bins.push_back({{"low", b.low},
                      {"high", b.high},
                      {"treated_n", b.treated_n},
                      {"control_n", b.control_n},
                      {"treated_mean", opt(b.treated_mean)},
                      {"control_mean", opt(b.control_mean)}});
    growth.push_back({{"metric", to_string(g.metric)},
                      {"edges", g.bins.edges},
                      {"treated_excluded", g.bins.treated_excluded},
                      {"control_excluded", g.bins.control_excluded},
                      {"bins", bins}});
  }
  doc["growth_matched"] = growth;
  doc["warnings"] = r.warnings;
  return doc.dump(1) + "\n";
}

EffectReport effects_from_json(std::string_view text) {
  const Json doc = parse_doc(text, kEffectsSchema);
  return guarded([&] {
    EffectReport r;
    r.horizon_steps = doc.at("horizon_steps").get<int>();
    const auto& fits = doc.at("fits");
    r.fits_total = fits.at("total").get<std::size_t>();
    r.fits_feasible = fits.at("feasible").get<std::size_t>();
    r.fits_low_quality = fits.at("low_quality").get<std::size_t>();
    r.bias_disabled = fits.at("bias_disabled").get<std::size_t>();
    for (const auto& j : doc.at("metrics")) {
      MetricEffects e;
      e.metric = metric_from(j.at("metric").get<std::string>());
      e.posts = j.at("posts").get<std::vector<std::string>>();
      e.percent_change_total = opt_from(j.at("percent_change_total"));
      const auto& g = j.at("percent_change_growth");
      e.growth.percent = opt_from(g.at("percent"));
      e.growth.n = g.at("n").get<std::size_t>();
      e.growth.excluded = g.at("excluded").get<std::size_t>();
      e.att.metric = e.metric;
      for (const auto& a : j.at("att")) e.att.entries.push_back(entry_from(a));
      if (const auto& d = j.at("distribution"); !d.is_null()) {
        DistributionSummary s;
        s.n = d.at("n").get<std::size_t>();
        s.positive_share = share_from(d.at("positive_share"));
        s.positive_mean = opt_from(d.at("positive_mean"));
        s.positive_median = opt_from(d.at("positive_median"));
        s.negative_mean = opt_from(d.at("negative_mean"));
        s.negative_median = opt_from(d.at("negative_median"));
        for (const auto& q : d.at("ratios"))
          s.ratios.push_back({q.at("percentile").get<double>(), opt_from(q.at("negative_magnitude")),
                              opt_from(q.at("positive_magnitude")), opt_from(q.at("ratio"))});
        s.coefficient_of_variation = opt_from(d.at("coefficient_of_variation"));
        e.distribution = std::move(s);
      }
      const auto& h = j.at("histogram");
      e.histogram.edges = h.at("edges").get<std::vector<double>>();
      e.histogram.positive = h.at("positive").get<std::vector<std::size_t>>();
      e.histogram.negative = h.at("negative").get<std::vector<std::size_t>>();
      e.histogram.zeros = h.at("zeros").get<std::size_t>();
      r.metrics.push_back(std::move(e));
    }
    for (const auto& j : doc.at("strata")) {
      StratifiedEffects s;
      s.key = j.at("key").get<std::string>();
      s.strata = j.at("strata").get<std::vector<std::string>>();
      s.edges = j.at("edges").get<std::vector<double>>();
      for (const auto& [name, rows] : j.at("metrics").items()) {
        const auto m = metric_from(name);
        auto& att = s.att[m];
        auto& share = s.positive_share[m];
        auto& cv = s.coefficient_of_variation[m];
        for (const auto& row : rows) {
          StratumATT a;
          a.stratum = row.at("stratum").get<std::string>();
          a.members = row.at("members").get<std::size_t>();
          if (!row.at("att").is_null()) a.att = entry_from(row.at("att"));
          a.percent_change_growth = opt_from(row.at("percent_change_growth"));
          att.push_back(std::move(a));
          share.push_back(share_from(row.at("positive_share")));
          cv.push_back(opt_from(row.at("coefficient_of_variation")));
        }
      }
      r.strata.push_back(std::move(s));
    }
    for (const auto& j : doc.at("growth_matched")) {
      GrowthMatchResult g;
      g.metric = metric_from(j.at("metric").get<std::string>());
      g.bins.edges = j.at("edges").get<std::vector<double>>();
      g.bins.treated_excluded = j.at("treated_excluded").get<std::size_t>();
      g.bins.control_excluded = j.at("control_excluded").get<std::size_t>();
      for (const auto& b : j.at("bins"))
        g.bins.bins.push_back({b.at("low").get<double>(), b.at("high").get<double>(),
                               b.at("treated_n").get<std::size_t>(), b.at("control_n").get<std::size_t>(),
                               opt_from(b.at("treated_mean")), opt_from(b.at("control_mean"))});
      r.growth_matched.push_back(std::move(g));
    }
    r.warnings = doc.value("warnings", std::vector<std::string>{});
    return r;
  });
}

std::string placebo_to_json(const PlaceboReport& r) {
  Json doc;
  doc["schema"] = kPlaceboSchema;
  doc["backdate_offset_ms"] = r.config.backdate_offset;
  doc["min_pre_ms"] = r.config.min_pre;
  doc["treated_input"] = r.treated_input;
  doc["fits_feasible"] = r.fits_feasible;
  doc["all_pass"] = r.all_pass();
  Json metrics = Json::array();
  for (const auto& m : r.metrics)
    metrics.push_back({{"metric", to_string(m.metric)},
                       {"pass", m.pass},
                       {"at_true_treatment", optional_entry(m.at_true_treatment)},
                       {"series", series_json(m.series)}});
  doc["metrics"] = metrics;
  Json ex = Json::array();
  for (const auto& e : r.exclusions)
    ex.push_back({{"post_id", e.post_id}, {"stage", e.stage}, {"reason", e.reason}});
  doc["exclusions"] = ex;
  return doc.dump(1) + "\n";
}

std::string truth_to_json(const sim::GroundTruth& truth) {
  Json doc;
  doc["schema"] = kTruthSchema;
  doc["horizon_steps"] = truth.horizon_steps;
  Json metrics = Json::array();
  for (const auto& s : truth.metrics)
    metrics.push_back({{"metric", to_string(s.metric)},
                       {"n", s.n},
                       {"att_at_horizon", s.att.empty() ? Json(nullptr) : Json(s.att.back())},
                       {"att_se_at_horizon", s.att_se_at_horizon},
                       {"percent_change_growth", opt(s.percent_change_growth)},
                       {"percent_change_total", opt(s.percent_change_total)},
                       {"att", s.att}});
  doc["metrics"] = metrics;
  Json posts = Json::array();
  for (const auto& p : truth.posts) {
    Json y1 = Json::object(), y0 = Json::object();
    for (const auto& [m, v] : p.y1) y1[std::string(to_string(m))] = v;
    for (const auto& [m, v] : p.y0) y0[std::string(to_string(m))] = v;
    posts.push_back({{"post_id", p.post_id}, {"treatment_step", p.treatment_step}, {"y1", y1}, {"y0", y0}});
  }
  doc["posts"] = posts;
  return doc.dump(1) + "\n";
}

sim::GroundTruth truth_from_json(std::string_view text) {
  const Json doc = parse_doc(text, kTruthSchema);
  return guarded([&] {
    sim::GroundTruth t;
    t.horizon_steps = doc.at("horizon_steps").get<int>();
    for (const auto& j : doc.at("posts")) {
      sim::TruePostEffect p;
      p.post_id = j.at("post_id").get<std::string>();
      p.treatment_step = j.at("treatment_step").get<int>();
      for (const auto& [name, v] : j.at("y1").items()) p.y1[metric_from(name)] = v.get<std::vector<double>>();
      for (const auto& [name, v] : j.at("y0").items()) p.y0[metric_from(name)] = v.get<std::vector<double>>();
      t.posts.push_back(std::move(p));
    }
    t.metrics = sim::summarize_truth(t.posts, t.horizon_steps);
    return t;
  });
}

std::string sim_config_to_json(const sim::SimConfig& c) {
  Json doc = {
      {"seed", c.seed},
      {"graph",
       {{"seed", c.graph.seed},
        {"user_count", c.graph.user_count},
        {"min_out_degree", c.graph.min_out_degree},
        {"max_out_degree", c.graph.max_out_degree},
        {"out_degree_exponent", c.graph.out_degree_exponent},
        {"popularity_exponent", c.graph.popularity_exponent}}},
      {"view_probability", c.view_probability},
      {"reply_probability", c.reply_probability},
      {"like_probability", c.like_probability},
      {"repost_probability", c.repost_probability},
      {"appeal_sigma", c.appeal_sigma},
      {"attention_hours", c.attention_hours},
      {"attention_sigma", c.attention_sigma},
      {"view_delay_factor", c.view_delay_factor},
      {"virality", c.virality},
      {"treated_count", c.treated_count},
      {"donor_count", c.donor_count},
      {"treatment_min_hours", c.treatment_min_hours},
      {"treatment_max_hours", c.treatment_max_hours},
      {"effect",
       {{"views", c.effect.views},
        {"replies", c.effect.replies},
        {"likes", c.effect.likes},
        {"reposts", c.effect.reposts}}},
      {"effect_onset_offset_ms", c.effect_onset_offset},
      {"horizon_ms", c.horizon},
      {"sample_step_ms", c.sample_step},
      {"epoch_ms", c.epoch},
      {"post_spacing_ms", c.post_spacing},
  };
  return doc.dump(1) + "\n";
}

sim::SimConfig sim_config_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed simulation config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("simulation config must be a JSON object");
  sim::SimConfig c;
  try {
    auto set = [&](const Json& j, const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    set(doc, "seed", c.seed);
    if (doc.contains("graph")) {
      const auto& g = doc.at("graph");
      set(g, "seed", c.graph.seed);
      set(g, "user_count", c.graph.user_count);
      set(g, "min_out_degree", c.graph.min_out_degree);
      set(g, "max_out_degree", c.graph.max_out_degree);
      set(g, "out_degree_exponent", c.graph.out_degree_exponent);
      set(g, "popularity_exponent", c.graph.popularity_exponent);
    }
    set(doc, "view_probability", c.view_probability);
    set(doc, "reply_probability", c.reply_probability);
    set(doc, "like_probability", c.like_probability);
    set(doc, "repost_probability", c.repost_probability);
    set(doc, "appeal_sigma", c.appeal_sigma);
    set(doc, "attention_hours", c.attention_hours);
    set(doc, "attention_sigma", c.attention_sigma);
    set(doc, "view_delay_factor", c.view_delay_factor);
    set(doc, "virality", c.virality);
    set(doc, "treated_count", c.treated_count);
    set(doc, "donor_count", c.donor_count);
    set(doc, "treatment_min_hours", c.treatment_min_hours);
    set(doc, "treatment_max_hours", c.treatment_max_hours);
    if (doc.contains("effect")) {
      const auto& e = doc.at("effect");
      set(e, "views", c.effect.views);
      set(e, "replies", c.effect.replies);
      set(e, "likes", c.effect.likes);
      set(e, "reposts", c.effect.reposts);
    }
    set(doc, "effect_onset_offset_ms", c.effect_onset_offset);
    set(doc, "horizon_ms", c.horizon);
    set(doc, "sample_step_ms", c.sample_step);
    set(doc, "epoch_ms", c.epoch);
    set(doc, "post_spacing_ms", c.post_spacing);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad simulation config field: ") + e.what());
  }
  c.validate();
  return c;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace noteffect::io
