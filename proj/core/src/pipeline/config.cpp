#include "noteffect/pipeline/config.hpp"

#include <set>

#include <json.hpp>

#include "noteffect/util/error.hpp"
#include "noteffect/util/parallel.hpp"

namespace noteffect::pipeline {

using Json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
  if (metrics.empty()) throw ConfigError("metric selection is empty");
  if (donor_pool_size < 2) throw ConfigError("donor_pool_size must be at least 2");
  if (!(solver_tolerance > 0.0)) throw ConfigError("solver_tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
  if (grid_step != kGridStep) throw ConfigError("only the 15-minute grid is supported");
  if (horizon <= 0 || horizon % grid_step != 0)
    throw ConfigError("horizon must be a positive multiple of the grid step");
  if (min_pre <= 0 || min_pre % grid_step != 0)
    throw ConfigError("min_pre must be a positive multiple of the grid step");
  if (!(anomaly.min_abs_change >= 0.0) || !(anomaly.min_rel_change >= 0.0))
    throw ConfigError("anomaly thresholds must be nonnegative");
  if (growth_bins < 1) throw ConfigError("growth_bins must be positive");
  if (workers < 1) throw ConfigError("workers must be positive");
  placebo_config().validate();
}

FitConfig PipelineConfig::fit_config() const {
  FitConfig c;
  c.donor_pool_size = donor_pool_size;
  c.horizon_steps = horizon_steps();
  c.solver.tolerance = solver_tolerance;
  c.solver.max_iterations = max_iterations;
  c.solver.constraint = weight_constraint;
  c.bias_correction = bias_correction;
  c.scales.per_age = per_age_scales;
  c.metrics = metrics;
  return c;
}

EffectsConfig PipelineConfig::effects_config() const {
  EffectsConfig c;
  c.horizon_steps = horizon_steps();
  c.att.ci = ci;
  c.strata = strata;
  c.growth_bins = growth_bins;
  return c;
}

PlaceboConfig PipelineConfig::placebo_config() const {
  PlaceboConfig c;
  c.backdate_offset = placebo_offset;
  c.min_pre = min_pre;
  c.metrics = placebo_metrics;
  return c;
}

EligibilityConfig PipelineConfig::eligibility_config() const { return {min_pre, horizon}; }

PipelineConfig default_config() {
  PipelineConfig c;
  c.workers = default_worker_count();
  return c;
}

namespace {

std::vector<MetricKind> metric_list(const Json& j) {
  std::vector<MetricKind> out;
  for (const auto& v : j) {
    const auto m = parse_metric(v.get<std::string>());
    if (!m) throw ConfigError("unknown metric " + v.get<std::string>());
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  return out;
}

std::vector<std::string> metric_names(const std::vector<MetricKind>& metrics) {
  std::vector<std::string> out;
  for (MetricKind m : metrics) out.emplace_back(to_string(m));
  return out;
}

Millis minutes(const Json& j) { return static_cast<Millis>(std::llround(j.get<double>() * kMinute)); }

}  // namespace

PipelineConfig config_from_json(std::string_view text, PipelineConfig c) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "metrics") c.metrics = metric_list(v);
      else if (key == "donor_pool_size") c.donor_pool_size = v.get<std::size_t>();
      else if (key == "solver_tolerance") c.solver_tolerance = v.get<double>();
      else if (key == "max_iterations") c.max_iterations = v.get<int>();
      else if (key == "weight_constraint") {
        const auto s = v.get<std::string>();
        if (s == "simplex") c.weight_constraint = WeightConstraint::simplex;
        else if (s == "affine") c.weight_constraint = WeightConstraint::affine;
        else throw ConfigError("weight_constraint must be simplex or affine");
      } else if (key == "per_age_scales") c.per_age_scales = v.get<bool>();
      else if (key == "horizon_minutes") c.horizon = minutes(v);
      else if (key == "grid_step_minutes") c.grid_step = minutes(v);
      else if (key == "anomaly_min_abs_change") c.anomaly.min_abs_change = v.get<double>();
      else if (key == "anomaly_min_rel_change") c.anomaly.min_rel_change = v.get<double>();
      else if (key == "min_pre_minutes") c.min_pre = minutes(v);
      else if (key == "placebo_offset_minutes") c.placebo_offset = minutes(v);
      else if (key == "placebo_metrics") c.placebo_metrics = metric_list(v);
      else if (key == "bias_correction") c.bias_correction = v.get<bool>();
      else if (key == "ci_variant") {
        const auto s = v.get<std::string>();
        if (s == "sqrt_n") c.ci = CiVariant::sqrt_n;
        else if (s == "literal_n") c.ci = CiVariant::literal_n;
        else throw ConfigError("ci_variant must be sqrt_n or literal_n");
      } else if (key == "strata") c.strata = v.get<std::vector<std::string>>();
      else if (key == "growth_bins") c.growth_bins = v.get<std::size_t>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else throw ConfigError("unknown config key " + key);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const PipelineConfig& c) {
  Json doc = {
      {"metrics", metric_names(c.metrics)},
      {"donor_pool_size", c.donor_pool_size},
      {"solver_tolerance", c.solver_tolerance},
      {"max_iterations", c.max_iterations},
      {"weight_constraint", c.weight_constraint == WeightConstraint::simplex ? "simplex" : "affine"},
      {"per_age_scales", c.per_age_scales},
      {"horizon_minutes", c.horizon / kMinute},
      {"grid_step_minutes", c.grid_step / kMinute},
      {"anomaly_min_abs_change", c.anomaly.min_abs_change},
      {"anomaly_min_rel_change", c.anomaly.min_rel_change},
      {"min_pre_minutes", c.min_pre / kMinute},
      {"placebo_offset_minutes", c.placebo_offset / kMinute},
      {"placebo_metrics", metric_names(c.placebo_metrics)},
      {"bias_correction", c.bias_correction},
      {"ci_variant", c.ci == CiVariant::sqrt_n ? "sqrt_n" : "literal_n"},
      {"strata", c.strata},
      {"growth_bins", c.growth_bins},
      {"output_dir", c.output_dir},
      {"workers", c.workers},
  };
  return doc.dump(1) + "\n";
}

}  // namespace noteffect::pipeline
