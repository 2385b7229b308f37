#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noteffect/cascade/cascade.hpp"
#include "noteffect/core_model/post.hpp"
#include "noteffect/simulator/graph.hpp"

namespace noteffect::sim {

// Multiplicative hazard factors applied from the intervention onward.
struct EffectFactors {
  double views = 1.0;
  double replies = 1.0;
  double likes = 1.0;
  double reposts = 1.0;

  double of(MetricKind m) const;
  bool is_null() const { return views == 1.0 && replies == 1.0 && likes == 1.0 && reposts == 1.0; }
};

struct SimConfig {
  std::uint64_t seed = 1;
  GraphConfig graph;

  // Probability that one exposed user eventually performs each action, before
  // the post's appeal multiplier (views are not scaled by appeal).
  double view_probability = 0.6;
  double reply_probability = 0.012;
  double like_probability = 0.08;
  double repost_probability = 0.03;
  double appeal_sigma = 0.5;          // log-normal post appeal
  double attention_hours = 3.0;       // median action timescale after exposure
  double attention_sigma = 0.3;       // log-normal spread of the timescale
  double view_delay_factor = 0.5;     // views happen faster than other actions
  double virality = 1.0;              // hazard multiplier for exposures via reposts

  std::size_t treated_count = 200;
  std::size_t donor_count = 2000;
  double treatment_min_hours = 1.5;
  double treatment_max_hours = 16.0;
  EffectFactors effect{0.9, 0.8, 0.6, 0.55};
  // Effect onset relative to the recorded treatment time (negative = earlier).
  Millis effect_onset_offset = 0;

  Millis horizon = 72 * kHour;
  Millis sample_step = kGridStep;
  Millis epoch = 1678924800000;  // 2023-03-16T00:00:00Z
  Millis post_spacing = 7 * kMinute;

  // Throws ConfigError for nonpositive rates, factors outside [0, inf), or a
  // treatment window that does not fit 48h inside the horizon.
  void validate() const;
};

struct SimPostParams {
  UserId author = 0;
  double appeal = 1.0;
  Millis attention = 3 * kHour;
  std::optional<Millis> treatment_age;
};

struct Intervention {
  Millis onset_age = 0;
  EffectFactors factors;
};

struct SimRepost {
  UserId user = 0;
  Millis age = 0;
  std::optional<UserId> source;  // reposter whose share exposed this user
};

struct SimPostResult {
  // Cumulative views, replies, likes, reposts at ages k * sample_step.
  std::array<std::vector<double>, 4> counts;
  std::vector<SimRepost> reposts;  // time order
};

struct SimWorld {
  SimConfig config;
  SimGraph graph;
  std::vector<double> author_cdf;  // cumulative (in-degree + 1)
};

SimWorld make_world(const SimConfig& config);

SimPostParams draw_post_params(const SimWorld& world, std::uint64_t post_key, bool treated);

// Exposure-driven exponential clocks: followers of the author (and later of
// each reposter) become exposed; each exposed user independently performs
// each action at most once with a decaying hazard, multiplied by the
// intervention factor after its onset. Draws are keyed by (seed, post, user,
// action), so runs with and without the intervention agree before onset.
SimPostResult simulate_post(const SimWorld& world, const SimPostParams& params,
                            std::uint64_t post_key,
                            const std::optional<Intervention>& intervention);

struct TruePostEffect {
  std::string post_id;
  int treatment_step = 0;
  // Values at treatment_step + t, t = 0..horizon, with and without the effect.
  std::map<MetricKind, std::vector<double>> y1;
  std::map<MetricKind, std::vector<double>> y0;
};

struct TrueMetricSummary {
  MetricKind metric = MetricKind::views;
  std::size_t n = 0;
  std::vector<double> att;  // t = 0..horizon
  double att_se_at_horizon = 0.0;
  std::optional<double> percent_change_growth;
  std::optional<double> percent_change_total;
};

struct GroundTruth {
  int horizon_steps = 192;
  std::vector<TruePostEffect> posts;
  std::vector<TrueMetricSummary> metrics;

  const TrueMetricSummary* find(MetricKind m) const;
};

// Cohort-level truth over the given posts (all posts when `only` is empty).
std::vector<TrueMetricSummary> summarize_truth(const std::vector<TruePostEffect>& posts,
                                               int horizon_steps,
                                               const std::vector<std::string>& only = {});

struct SimCohort {
  Cohort cohort;
  std::map<std::string, std::vector<RepostEvent>> reposts;
  FollowEdgeSet follows;
  GroundTruth truth;
};

// Treated posts carry the intervention arm as observed data; the truth holds
// the paired no-intervention arm. Donors are independent draws.
SimCohort simulate_cohort(const SimConfig& config, unsigned workers = 1);

std::string sim_post_id(std::uint64_t index);

}  // namespace noteffect::sim
