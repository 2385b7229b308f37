#include "noteffect/simulator/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

#include "noteffect/core_model/align.hpp"
#include "noteffect/effects/att.hpp"
#include "noteffect/simulator/rng.hpp"
#include "noteffect/util/error.hpp"
#include "noteffect/util/parallel.hpp"
#include "noteffect/util/stats.hpp"

namespace noteffect::sim {

namespace {

// Keys above the user id range, so post-level draws never collide with
// per-user action draws.
constexpr std::uint64_t kParamKey = 1ULL << 40;
constexpr std::uint64_t kLabelKey = (1ULL << 40) + 1;
constexpr std::uint64_t kNoteKey = (1ULL << 40) + 2;

constexpr std::array<MetricKind, 4> kActions = {MetricKind::views, MetricKind::replies,
                                                MetricKind::likes, MetricKind::reposts};
constexpr std::size_t kRepostAction = 3;

const std::array<const char*, 3> kPartisanship = {"left", "neutral", "right"};
const std::array<const char*, 3> kMediaTypes = {"image", "text", "video"};
const std::array<const char*, 4> kConcerns = {"factual_error", "manipulated_media",
                                              "missing_context", "outdated_information"};
const std::array<const char*, 8> kNoteSentences = {
    "This is false.",
    "The photo is old.",
    "The video was edited to remove context.",
    "Official statistics published by the national agency show a different figure.",
    "The quote is fabricated and does not appear in any transcript.",
    "Independent reporting contradicts the central claim made in this post.",
    "See the source.",
    "The event happened in a different country several years earlier than claimed.",
};

}  // namespace

double EffectFactors::of(MetricKind m) const {
  switch (m) {
    case MetricKind::views: return views;
    case MetricKind::replies: return replies;
    case MetricKind::likes: return likes;
    case MetricKind::reposts: return reposts;
    default: return 1.0;
  }
}

void SimConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
  };
  prob(view_probability, "view_probability");
  prob(reply_probability, "reply_probability");
  prob(like_probability, "like_probability");
  prob(repost_probability, "repost_probability");
  if (!(appeal_sigma >= 0.0) || !(attention_sigma >= 0.0))
    throw ConfigError("log-normal spreads must be nonnegative");
  if (!(attention_hours > 0.0) || !(view_delay_factor > 0.0) || !(virality > 0.0))
    throw ConfigError("attention, view delay and virality must be positive");
  for (double f : {effect.views, effect.replies, effect.likes, effect.reposts})
    if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("effect factors must be finite and >= 0");
  if (!(treatment_min_hours > 0.0) || treatment_max_hours < treatment_min_hours)
    throw ConfigError("treatment window must satisfy 0 < min <= max");
  if (static_cast<double>(horizon) < (treatment_max_hours + 48.0) * static_cast<double>(kHour))
    throw ConfigError("horizon must cover the latest treatment plus 48 hours");
  if (sample_step <= 0 || post_spacing < 0) throw ConfigError("sample step must be positive");
  if (graph.user_count < 2) throw ConfigError("simulated graph needs at least two users");
}

SimWorld make_world(const SimConfig& config) {
  config.validate();
  SimWorld world;
  world.config = config;
  GraphConfig g = config.graph;
  g.seed = mix64(config.seed) ^ config.graph.seed;
  world.graph = gen_follow_graph(g);
  world.author_cdf.resize(world.graph.user_count());
  double total = 0.0;
  for (UserId u = 0; u < world.graph.user_count(); ++u) {
    total += static_cast<double>(world.graph.in_degree(u)) + 1.0;
    world.author_cdf[u] = total;
  }
  return world;
}

SimPostParams draw_post_params(const SimWorld& world, std::uint64_t post_key, bool treated) {
  const auto& c = world.config;
  SimPostParams p;
  const double r = keyed_uniform(c.seed, post_key, kParamKey, 0) * world.author_cdf.back();
  p.author = static_cast<UserId>(std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(world.author_cdf.begin(), world.author_cdf.end(), r) -
                               world.author_cdf.begin()),
      world.author_cdf.size() - 1));
  p.appeal = std::exp(c.appeal_sigma * keyed_normal(c.seed, post_key, kParamKey, 1));
  p.attention = static_cast<Millis>(std::llround(
      c.attention_hours * std::exp(c.attention_sigma * keyed_normal(c.seed, post_key, kParamKey, 2)) *
      static_cast<double>(kHour)));
  p.attention = std::max<Millis>(p.attention, kMinute);
  if (treated) {
    const double u = keyed_uniform(c.seed, post_key, kParamKey, 6);
    const double hours = c.treatment_min_hours + u * (c.treatment_max_hours - c.treatment_min_hours);
    p.treatment_age = static_cast<Millis>(std::llround(hours * static_cast<double>(kHour)));
  }
  return p;
}

namespace {

// Time of the first event of a clock with cumulative hazard
// mass * (1 - exp(-(t - e) / tau)), multiplied by f from the onset on.
// Returns nothing when the clock never fires.
std::optional<double> event_time(double draw, double mass, double tau, double e,
                                 const std::optional<double>& onset, double f) {
  auto inverse = [&](double h) -> std::optional<double> {
    if (h >= mass) return std::nullopt;
    return e - tau * std::log1p(-h / mass);
  };
  if (!onset || f == 1.0) return inverse(draw);
  const double before = *onset <= e ? 0.0 : mass * -std::expm1(-(*onset - e) / tau);
  if (draw <= before) return inverse(draw);
  if (f == 0.0) return std::nullopt;
  return inverse(before + (draw - before) / f);
}

struct Pending {
  Millis at;
  UserId user;
  bool operator>(const Pending& o) const { return at != o.at ? at > o.at : user > o.user; }
};

}  // namespace

SimPostResult simulate_post(const SimWorld& world, const SimPostParams& params,
                            std::uint64_t post_key, const std::optional<Intervention>& intervention) {
  const auto& c = world.config;
  const std::size_t n = world.graph.user_count();
  constexpr UserId kNoSource = ~UserId{0};
  std::vector<std::uint8_t> exposed(n, 0);
  std::vector<UserId> source(n, kNoSource);
  std::array<std::vector<Millis>, 4> times;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
  const double horizon = static_cast<double>(c.horizon);

  std::array<double, 4> mass{};
  std::array<double, 4> tau{};
  const std::array<double, 4> probability = {c.view_probability, c.reply_probability,
                                             c.like_probability, c.repost_probability};
  for (std::size_t k = 0; k < 4; ++k) {
    const double q = k == 0 ? probability[k] : std::min(probability[k] * params.appeal, 0.95);
    mass[k] = -std::log1p(-q);
    tau[k] = static_cast<double>(params.attention) * (k == 0 ? c.view_delay_factor : 1.0);
  }
  std::optional<double> onset;
  if (intervention) onset = static_cast<double>(intervention->onset_age);

  auto expose = [&](UserId u, Millis at, bool via_repost) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double draw = -std::log(keyed_uniform(c.seed, post_key, u, k));
      const double m = via_repost ? mass[k] * c.virality : mass[k];
      const double f = intervention ? intervention->factors.of(kActions[k]) : 1.0;
      const auto t = event_time(draw, m, tau[k], static_cast<double>(at), onset, f);
      if (!t || *t > horizon) continue;
      const auto ms = std::max(at, static_cast<Millis>(std::ceil(*t)));
      if (ms > c.horizon) continue;
      times[k].push_back(ms);
      if (k == kRepostAction) queue.push({ms, u});
    }
  };

  exposed[params.author] = 1;
  for (UserId v : world.graph.followers(params.author)) {
    exposed[v] = 1;
    expose(v, 0, false);
  }
  SimPostResult out;
  while (!queue.empty()) {
    const Pending p = queue.top();
    queue.pop();
    SimRepost r{p.user, p.at, std::nullopt};
    if (source[p.user] != kNoSource) r.source = source[p.user];
    out.reposts.push_back(r);
    for (UserId w : world.graph.followers(p.user)) {
      if (exposed[w]) continue;
      exposed[w] = 1;
      source[w] = p.user;
      expose(w, p.at, true);
    }
  }

  const auto steps = static_cast<std::size_t>(c.horizon / c.sample_step);
  for (std::size_t k = 0; k < 4; ++k) {
    auto& counts = out.counts[k];
    counts.assign(steps + 1, 0.0);
    for (Millis t : times[k]) {
      const auto bin = static_cast<std::size_t>(ceil_div(t, c.sample_step));
      if (bin <= steps) counts[bin] += 1.0;
    }
    for (std::size_t g = 1; g <= steps; ++g) counts[g] += counts[g - 1];
  }
  return out;
}

const TrueMetricSummary* GroundTruth::find(MetricKind m) const {
  for (const auto& s : metrics)
    if (s.metric == m) return &s;
  return nullptr;
}

std::vector<TrueMetricSummary> summarize_truth(const std::vector<TruePostEffect>& posts,
                                               int horizon_steps,
                                               const std::vector<std::string>& only) {
  std::vector<TrueMetricSummary> out;
  const auto h = static_cast<std::size_t>(horizon_steps);
  for (MetricKind m : kAllMetrics) {
    std::vector<const TruePostEffect*> members;
    for (const auto& p : posts) {
      if (!only.empty() && std::find(only.begin(), only.end(), p.post_id) == only.end()) continue;
      auto a = p.y1.find(m);
      auto b = p.y0.find(m);
      if (a == p.y1.end() || b == p.y0.end() || a->second.size() <= h || b->second.size() <= h) continue;
      members.push_back(&p);
    }
    if (members.empty()) continue;
    TrueMetricSummary s;
    s.metric = m;
    s.n = members.size();
    std::vector<double> diff(members.size());
    for (std::size_t t = 0; t <= h; ++t) {
      for (std::size_t i = 0; i < members.size(); ++i)
        diff[i] = members[i]->y1.at(m)[t] - members[i]->y0.at(m)[t];
      s.att.push_back(stats::mean(diff));
    }
    s.att_se_at_horizon = members.size() > 1 ? stats::sample_sd(diff) / std::sqrt(static_cast<double>(members.size())) : 0.0;
    std::vector<double> y1_0, y1_h, y0_0, y0_h;
    for (const auto* p : members) {
      y1_0.push_back(p->y1.at(m)[0]);
      y1_h.push_back(p->y1.at(m)[h]);
      y0_0.push_back(p->y0.at(m)[0]);
      y0_h.push_back(p->y0.at(m)[h]);
    }
    s.percent_change_growth = percent_change_growth(stats::mean(y1_0), stats::mean(y1_h),
                                                    stats::mean(y0_0), stats::mean(y0_h));
    s.percent_change_total = percent_change_total(stats::mean(y1_h), stats::mean(y0_h));
    out.push_back(std::move(s));
  }
  return out;
}

std::string sim_post_id(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%07llu", static_cast<unsigned long long>(index));
  return buf;
}

namespace {

std::map<MetricKind, EngagementSeries> engagement_series(const SimConfig& c, const SimPostResult& r,
                                                         const std::string& id, Millis created,
                                                         double followers) {
  std::map<MetricKind, EngagementSeries> out;
  std::vector<RawObservation> obs;
  for (std::size_t k = 0; k < 4; ++k) {
    obs.clear();
    for (std::size_t g = 0; g < r.counts[k].size(); ++g)
      obs.push_back({id, kActions[k], created + static_cast<Millis>(g) * c.sample_step, r.counts[k][g]});
    out[kActions[k]] = align_series(obs, created).series;
  }
  EngagementSeries f;
  f.metric = MetricKind::follower_count;
  f.first_step = 0;
  f.values.assign(out[MetricKind::views].values.size(), followers);
  out[MetricKind::follower_count] = std::move(f);
  return out;
}

std::vector<RepostEvent> repost_events(const SimPostResult& r, const std::string& id, Millis created) {
  std::vector<RepostEvent> out;
  out.reserve(r.reposts.size());
  for (const auto& e : r.reposts) out.push_back({id, user_name(e.user), created + e.age});
  return out;
}

void attach_labels(const SimConfig& c, std::uint64_t key, PostRecord& post) {
  auto pick = [&](std::uint64_t slot, std::size_t count) {
    return static_cast<std::size_t>(keyed_uniform(c.seed, key, kLabelKey, slot) * static_cast<double>(count));
  };
  post.labels[label_keys::kPartisanship] = {kPartisanship[pick(0, kPartisanship.size())]};
  post.labels[label_keys::kMediaType] = {kMediaTypes[pick(1, kMediaTypes.size())]};
  std::vector<std::string> concerns;
  for (std::size_t i = 0; i < kConcerns.size(); ++i)
    if (keyed_uniform(c.seed, key, kLabelKey, 10 + i) < 0.3) concerns.emplace_back(kConcerns[i]);
  if (concerns.empty()) concerns.emplace_back(kConcerns[pick(2, kConcerns.size())]);
  post.labels[label_keys::kAccuracyConcerns] = std::move(concerns);
}

NoteText make_note(const SimConfig& c, std::uint64_t key, const std::string& post_id) {
  NoteText note;
  note.note_id = "n" + post_id.substr(1);
  const auto sentences =
      1 + static_cast<std::size_t>(keyed_uniform(c.seed, key, kNoteKey, 0) * 4.0);
  for (std::size_t i = 0; i < sentences; ++i) {
    const auto k = static_cast<std::size_t>(keyed_uniform(c.seed, key, kNoteKey, 1 + i) *
                                            static_cast<double>(kNoteSentences.size()));
    if (!note.text.empty()) note.text += ' ';
    note.text += kNoteSentences[k];
  }
  return note;
}

}  // namespace

SimCohort simulate_cohort(const SimConfig& config, unsigned workers) {
  const SimWorld world = make_world(config);
  const auto& c = world.config;
  const std::size_t total = c.treated_count + c.donor_count;
  const int horizon_steps = static_cast<int>(48 * kHour / kGridStep);
  const int last_step = static_cast<int>(c.horizon / kGridStep);

  SimCohort out;
  out.follows = world.graph.to_edge_set();
  out.truth.horizon_steps = horizon_steps;

  std::vector<PostRecord> posts(total);
  std::vector<std::vector<RepostEvent>> events(total);
  std::vector<std::optional<TruePostEffect>> truth(total);

  parallel_for(total, workers, [&](std::size_t i) {
    const bool treated = i < c.treated_count;
    const auto params = draw_post_params(world, i, treated);
    PostRecord& post = posts[i];
    post.post_id = sim_post_id(i);
    post.created_at = c.epoch + static_cast<Millis>(i) * c.post_spacing;
    post.author_follower_count = static_cast<double>(world.graph.in_degree(params.author));
    attach_labels(c, i, post);
    post.notes.push_back(make_note(c, i, post.post_id));

    std::optional<Intervention> intervention;
    if (treated) {
      post.treatment_time = post.created_at + *params.treatment_age;
      post.notes.back().helpful.push_back({*post.treatment_time, post.created_at + c.horizon});
      intervention = Intervention{*params.treatment_age + c.effect_onset_offset, c.effect};
    }
    const auto observed = simulate_post(world, params, i, intervention);
    post.series = engagement_series(c, observed, post.post_id, post.created_at,
                                    post.author_follower_count);
    events[i] = repost_events(observed, post.post_id, post.created_at);
    if (!treated) return;

    const auto counterfactual = simulate_post(world, params, i, std::nullopt);
    const auto y0_series = engagement_series(c, counterfactual, post.post_id, post.created_at,
                                             post.author_follower_count);
    const auto y0_events = repost_events(counterfactual, post.post_id, post.created_at);
    auto y1_cascade = cascade_metrics_series(post.created_at, events[i], out.follows, last_step);
    auto y0_cascade = cascade_metrics_series(post.created_at, y0_events, out.follows, last_step);

    TruePostEffect effect;
    effect.post_id = post.post_id;
    effect.treatment_step = *post.treatment_step();
    const int a = effect.treatment_step;
    auto take = [&](const std::map<MetricKind, EngagementSeries>& from, MetricKind m,
                    std::map<MetricKind, std::vector<double>>& into) {
      auto it = from.find(m);
      if (it == from.end() || !it->second.covers(a, a + horizon_steps)) return false;
      auto& v = into[m];
      for (int t = 0; t <= horizon_steps; ++t) v.push_back(it->second.at(a + t));
      return true;
    };
    for (MetricKind m : kAllMetrics) {
      const bool cascade = std::find(kCascadeMetrics.begin(), kCascadeMetrics.end(), m) != kCascadeMetrics.end();
      const auto& one = cascade ? y1_cascade : post.series;
      const auto& zero = cascade ? y0_cascade : y0_series;
      if (!take(one, m, effect.y1) || !take(zero, m, effect.y0)) {
        effect.y1.erase(m);
        effect.y0.erase(m);
      }
    }
    truth[i] = std::move(effect);
  });

  for (std::size_t i = 0; i < total; ++i) {
    out.reposts[posts[i].post_id] = std::move(events[i]);
    if (truth[i]) out.truth.posts.push_back(std::move(*truth[i]));
    if (i < c.treated_count)
      out.cohort.treated.push_back(std::move(posts[i]));
    else
      out.cohort.donors.push_back(std::move(posts[i]));
  }
  out.truth.metrics = summarize_truth(out.truth.posts, horizon_steps);
  return out;
}

}  // namespace noteffect::sim
