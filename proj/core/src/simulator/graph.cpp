#include "noteffect/simulator/graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "noteffect/simulator/rng.hpp"
#include "noteffect/util/error.hpp"

namespace noteffect::sim {

namespace {

constexpr std::uint64_t kDegreeTag = 0x6465670000000001ULL;
constexpr std::uint64_t kPopularityTag = 0x706f700000000002ULL;
constexpr std::uint64_t kFolloweeTag = 0x666f6c0000000003ULL;

}  // namespace

SimGraph::SimGraph(std::size_t users, const std::vector<std::vector<UserId>>& followees)
    : user_count_(users) {
  followee_offset_.assign(users + 1, 0);
  std::vector<std::size_t> in(users, 0);
  for (std::size_t u = 0; u < users; ++u) {
    followee_offset_[u + 1] = followee_offset_[u] + followees[u].size();
    for (UserId v : followees[u]) ++in[v];
  }
  followee_list_.reserve(followee_offset_.back());
  for (const auto& list : followees) followee_list_.insert(followee_list_.end(), list.begin(), list.end());
  follower_offset_.assign(users + 1, 0);
  for (std::size_t v = 0; v < users; ++v) follower_offset_[v + 1] = follower_offset_[v] + in[v];
  follower_list_.resize(follower_offset_.back());
  std::vector<std::size_t> fill(follower_offset_.begin(), follower_offset_.end() - 1);
  // Followers come out sorted because u is visited in increasing order.
  for (std::size_t u = 0; u < users; ++u)
    for (UserId v : followees[u]) follower_list_[fill[v]++] = static_cast<UserId>(u);
}

std::span<const UserId> SimGraph::followees(UserId u) const {
  return {followee_list_.data() + followee_offset_[u], followee_offset_[u + 1] - followee_offset_[u]};
}

std::span<const UserId> SimGraph::followers(UserId u) const {
  return {follower_list_.data() + follower_offset_[u], follower_offset_[u + 1] - follower_offset_[u]};
}

std::string user_name(UserId id) { return "u" + std::to_string(id); }

FollowEdgeSet SimGraph::to_edge_set() const {
  FollowEdgeSet set;
  for (UserId u = 0; u < user_count_; ++u) set.intern(user_name(u));
  for (UserId u = 0; u < user_count_; ++u)
    for (UserId v : followees(u)) set.add_follow(u, v);
  set.finalize();
  return set;
}

SimGraph gen_follow_graph(const GraphConfig& config) {
  const std::size_t n = config.user_count;
  if (n < 2) throw ConfigError("follow graph needs at least two users");
  if (config.min_out_degree < 1 || config.max_out_degree < config.min_out_degree)
    throw ConfigError("out-degree bounds must satisfy 1 <= min <= max");
  if (!(config.out_degree_exponent > 1.0) || !(config.popularity_exponent > 1.0))
    throw ConfigError("degree exponents must exceed 1");

  std::vector<double> cdf(n);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double u = keyed_uniform(config.seed, kPopularityTag, v, 0);
    total += std::pow(u, -1.0 / (config.popularity_exponent - 1.0));
    cdf[v] = total;
  }

  const double x_min = static_cast<double>(config.min_out_degree) - 0.5;
  const std::size_t cap = std::min(config.max_out_degree, n - 1);
  std::vector<std::vector<UserId>> followees(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::size_t d = 0;
    for (std::uint64_t attempt = 0;; ++attempt) {
      const double x = x_min * std::pow(keyed_uniform(config.seed, kDegreeTag, u, attempt),
                                        -1.0 / (config.out_degree_exponent - 1.0));
      if (x + 0.5 < static_cast<double>(config.max_out_degree) + 1.0) {
        d = static_cast<std::size_t>(std::floor(x + 0.5));
        break;
      }
    }
    d = std::clamp(d, config.min_out_degree, cap);
    auto& list = followees[u];
    std::unordered_set<UserId> chosen;
    for (std::uint64_t j = 0; list.size() < d; ++j) {
      const double r = keyed_uniform(config.seed, kFolloweeTag, u, j) * total;
      auto v = static_cast<UserId>(std::min<std::size_t>(
          static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin()), n - 1));
      if (v == u || !chosen.insert(v).second) continue;
      list.push_back(v);
    }
    std::sort(list.begin(), list.end());
  }
  return SimGraph(n, followees);
}

double tail_exponent_mle(std::span<const std::size_t> degrees, std::size_t d_min) {
  double sum = 0.0;
  std::size_t count = 0;
  const double base = static_cast<double>(d_min) - 0.5;
  for (auto d : degrees) {
    if (d < d_min) continue;
    sum += std::log(static_cast<double>(d) / base);
    ++count;
  }
  if (count == 0 || sum <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 + static_cast<double>(count) / sum;
}

}  // namespace noteffect::sim
