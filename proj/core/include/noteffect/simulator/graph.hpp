#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "noteffect/cascade/follow_graph.hpp"

namespace noteffect::sim {

struct GraphConfig {
  std::uint64_t seed = 1;
  std::size_t user_count = 30000;
  std::size_t min_out_degree = 5;
  std::size_t max_out_degree = 2000;
  // P(out-degree = d) proportional to d^-exponent on [min, max].
  double out_degree_exponent = 2.5;
  // Followees are picked in proportion to a Pareto attractiveness with this
  // tail exponent, which makes follower counts heavy-tailed too.
  double popularity_exponent = 2.1;
};

// Compressed adjacency in both directions. User ids are dense; the names used
// by FollowEdgeSet are "u<id>".
class SimGraph {
 public:
  SimGraph() = default;
  SimGraph(std::size_t users, const std::vector<std::vector<UserId>>& followees);

  std::size_t user_count() const { return user_count_; }
  std::size_t edge_count() const { return followee_list_.size(); }
  std::span<const UserId> followees(UserId u) const;
  std::span<const UserId> followers(UserId u) const;
  std::size_t out_degree(UserId u) const { return followees(u).size(); }
  std::size_t in_degree(UserId u) const { return followers(u).size(); }

  FollowEdgeSet to_edge_set() const;

 private:
  std::size_t user_count_ = 0;
  std::vector<std::size_t> followee_offset_, follower_offset_;
  std::vector<UserId> followee_list_, follower_list_;
};

std::string user_name(UserId id);

SimGraph gen_follow_graph(const GraphConfig& config);

// Discrete power-law tail exponent by maximum likelihood,
// 1 + n / sum(ln(d / (d_min - 1/2))), over values >= d_min.
double tail_exponent_mle(std::span<const std::size_t> degrees, std::size_t d_min);

}  // namespace noteffect::sim
