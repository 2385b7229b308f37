#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noteffect/cascade/follow_graph.hpp"
#include "noteffect/core_model/series.hpp"

namespace noteffect {

struct RepostEvent {
  std::string root_post;
  std::string reposter;
  Millis at = 0;
  friend bool operator==(const RepostEvent&, const RepostEvent&) = default;
};

// Repost tree rooted at the original post (node 0). Nodes are appended in
// time order; every append keeps depth, level counts, subtree sizes and the
// Wiener index (sum of pairwise undirected distances) up to date.
class CascadeTree {
 public:
  static constexpr std::size_t kRoot = 0;

  explicit CascadeTree(Millis root_time = 0);

  std::size_t add_node(std::size_t parent, Millis at, std::string label);

  std::size_t size() const { return parent_.size(); }  // including the root
  std::size_t repost_count() const { return size() - 1; }
  std::size_t parent(std::size_t n) const { return parent_[n]; }
  int depth(std::size_t n) const { return depth_[n]; }
  Millis time(std::size_t n) const { return time_[n]; }
  const std::string& label(std::size_t n) const { return label_[n]; }
  std::size_t subtree_size(std::size_t n) const { return subtree_[n]; }

  int max_depth() const { return max_depth_; }
  std::size_t max_breadth() const { return max_breadth_; }
  double wiener_index() const { return wiener_; }
  // Mean pairwise distance; absent below two nodes.
  std::optional<double> structural_virality() const;

  // Sum of distances from n to every node currently in the tree.
  double distance_sum(std::size_t n) const;

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> depth_;
  std::vector<Millis> time_;
  std::vector<std::string> label_;
  std::vector<std::size_t> subtree_;
  std::vector<std::size_t> level_count_;
  double depth_sum_ = 0.0;
  double wiener_ = 0.0;
  int max_depth_ = 0;
  std::size_t max_breadth_ = 0;
};

// Sorted by (time, reposter) with re-reposts collapsed to the earliest event.
std::vector<RepostEvent> normalize_reposts(std::span<const RepostEvent> events);

// Time-inferred diffusion: each repost attaches to the followee that most
// recently reposted strictly before it (ties: later time, then smaller user
// name), or to the root. Throws DataError for reposts before post creation.
CascadeTree build_cascade(Millis root_created_at, std::span<const RepostEvent> events,
                          const FollowEdgeSet& graph);

int max_depth(const CascadeTree& tree);
std::size_t max_breadth(const CascadeTree& tree);
std::optional<double> structural_virality(const CascadeTree& tree);

// Structural virality by breadth-first search out of every node.
std::optional<double> wiener_oracle(const CascadeTree& tree);

// Depth, breadth and structural virality on the grid [0, last_step]; a grid
// point at age g sees the reposts with at <= created_at + g. Structural
// virality starts at the first grid point with at least one repost.
std::map<MetricKind, EngagementSeries> cascade_metrics_series(
    Millis root_created_at, std::span<const RepostEvent> events,
    const FollowEdgeSet& graph, int last_step);

// Cumulative repost counts on [0, last_step], from the same event log.
EngagementSeries repost_count_series(Millis root_created_at,
                                     std::span<const RepostEvent> events,
                                     int last_step);

}  // namespace noteffect
