#include "noteffect/cascade/cascade.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "noteffect/util/error.hpp"

namespace noteffect {

CascadeTree::CascadeTree(Millis root_time)
    : parent_{kRoot}, depth_{0}, time_{root_time}, label_{""}, subtree_{1}, level_count_{1} {}

std::size_t CascadeTree::add_node(std::size_t parent, Millis at, std::string label) {
  const std::size_t n = size();
  // Every existing node is one step farther from the new leaf than from its parent.
  wiener_ += distance_sum(parent) + static_cast<double>(n);

  const int d = depth_[parent] + 1;
  parent_.push_back(parent);
  depth_.push_back(d);
  time_.push_back(at);
  label_.push_back(std::move(label));
  subtree_.push_back(1);
  for (std::size_t u = parent;; u = parent_[u]) {
    ++subtree_[u];
    if (u == kRoot) break;
  }
  depth_sum_ += d;
  if (static_cast<std::size_t>(d) >= level_count_.size()) level_count_.resize(d + 1, 0);
  ++level_count_[d];
  max_depth_ = std::max(max_depth_, d);
  max_breadth_ = std::max(max_breadth_, level_count_[d]);
  return n;
}

double CascadeTree::distance_sum(std::size_t node) const {
  // Moving from a parent to child c changes the distance sum by n - 2 * |subtree(c)|.
  const double n = static_cast<double>(size());
  double sum = depth_sum_;
  for (std::size_t u = node; u != kRoot; u = parent_[u])
    sum += n - 2.0 * static_cast<double>(subtree_[u]);
  return sum;
}

std::optional<double> CascadeTree::structural_virality() const {
  const double n = static_cast<double>(size());
  if (size() < 2) return std::nullopt;
  return wiener_ / (n * (n - 1.0) / 2.0);
}

std::vector<RepostEvent> normalize_reposts(std::span<const RepostEvent> events) {
  std::vector<RepostEvent> sorted(events.begin(), events.end());
  std::sort(sorted.begin(), sorted.end(), [](const RepostEvent& a, const RepostEvent& b) {
    return a.at != b.at ? a.at < b.at : a.reposter < b.reposter;
  });
  std::unordered_set<std::string> seen;
  std::vector<RepostEvent> out;
  out.reserve(sorted.size());
  for (auto& e : sorted)
    if (seen.insert(e.reposter).second) out.push_back(std::move(e));
  return out;
}

namespace {

// Appends reposts one at a time with time-inferred parent attribution.
class CascadeBuilder {
 public:
  CascadeBuilder(Millis created_at, const FollowEdgeSet& graph)
      : created_at_(created_at), graph_(graph), tree_(created_at) {}

  void add(const RepostEvent& e) {
    if (e.at < created_at_)
      throw DataError("repost by " + e.reposter + " precedes creation of " + e.root_post);
    std::size_t parent = CascadeTree::kRoot;
    const auto user = graph_.find(e.reposter);
    if (user) {
      bool found = false;
      for (UserId f : graph_.followees(*user)) {
        auto it = node_of_.find(f);
        if (it == node_of_.end()) continue;
        const std::size_t cand = it->second;
        const Millis t = tree_.time(cand);
        if (t >= e.at) continue;
        if (!found || t > tree_.time(parent) ||
            (t == tree_.time(parent) && tree_.label(cand) < tree_.label(parent))) {
          parent = cand;
          found = true;
        }
      }
    }
    const std::size_t node = tree_.add_node(parent, e.at, e.reposter);
    if (user) node_of_.emplace(*user, node);
  }

  const CascadeTree& tree() const { return tree_; }
  CascadeTree take() { return std::move(tree_); }

 private:
  Millis created_at_;
  const FollowEdgeSet& graph_;
  CascadeTree tree_;
  std::unordered_map<UserId, std::size_t> node_of_;
};

}  // namespace

CascadeTree build_cascade(Millis root_created_at, std::span<const RepostEvent> events,
                          const FollowEdgeSet& graph) {
  CascadeBuilder builder(root_created_at, graph);
  for (const auto& e : normalize_reposts(events)) builder.add(e);
  return builder.take();
}

int max_depth(const CascadeTree& tree) { return tree.max_depth(); }
std::size_t max_breadth(const CascadeTree& tree) { return tree.max_breadth(); }
std::optional<double> structural_virality(const CascadeTree& tree) {
  return tree.structural_virality();
}

std::optional<double> wiener_oracle(const CascadeTree& tree) {
  const std::size_t n = tree.size();
  if (n < 2) return std::nullopt;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 1; v < n; ++v) {
    adj[v].push_back(tree.parent(v));
    adj[tree.parent(v)].push_back(v);
  }
  double total = 0.0;
  std::vector<int> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
    for (std::size_t v = s + 1; v < n; ++v) total += dist[v];
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::map<MetricKind, EngagementSeries> cascade_metrics_series(Millis root_created_at,
                                                              std::span<const RepostEvent> events,
                                                              const FollowEdgeSet& graph,
                                                              int last_step) {
  const auto sorted = normalize_reposts(events);
  CascadeBuilder builder(root_created_at, graph);
  EngagementSeries depth{MetricKind::cascade_max_depth, 0, {}};
  EngagementSeries breadth{MetricKind::cascade_max_breadth, 0, {}};
  EngagementSeries virality{MetricKind::structural_virality, 0, {}};
  std::size_t next = 0;
  for (int step = 0; step <= last_step; ++step) {
    const Millis cutoff = root_created_at + static_cast<Millis>(step) * kGridStep;
    while (next < sorted.size() && sorted[next].at <= cutoff) builder.add(sorted[next++]);
    const auto& tree = builder.tree();
    depth.values.push_back(tree.max_depth());
    breadth.values.push_back(static_cast<double>(tree.max_breadth()));
    if (const auto sv = tree.structural_virality()) {
      if (virality.values.empty()) virality.first_step = step;
      virality.values.push_back(*sv);
    }
  }
  // Events past the grid still have to be valid input.
  for (; next < sorted.size(); ++next)
    if (sorted[next].at < root_created_at)
      throw DataError("repost precedes creation of " + sorted[next].root_post);
  std::map<MetricKind, EngagementSeries> out;
  if (last_step >= 0) {
    out.emplace(MetricKind::cascade_max_depth, std::move(depth));
    out.emplace(MetricKind::cascade_max_breadth, std::move(breadth));
  }
  if (!virality.values.empty()) out.emplace(MetricKind::structural_virality, std::move(virality));
  return out;
}

EngagementSeries repost_count_series(Millis root_created_at, std::span<const RepostEvent> events,
                                     int last_step) {
  const auto sorted = normalize_reposts(events);
  EngagementSeries out{MetricKind::reposts, 0, {}};
  std::size_t next = 0;
  for (int step = 0; step <= last_step; ++step) {
    const Millis cutoff = root_created_at + static_cast<Millis>(step) * kGridStep;
    while (next < sorted.size() && sorted[next].at <= cutoff) ++next;
    out.values.push_back(static_cast<double>(next));
  }
  return out;
}

}  // namespace noteffect
