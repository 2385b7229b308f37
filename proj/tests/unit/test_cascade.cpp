#include <doctest.h>

#include <random>

#include "../common/oracles.hpp"
#include "noteffect/cascade/cascade.hpp"
#include "noteffect/simulator/simulator.hpp"
#include "noteffect/util/error.hpp"

using namespace noteffect;

namespace {

CascadeTree tree_from_parents(const std::vector<std::size_t>& parent) {
  CascadeTree t(0);
  for (std::size_t v = 1; v < parent.size(); ++v) t.add_node(parent[v], static_cast<Millis>(v), "u" + std::to_string(v));
  return t;
}

CascadeTree star(std::size_t k) { return tree_from_parents(std::vector<std::size_t>(k + 1, 0)); }

CascadeTree path(std::size_t nodes) {
  std::vector<std::size_t> p(nodes, 0);
  for (std::size_t v = 1; v < nodes; ++v) p[v] = v - 1;
  return tree_from_parents(p);
}

}  // namespace

TEST_CASE("build_cascade attributes reposts by time-inferred diffusion") {
  FollowEdgeSet g;
  g.add_follow("u2", "u1");
  g.add_follow("u3", "u1");
  g.add_follow("u3", "u2");
  g.finalize();

  std::vector<RepostEvent> lone{{"r", "u9", 10}};
  auto t0 = build_cascade(0, lone, g);
  CHECK(t0.parent(1) == CascadeTree::kRoot);

  std::vector<RepostEvent> chain{{"r", "u1", 10}, {"r", "u2", 20}};
  auto t1 = build_cascade(0, chain, g);
  CHECK(t1.label(2) == "u2");
  CHECK(t1.parent(2) == 1);
  CHECK(t1.depth(1) == 1);
  CHECK(t1.depth(2) == 2);

  std::vector<RepostEvent> both{{"r", "u1", 10}, {"r", "u2", 20}, {"r", "u3", 30}};
  auto t2 = build_cascade(0, both, g);
  CHECK(t2.label(t2.parent(3)) == "u2");

  std::vector<RepostEvent> early{{"r", "u1", -5}};
  CHECK_THROWS_AS(build_cascade(0, early, g), DataError);
}

TEST_CASE("normalize_reposts keeps the earliest repost per user") {
  std::vector<RepostEvent> ev{{"r", "b", 30}, {"r", "a", 20}, {"r", "b", 10}, {"r", "c", 20}};
  auto n = normalize_reposts(ev);
  REQUIRE(n.size() == 3);
  CHECK(n[0].reposter == "b");
  CHECK(n[0].at == 10);
  CHECK(n[1].reposter == "a");
  CHECK(n[2].reposter == "c");
}

TEST_CASE("depth, breadth and virality closed forms") {
  CHECK(max_depth(star(5)) == 1);
  CHECK(max_depth(path(5)) == 4);
  CHECK(max_depth(CascadeTree(0)) == 0);
  CHECK(max_breadth(star(5)) == 5);
  CHECK(max_breadth(path(5)) == 1);
  CHECK(max_breadth(tree_from_parents({0, 0, 0, 1, 1, 1})) == 3);

  CHECK(*structural_virality(star(3)) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(*structural_virality(path(4)) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  for (std::size_t k = 1; k < 60; ++k) {
    CHECK(*structural_virality(star(k)) == 2.0 * k / (k + 1.0));
    CHECK(*structural_virality(path(k + 1)) == doctest::Approx((k + 2.0) / 3.0).epsilon(1e-14));
  }
  CHECK_FALSE(structural_virality(CascadeTree(0)).has_value());
}

TEST_CASE("incremental metrics equal the BFS oracle on random trees") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 150;
    auto parent = oracle::random_tree(rng, n);
    auto t = tree_from_parents(parent);
    CHECK(*structural_virality(t) == doctest::Approx(oracle::mean_distance_bfs(parent)).epsilon(1e-12));
    CHECK(*wiener_oracle(t) == doctest::Approx(*structural_virality(t)).epsilon(1e-12));
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    CHECK(t.wiener_index() == doctest::Approx(oracle::mean_distance_bfs(parent) * pairs).epsilon(1e-12));
    CHECK(max_depth(t) == oracle::max_depth(parent));
    CHECK(max_breadth(t) == oracle::max_breadth(parent));
  }
}

TEST_CASE("metrics stay exact after every append") {
  std::mt19937_64 rng(12);
  for (int stream = 0; stream < 10; ++stream) {
    auto parent = oracle::random_tree(rng, 80);
    CascadeTree t(0);
    std::vector<std::size_t> prefix{0};
    for (std::size_t v = 1; v < parent.size(); ++v) {
      t.add_node(parent[v], static_cast<Millis>(v), "");
      prefix.push_back(parent[v]);
      REQUIRE(std::abs(*t.structural_virality() - oracle::mean_distance_bfs(prefix)) <= 1e-9);
      REQUIRE(t.max_depth() == oracle::max_depth(prefix));
    }
  }
}

TEST_CASE("cascade_metrics_series gates events by grid time") {
  FollowEdgeSet g;
  g.finalize();
  auto none = cascade_metrics_series(0, std::vector<RepostEvent>{}, g, 4);
  CHECK(none.at(MetricKind::cascade_max_depth).values == std::vector<double>(5, 0.0));
  CHECK(none.at(MetricKind::cascade_max_breadth).values == std::vector<double>(5, 0.0));
  CHECK(none.count(MetricKind::structural_virality) == 0);

  std::vector<RepostEvent> one{{"r", "u1", 20 * kMinute}};
  auto s = cascade_metrics_series(0, one, g, 3);
  const auto& d = s.at(MetricKind::cascade_max_depth);
  CHECK(d.values[1] == 0.0);
  CHECK(d.values[2] == 1.0);
  CHECK(s.at(MetricKind::structural_virality).first_step == 2);

  auto counts = repost_count_series(0, one, 3);
  CHECK(counts.values == std::vector<double>{0, 0, 1, 1});
}

TEST_CASE("cascade_metrics_series equals per-snapshot recomputation on a simulated cascade") {
  sim::SimConfig c;
  c.seed = 5;
  c.graph.user_count = 20000;
  c.treated_count = 0;
  c.donor_count = 40;
  auto cohort = sim::simulate_cohort(c);
  // Largest simulated cascade.
  const std::vector<RepostEvent>* events = nullptr;
  Millis created = 0;
  for (const auto& d : cohort.cohort.donors) {
    const auto& ev = cohort.reposts.at(d.post_id);
    if (!events || ev.size() > events->size()) {
      events = &ev;
      created = d.created_at;
    }
  }
  REQUIRE(events);
  REQUIRE(events->size() >= 100);
  const int last = 72 * 4;
  auto series = cascade_metrics_series(created, *events, cohort.follows, last);
  for (int step = 0; step <= last; step += 3) {
    std::vector<RepostEvent> prefix;
    for (const auto& e : *events)
      if (e.at <= created + step * kGridStep) prefix.push_back(e);
    auto t = build_cascade(created, prefix, cohort.follows);
    CHECK(series.at(MetricKind::cascade_max_depth).at(step) == t.max_depth());
    CHECK(series.at(MetricKind::cascade_max_breadth).at(step) == static_cast<double>(t.max_breadth()));
    if (auto sv = t.structural_virality())
      CHECK(series.at(MetricKind::structural_virality).at(step) == doctest::Approx(*sv).epsilon(1e-12));
  }
}
