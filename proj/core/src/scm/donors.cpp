#include "noteffect/scm/donors.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace noteffect {

std::size_t FitPlan::pre_point_count() const {
  std::size_t n = 0;
  for (const auto& w : metrics) n += static_cast<std::size_t>(w.pre_end - w.pre_begin);
  return n;
}

bool FitPlan::has_outcome(MetricKind m) const {
  return std::any_of(metrics.begin(), metrics.end(),
                     [m](const MetricWindow& w) { return w.metric == m && w.outcome; });
}

FitPlan plan_fit(const PostRecord& treated, const StandardizationScales& scales,
                 std::span<const MetricKind> metrics, int horizon_steps) {
  FitPlan plan;
  plan.treated_id = treated.post_id;
  plan.horizon_steps = horizon_steps;
  const auto a = treated.treatment_step();
  if (!a) return plan;
  plan.treatment_step = *a;
  for (MetricKind m : kAllMetrics) {
    if (std::find(metrics.begin(), metrics.end(), m) == metrics.end()) continue;
    if (!scales.has(m)) continue;
    const auto* s = treated.find_series(m);
    if (!s) continue;
    const int begin = std::max(s->first_step, 0);
    if (begin >= *a || !s->covers(begin, *a - 1)) continue;
    plan.metrics.push_back({m, begin, *a, is_outcome_metric(m) && s->covers(*a, *a + horizon_steps)});
  }
  return plan;
}

bool donor_covers(const PostRecord& donor, const FitPlan& plan) {
  for (const auto& w : plan.metrics) {
    const auto* s = donor.find_series(w.metric);
    if (!s) return false;
    const int last = w.outcome ? w.pre_end + plan.horizon_steps : w.pre_end - 1;
    if (!s->covers(w.pre_begin, last)) return false;
  }
  return true;
}

double standardized_distance(const PostRecord& treated, const PostRecord& donor,
                             const FitPlan& plan, const StandardizationScales& scales) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& w : plan.metrics) {
    const auto& t = *treated.find_series(w.metric);
    const auto& d = *donor.find_series(w.metric);
    for (int step = w.pre_begin; step < w.pre_end; ++step) {
      const double diff = (t.at(step) - d.at(step)) / scales.at(w.metric, step);
      total += diff * diff;
      ++count;
    }
  }
  return count ? std::sqrt(total / static_cast<double>(count)) : 0.0;
}

DonorPool screen_and_select_donors(const PostRecord& treated, std::span<const PostRecord> donors,
                                   const StandardizationScales& scales, const FitPlan& plan,
                                   std::size_t k) {
  DonorPool pool;
  pool.treated_id = treated.post_id;
  std::vector<std::tuple<double, const std::string*, std::size_t>> ranked;
  ranked.reserve(donors.size());
  for (std::size_t i = 0; i < donors.size(); ++i) {
    if (!donor_covers(donors[i], plan)) {
      ++pool.screened_out;
      continue;
    }
    ranked.emplace_back(standardized_distance(treated, donors[i], plan, scales),
                        &donors[i].post_id, i);
  }
  auto less = [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return *std::get<1>(a) < *std::get<1>(b);
  };
  const std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    less);
  ranked.resize(keep);
  for (const auto& [dist, id, index] : ranked) {
    pool.donor_index.push_back(index);
    pool.donor_ids.push_back(*id);
    pool.distances.push_back(dist);
  }
  return pool;
}

PreMatrix build_pre_matrix(const PostRecord& treated, std::span<const PostRecord> donors,
                           const DonorPool& pool, const FitPlan& plan,
                           const StandardizationScales& scales) {
  const auto rows = static_cast<Eigen::Index>(plan.pre_point_count());
  const auto cols = static_cast<Eigen::Index>(pool.size());
  PreMatrix out{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
  Eigen::Index row = 0;
  for (const auto& w : plan.metrics) {
    const auto& t = *treated.find_series(w.metric);
    for (int step = w.pre_begin; step < w.pre_end; ++step, ++row) {
      const double inv = 1.0 / scales.at(w.metric, step);
      out.y(row) = t.at(step) * inv;
      for (Eigen::Index j = 0; j < cols; ++j)
        out.X(row, j) =
            donors[pool.donor_index[static_cast<std::size_t>(j)]].find_series(w.metric)->at(step) * inv;
    }
  }
  return out;
}

}  // namespace noteffect
