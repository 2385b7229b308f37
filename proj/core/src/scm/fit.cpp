#include "noteffect/scm/fit.hpp"

#include <algorithm>
#include <numeric>

#include "noteffect/util/error.hpp"
#include "noteffect/util/parallel.hpp"

namespace noteffect {

SCMWeights fit_weights(const PostRecord& treated, std::span<const PostRecord> donors,
                       const DonorPool& pool, const FitPlan& plan,
                       const StandardizationScales& scales, const SimplexLsOptions& options) {
  if (!pool.feasible()) throw InfeasibleError("fewer than two eligible donors");
  if (plan.pre_point_count() == 0) throw InfeasibleError("no pre-treatment points");
  const auto pre = build_pre_matrix(treated, donors, pool, plan, scales);
  const auto res = solve_simplex_ls(pre.X, pre.y, options);
  if (res.singular || !res.weights.allFinite()) throw InfeasibleError("singular weight problem");
  SCMWeights out;
  out.donor_ids = pool.donor_ids;
  out.weights.assign(res.weights.data(), res.weights.data() + res.weights.size());
  out.objective = res.objective;
  out.optimality_gap = res.optimality_gap;
  out.objective_scale = res.objective_scale;
  out.iterations = res.iterations;
  out.low_quality = res.low_quality;
  return out;
}

std::optional<std::vector<double>> synthetic_series(const SCMWeights& weights,
                                                    std::span<const PostRecord> donors,
                                                    const DonorPool& pool, MetricKind metric,
                                                    int treatment_step, int horizon_steps) {
  std::vector<double> out(static_cast<std::size_t>(horizon_steps + 1), 0.0);
  for (std::size_t j = 0; j < weights.weights.size(); ++j) {
    const double w = weights.weights[j];
    if (w == 0.0) continue;
    const auto* s = donors[pool.donor_index[j]].find_series(metric);
    if (!s || !s->covers(treatment_step, treatment_step + horizon_steps)) return std::nullopt;
    for (int t = 0; t <= horizon_steps; ++t)
      out[static_cast<std::size_t>(t)] += w * s->at(treatment_step + t);
  }
  return out;
}

const MetricITE* ITESeries::find(MetricKind m) const {
  auto it = metrics.find(m);
  return it == metrics.end() ? nullptr : &it->second;
}

ITESeries bias_corrected_ite(const PostRecord& treated, std::span<const PostRecord> donors,
                             const DonorPool& pool, const FitPlan& plan,
                             const StandardizationScales& scales, const SCMWeights& weights,
                             const BiasModel* bias_model) {
  ITESeries out;
  out.treated_id = treated.post_id;
  out.treatment_step = plan.treatment_step;
  const bool correct = bias_model && !bias_model->disabled;
  Eigen::VectorXd gap;
  if (correct) {
    gap = bias_features(treated, plan, scales);
    for (std::size_t j = 0; j < weights.weights.size(); ++j)
      if (weights.weights[j] != 0.0)
        gap -= weights.weights[j] * bias_features(donors[pool.donor_index[j]], plan, scales);
  }
  const int a = plan.treatment_step;
  const int h = plan.horizon_steps;
  for (const auto& w : plan.metrics) {
    if (!w.outcome) continue;
    auto y0 = synthetic_series(weights, donors, pool, w.metric, a, h);
    if (!y0) continue;
    MetricITE ite;
    ite.metric = w.metric;
    ite.y0hat = std::move(*y0);
    const auto& s = *treated.find_series(w.metric);
    ite.y1.resize(ite.y0hat.size());
    ite.tau.resize(ite.y0hat.size());
    const Eigen::MatrixXd* beta = nullptr;
    if (correct) {
      auto it = bias_model->coefficients.find(w.metric);
      if (it != bias_model->coefficients.end()) beta = &it->second;
    }
    for (int t = 0; t <= h; ++t) {
      const auto k = static_cast<std::size_t>(t);
      ite.y1[k] = s.at(a + t);
      ite.tau[k] = ite.y1[k] - ite.y0hat[k];
      if (beta) ite.tau[k] -= beta->col(t).dot(gap);
    }
    out.metrics.emplace(w.metric, std::move(ite));
  }
  return out;
}

std::size_t FitSet::feasible_count() const {
  return static_cast<std::size_t>(std::count_if(
      fits.begin(), fits.end(), [](const PostFit& f) { return f.status == FitStatus::ok; }));
}

std::vector<ITESeries> FitSet::ites() const {
  std::vector<ITESeries> out;
  for (const auto& f : fits)
    if (f.status == FitStatus::ok) out.push_back(f.ite);
  return out;
}

PostFit fit_treated_post(const PostRecord& treated, std::span<const PostRecord> donors,
                         const StandardizationScales& scales, const FitConfig& config) {
  PostFit fit;
  fit.treated_id = treated.post_id;
  auto fail = [&](std::string reason) {
    fit.status = FitStatus::infeasible;
    fit.reason = std::move(reason);
    return fit;
  };
  if (!treated.treatment_step()) return fail("no treatment time");
  fit.plan = plan_fit(treated, scales, config.metrics, config.horizon_steps);
  if (fit.plan.metrics.empty()) return fail("no matchable pre-treatment metrics");
  if (std::none_of(fit.plan.metrics.begin(), fit.plan.metrics.end(),
                   [](const MetricWindow& w) { return w.outcome; }))
    return fail("no outcome metric covers the post window");
  const auto pool =
      screen_and_select_donors(treated, donors, scales, fit.plan, config.donor_pool_size);
  fit.screened_out = pool.screened_out;
  fit.pool_size = pool.size();
  if (!pool.feasible()) return fail("fewer than two eligible donors");
  try {
    fit.weights = fit_weights(treated, donors, pool, fit.plan, scales, config.solver);
  } catch (const InfeasibleError& e) {
    return fail(e.what());
  }
  const BiasModel* model = nullptr;
  if (config.bias_correction) {
    fit.bias_model = fit_bias_model(donors, pool, fit.plan, scales, config.bias);
    fit.bias_disabled = fit.bias_model.disabled;
    model = &fit.bias_model;
  }
  fit.ite = bias_corrected_ite(treated, donors, pool, fit.plan, scales, fit.weights, model);
  if (fit.ite.metrics.empty()) return fail("no synthetic outcome available");
  return fit;
}

FitSet fit_cohort(const Cohort& cohort, const FitConfig& config, unsigned workers) {
  FitSet set;
  set.scales = compute_scales(cohort.treated, config.metrics, config.scales);
  std::vector<std::size_t> order(cohort.treated.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cohort.treated[a].post_id < cohort.treated[b].post_id;
  });
  set.fits.resize(order.size());
  parallel_for(order.size(), workers, [&](std::size_t i) {
    set.fits[i] = fit_treated_post(cohort.treated[order[i]], cohort.donors, set.scales, config);
  });
  return set;
}

}  // namespace noteffect
