#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noteffect/scm/bias_model.hpp"
#include "noteffect/scm/simplex_ls.hpp"

namespace noteffect {

struct SCMWeights {
  std::vector<std::string> donor_ids;  // pool order
  std::vector<double> weights;         // aligned with donor_ids
  double objective = 0.0;
  double optimality_gap = 0.0;
  double objective_scale = 0.0;
  int iterations = 0;
  bool low_quality = false;
};

// Simplex-weighted fit of the treated pre-treatment history. Throws
// InfeasibleError when the pool is too small or the problem is singular.
SCMWeights fit_weights(const PostRecord& treated, std::span<const PostRecord> donors,
                       const DonorPool& pool, const FitPlan& plan,
                       const StandardizationScales& scales,
                       const SimplexLsOptions& options = {});

// Weighted donor values at steps treatment_step + t, t = 0..horizon. Absent
// when some weighted donor lacks the metric on that window.
std::optional<std::vector<double>> synthetic_series(const SCMWeights& weights,
                                                    std::span<const PostRecord> donors,
                                                    const DonorPool& pool,
                                                    MetricKind metric, int treatment_step,
                                                    int horizon_steps);

struct MetricITE {
  MetricKind metric = MetricKind::views;
  std::vector<double> y1;     // observed treated values
  std::vector<double> y0hat;  // synthetic control values
  std::vector<double> tau;    // bias-corrected effects

  // Counterfactual implied by the corrected effect: y1 - tau.
  double counterfactual(std::size_t t) const { return y1[t] - tau[t]; }
  friend bool operator==(const MetricITE&, const MetricITE&) = default;
};

struct ITESeries {
  std::string treated_id;
  int treatment_step = 0;
  std::map<MetricKind, MetricITE> metrics;

  const MetricITE* find(MetricKind m) const;
  friend bool operator==(const ITESeries&, const ITESeries&) = default;
};

// tau_t = [Y1_t - mu_t(x_i)] - sum_j w_j [Y_jt - mu_t(x_j)]. A null model
// (or a disabled one) yields tau = Y1 - Y0hat exactly.
ITESeries bias_corrected_ite(const PostRecord& treated, std::span<const PostRecord> donors,
                             const DonorPool& pool, const FitPlan& plan,
                             const StandardizationScales& scales, const SCMWeights& weights,
                             const BiasModel* bias_model);

struct FitConfig {
  std::size_t donor_pool_size = 1000;
  int horizon_steps = 192;  // 48 hours on the 15-minute grid
  SimplexLsOptions solver;
  bool bias_correction = true;
  ScaleOptions scales;
  std::vector<MetricKind> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  BiasModelOptions bias;
};

enum class FitStatus { ok, infeasible };

struct PostFit {
  std::string treated_id;
  FitStatus status = FitStatus::ok;
  std::string reason;
  FitPlan plan;
  std::size_t screened_out = 0;
  std::size_t pool_size = 0;  // donors offered to the weight fit
  SCMWeights weights;
  BiasModel bias_model;
  bool bias_disabled = false;
  ITESeries ite;
};

struct FitSet {
  StandardizationScales scales;
  std::vector<PostFit> fits;  // sorted by treated id

  std::size_t feasible_count() const;
  std::vector<ITESeries> ites() const;
};

// Full per-post procedure: plan, screen, fit weights, fit the bias model and
// compute effects.
PostFit fit_treated_post(const PostRecord& treated, std::span<const PostRecord> donors,
                         const StandardizationScales& scales, const FitConfig& config);

// Fits every treated post on `workers` threads. Output order and content do
// not depend on the worker count.
FitSet fit_cohort(const Cohort& cohort, const FitConfig& config, unsigned workers = 1);

}  // namespace noteffect
