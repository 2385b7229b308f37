#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "noteffect/scm/donors.hpp"

namespace noteffect {

// Pre-window positions sampled per matched metric, as fractions of the window.
inline constexpr std::array<double, 5> kBiasFeatureFractions = {0.0, 0.25, 0.5, 0.75, 1.0};

// Standardized values at the sampled pre-window positions of every plan
// metric, followed by log1p(author follower count).
Eigen::VectorXd bias_features(const PostRecord& post, const FitPlan& plan,
                              const StandardizationScales& scales);

struct BiasModelOptions {
  // Ridge engages above this condition estimate of the centered normal matrix.
  double max_condition = 1e10;
  double ridge_factor = 1e-6;
};

// Linear outcome model per (metric, horizon step) fitted on the pool donors.
// coefficients[m] is features x (horizon_steps + 1); intercepts[m] has one
// entry per horizon step.
struct BiasModel {
  std::map<MetricKind, Eigen::MatrixXd> coefficients;
  std::map<MetricKind, Eigen::VectorXd> intercepts;
  Eigen::VectorXd feature_means;
  double ridge_lambda = 0.0;
  double condition_estimate = 0.0;
  bool ridge_used = false;
  bool disabled = false;  // degenerate design; corrections fall back to zero
  std::size_t sample_count = 0;

  std::size_t feature_count() const { return static_cast<std::size_t>(feature_means.size()); }
  // Prediction for one feature vector at one horizon.
  double predict(MetricKind m, int horizon, const Eigen::VectorXd& features) const;
};

// Donor feature rows and outcome matrices are taken from the pool. Outcomes
// are raw (unstandardized) values at steps treatment_step + t.
BiasModel fit_bias_model(std::span<const PostRecord> donors, const DonorPool& pool,
                         const FitPlan& plan, const StandardizationScales& scales,
                         const BiasModelOptions& options = {});

// Same fit from explicit matrices: features is n x F, outcomes[m] is n x H.
BiasModel fit_bias_model(const Eigen::MatrixXd& features,
                         const std::map<MetricKind, Eigen::MatrixXd>& outcomes,
                         const BiasModelOptions& options = {});

}  // namespace noteffect
