#include "noteffect/scm/bias_model.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace noteffect {

Eigen::VectorXd bias_features(const PostRecord& post, const FitPlan& plan,
                              const StandardizationScales& scales) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(plan.metrics.size() * kBiasFeatureFractions.size() + 1));
  Eigen::Index k = 0;
  for (const auto& w : plan.metrics) {
    const auto& s = *post.find_series(w.metric);
    const int len = w.pre_end - w.pre_begin;
    for (double frac : kBiasFeatureFractions) {
      const int step = w.pre_begin + static_cast<int>(std::lround(frac * (len - 1)));
      x(k++) = s.at(step) / scales.at(w.metric, step);
    }
  }
  x(k) = std::log1p(std::max(0.0, post.author_follower_count));
  return x;
}

double BiasModel::predict(MetricKind m, int horizon, const Eigen::VectorXd& features) const {
  const auto& b = coefficients.at(m);
  return intercepts.at(m)(horizon) + b.col(horizon).dot(features);
}

BiasModel fit_bias_model(const Eigen::MatrixXd& features,
                         const std::map<MetricKind, Eigen::MatrixXd>& outcomes,
                         const BiasModelOptions& options) {
  BiasModel model;
  const auto n = features.rows();
  const auto f = features.cols();
  model.sample_count = static_cast<std::size_t>(n);
  model.feature_means = n > 0 ? Eigen::VectorXd(features.colwise().mean().transpose())
                              : Eigen::VectorXd::Zero(f);
  auto fallback = [&](BiasModel& m) {
    m.disabled = true;
    m.coefficients.clear();
    m.intercepts.clear();
    for (const auto& [metric, y] : outcomes) {
      m.coefficients[metric] = Eigen::MatrixXd::Zero(f, y.cols());
      m.intercepts[metric] = n > 0 ? Eigen::VectorXd(y.colwise().mean().transpose())
                                   : Eigen::VectorXd::Zero(y.cols());
    }
    return m;
  };
  if (n < 2) return fallback(model);

  const Eigen::MatrixXd zc = features.rowwise() - model.feature_means.transpose();
  Eigen::MatrixXd a = zc.transpose() * zc;
  const double trace = a.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) return fallback(model);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  model.condition_estimate = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (model.condition_estimate > options.max_condition || n < f + 2) {
    model.ridge_used = true;
    model.ridge_lambda = options.ridge_factor * trace / static_cast<double>(f);
    a.diagonal().array() += model.ridge_lambda;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) return fallback(model);

  for (const auto& [metric, y] : outcomes) {
    const Eigen::RowVectorXd ymean = y.colwise().mean();
    const Eigen::MatrixXd beta = ldlt.solve(zc.transpose() * (y.rowwise() - ymean));
    if (!beta.allFinite()) return fallback(model);
    model.coefficients[metric] = beta;
    model.intercepts[metric] = ymean.transpose() - beta.transpose() * model.feature_means;
  }
  return model;
}

BiasModel fit_bias_model(std::span<const PostRecord> donors, const DonorPool& pool,
                         const FitPlan& plan, const StandardizationScales& scales,
                         const BiasModelOptions& options) {
  const auto n = static_cast<Eigen::Index>(pool.size());
  const auto f = static_cast<Eigen::Index>(plan.metrics.size() * kBiasFeatureFractions.size() + 1);
  const int h = plan.horizon_steps + 1;
  Eigen::MatrixXd features(n, f);
  std::map<MetricKind, Eigen::MatrixXd> outcomes;
  for (const auto& w : plan.metrics)
    if (w.outcome) outcomes[w.metric] = Eigen::MatrixXd(n, h);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& donor = donors[pool.donor_index[static_cast<std::size_t>(i)]];
    features.row(i) = bias_features(donor, plan, scales).transpose();
    for (auto& [metric, y] : outcomes) {
      const auto& s = *donor.find_series(metric);
      for (int t = 0; t < h; ++t) y(i, t) = s.at(plan.treatment_step + t);
    }
  }
  return fit_bias_model(features, outcomes, options);
}

}  // namespace noteffect
