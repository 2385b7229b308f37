#include <doctest.h>

#include <random>

#include "../common/oracles.hpp"
#include "helpers.hpp"
#include "noteffect/scm/bias_model.hpp"
#include "noteffect/scm/fit.hpp"
#include "noteffect/scm/scales.hpp"
#include "noteffect/simulator/simulator.hpp"
#include "noteffect/util/stats.hpp"

using namespace noteffect;

namespace {

constexpr int kA = 8;  // treatment step
constexpr int kH = 4;  // horizon steps

PostRecord with_views(std::string id, std::optional<Millis> treat, std::vector<double> v) {
  auto p = test::post(std::move(id), treat);
  p.series[MetricKind::views] = test::series(MetricKind::views, 0, std::move(v));
  return p;
}

std::vector<double> shifted(const std::vector<double>& base, double d) {
  auto v = base;
  for (auto& x : v) x += d;
  return v;
}

StandardizationScales unit_scales() {
  StandardizationScales s;
  s.scale[MetricKind::views] = 1.0;
  return s;
}

const std::vector<MetricKind> kViews{MetricKind::views};

std::vector<double> base_series() { return test::fill(0, kA + kH, [](int k) { return 10.0 * k + 0.5 * k * k; }); }

}  // namespace

TEST_CASE("compute_scales pools treated pre-treatment values") {
  auto p = with_views("t", kGridStep * 2, {0, 2, 100, 100});
  auto s = compute_scales(std::vector<PostRecord>{p}, kViews);
  CHECK(s.scale.at(MetricKind::views) == doctest::Approx(std::sqrt(2.0)));

  auto flat = with_views("t", kGridStep * 3, {5, 5, 5, 9});
  auto f = compute_scales(std::vector<PostRecord>{flat}, kViews);
  CHECK_FALSE(f.has(MetricKind::views));
  CHECK(f.warnings.size() == 1);
}

TEST_CASE("compute_scales matches a two-pass variance oracle on a simulated cohort") {
  sim::SimConfig c;
  c.seed = 3;
  c.graph.user_count = 5000;
  c.treated_count = 30;
  c.donor_count = 0;
  auto cohort = sim::simulate_cohort(c);
  auto s = compute_scales(cohort.cohort.treated, std::vector<MetricKind>(kEngagementMetrics.begin(), kEngagementMetrics.end()));
  for (MetricKind m : kEngagementMetrics) {
    std::vector<double> v;
    for (const auto& p : cohort.cohort.treated) {
      const auto& ser = *p.find_series(m);
      for (int k = std::max(0, ser.first_step); k < *p.treatment_step(); ++k) v.push_back(ser.at(k));
    }
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    CHECK(s.scale.at(m) == doctest::Approx(std::sqrt(ss / static_cast<double>(v.size() - 1))).epsilon(1e-9));
  }
}

TEST_CASE("screen_and_select_donors ranks by standardized distance") {
  const auto base = base_series();
  auto treated = with_views("t", kA * kGridStep, base);
  auto plan = plan_fit(treated, unit_scales(), kViews, kH);
  REQUIRE(plan.metrics.size() == 1);
  CHECK(plan.metrics[0].outcome);
  CHECK(plan.pre_point_count() == static_cast<std::size_t>(kA));

  std::vector<PostRecord> donors{with_views("d1", {}, shifted(base, 0.5)),
                                 with_views("d2", {}, shifted(base, 1.2)),
                                 with_views("d3", {}, shifted(base, -0.9))};
  auto pool = screen_and_select_donors(treated, donors, unit_scales(), plan, 2);
  CHECK(pool.donor_ids == std::vector<std::string>{"d1", "d3"});
  CHECK(pool.distances[0] == doctest::Approx(0.5));
  CHECK(pool.distances[1] == doctest::Approx(0.9));

  auto all = screen_and_select_donors(treated, donors, unit_scales(), plan, 50);
  CHECK(all.size() == 3);

  donors.push_back(with_views("d0", {}, base));
  auto with_twin = screen_and_select_donors(treated, donors, unit_scales(), plan, 1);
  CHECK(with_twin.donor_ids == std::vector<std::string>{"d0"});
  CHECK(with_twin.distances[0] == 0.0);

  // Short donors are screened out; equal distances go to the smaller id.
  auto short_one = with_views("a_short", {}, std::vector<double>(base.begin(), base.begin() + kA + 1));
  auto tie = with_views("a_tie", {}, shifted(base, 0.5));
  donors.push_back(short_one);
  donors.push_back(tie);
  auto p2 = screen_and_select_donors(treated, donors, unit_scales(), plan, 3);
  CHECK(p2.screened_out == 1);
  CHECK(p2.donor_ids == std::vector<std::string>{"d0", "a_tie", "d1"});
}

TEST_CASE("fit_weights attains exact matches") {
  const auto base = base_series();
  auto treated = with_views("t", kA * kGridStep, base);
  auto plan = plan_fit(treated, unit_scales(), kViews, kH);

  std::vector<PostRecord> donors{with_views("a", {}, shifted(base, 3.0)), with_views("b", {}, base),
                                 with_views("c", {}, shifted(base, -4.0))};
  auto pool = screen_and_select_donors(treated, donors, unit_scales(), plan, 10);
  auto w = fit_weights(treated, donors, pool, plan, unit_scales());
  CHECK(w.objective <= 1e-20);
  CHECK(w.donor_ids[0] == "b");
  CHECK(w.weights[0] == doctest::Approx(1.0));

  // Midpoint of two affinely independent donors.
  auto up = test::fill(0, kA + kH, [](int k) { return 20.0 * k; });
  auto down = test::fill(0, kA + kH, [](int k) { return 2.0 * k * k; });
  std::vector<double> mid(up.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (up[i] + down[i]);
  auto t2 = with_views("t2", kA * kGridStep, mid);
  std::vector<PostRecord> d2{with_views("up", {}, up), with_views("down", {}, down),
                             with_views("far", {}, shifted(up, 500.0))};
  auto plan2 = plan_fit(t2, unit_scales(), kViews, kH);
  auto pool2 = screen_and_select_donors(t2, d2, unit_scales(), plan2, 10);
  auto w2 = fit_weights(t2, d2, pool2, plan2, unit_scales());
  CHECK(w2.objective <= 1e-12);
  auto pre = synthetic_series(w2, d2, pool2, MetricKind::views, 0, kA - 1);
  REQUIRE(pre);
  for (int k = 0; k < kA; ++k) CHECK(std::abs((*pre)[static_cast<std::size_t>(k)] - mid[static_cast<std::size_t>(k)]) <= 1e-6);
}

TEST_CASE("synthetic_series weights donor outcomes") {
  const auto base = base_series();
  auto treated = with_views("t", kA * kGridStep, base);
  auto plan = plan_fit(treated, unit_scales(), kViews, kH);
  std::vector<PostRecord> donors{with_views("a", {}, std::vector<double>(base.size(), 10.0)),
                                 with_views("b", {}, std::vector<double>(base.size(), 30.0))};
  auto pool = screen_and_select_donors(treated, donors, unit_scales(), plan, 10);
  SCMWeights w;
  w.donor_ids = pool.donor_ids;
  w.weights = {0.5, 0.5};
  auto s = synthetic_series(w, donors, pool, MetricKind::views, kA, kH);
  REQUIRE(s);
  CHECK((*s)[2] == 20.0);

  w.weights = {1.0, 0.0};
  auto single = synthetic_series(w, donors, pool, MetricKind::views, kA, kH);
  const auto& first = donors[pool.donor_index[0]].series.at(MetricKind::views);
  for (int t = 0; t <= kH; ++t) CHECK((*single)[static_cast<std::size_t>(t)] == first.at(kA + t));
}

TEST_CASE("synthetic_series equals a matrix-product oracle on a simulated cohort") {
  sim::SimConfig c;
  c.seed = 8;
  c.graph.user_count = 5000;
  c.treated_count = 5;
  c.donor_count = 60;
  auto cohort = sim::simulate_cohort(c);
  FitConfig fc;
  fc.metrics = {kEngagementMetrics.begin(), kEngagementMetrics.end()};
  auto scales = compute_scales(cohort.cohort.treated, fc.metrics);
  for (const auto& t : cohort.cohort.treated) {
    auto plan = plan_fit(t, scales, fc.metrics, fc.horizon_steps);
    auto pool = screen_and_select_donors(t, cohort.cohort.donors, scales, plan, 1000);
    auto w = fit_weights(t, cohort.cohort.donors, pool, plan, scales);
    const int a = plan.treatment_step;
    Eigen::MatrixXd Y(fc.horizon_steps + 1, static_cast<Eigen::Index>(pool.size()));
    for (std::size_t j = 0; j < pool.size(); ++j)
      for (int s = 0; s <= fc.horizon_steps; ++s)
        Y(s, static_cast<Eigen::Index>(j)) = cohort.cohort.donors[pool.donor_index[j]].series.at(MetricKind::likes).at(a + s);
    Eigen::VectorXd oracle = Y * Eigen::Map<const Eigen::VectorXd>(w.weights.data(), static_cast<Eigen::Index>(w.weights.size()));
    auto s = synthetic_series(w, cohort.cohort.donors, pool, MetricKind::likes, a, fc.horizon_steps);
    REQUIRE(s);
    for (int k = 0; k <= fc.horizon_steps; ++k)
      CHECK((*s)[static_cast<std::size_t>(k)] == doctest::Approx(oracle(k)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("simplex solver agrees with the projected-gradient oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto in = oracle::random_instance(rng, 30, 60);
    SimplexLsOptions opt;
    opt.tolerance = 1e-10;
    auto r = solve_simplex_ls(in.X, in.y, opt);
    auto ref = oracle::projected_gradient(in.X, in.y, 50000);
    const double f_ref = oracle::objective(in.X, in.y, ref);
    CHECK(r.objective <= f_ref * (1 + 1e-6) + 1e-15);
    CHECK(r.weights.minCoeff() >= 0.0);
    CHECK(std::abs(r.weights.sum() - 1.0) <= 1e-9);
    CHECK(r.objective - f_ref <= r.optimality_gap + 1e-12);
  }
}

TEST_CASE("simplex solver: projection, affine mode and objective trace") {
  Eigen::VectorXd v(3);
  v << 0.2, 0.9, -1.0;
  auto p = project_to_simplex(v);
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p(2) == 0.0);
  CHECK(p(1) - p(0) == doctest::Approx(0.7));

  std::mt19937_64 rng(4);
  auto in = oracle::random_instance(rng, 20, 40);
  SimplexLsOptions opt;
  opt.record_trace = true;
  auto r = solve_simplex_ls(in.X, in.y, opt);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] * (1 + 1e-12) + 1e-15);

  opt.constraint = WeightConstraint::affine;
  auto aff = solve_simplex_ls(in.X, in.y, opt);
  CHECK(std::abs(aff.weights.sum() - 1.0) <= 1e-9);
  CHECK(aff.objective <= r.objective + 1e-12);

  CHECK_THROWS(solve_simplex_ls(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)));
}

TEST_CASE("fit_bias_model recovers an exactly linear outcome") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  const int n = 40, f = 4, h = 3;
  Eigen::MatrixXd X(n, f);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < f; ++j) X(i, j) = n01(rng);
  Eigen::MatrixXd B = Eigen::MatrixXd::Random(f, h);
  Eigen::RowVectorXd c = Eigen::RowVectorXd::Random(h);
  Eigen::MatrixXd Y = (X * B).rowwise() + c;
  auto m = fit_bias_model(X, {{MetricKind::reposts, Y}});
  CHECK_FALSE(m.disabled);
  CHECK_FALSE(m.ridge_used);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < h; ++t)
      CHECK(std::abs(m.predict(MetricKind::reposts, t, X.row(i).transpose()) - Y(i, t)) <= 1e-8);

  // Duplicate features make the normal matrix singular: ridge, finite output.
  Eigen::MatrixXd dup(n, f + 1);
  dup << X, X.col(0);
  auto r = fit_bias_model(dup, {{MetricKind::reposts, Y}});
  CHECK(r.ridge_used);
  CHECK(r.coefficients.at(MetricKind::reposts).allFinite());

  // Constant features leave nothing to fit.
  auto flat = fit_bias_model(Eigen::MatrixXd::Ones(n, 2), {{MetricKind::reposts, Y}});
  CHECK(flat.disabled);
  CHECK(flat.predict(MetricKind::reposts, 1, Eigen::VectorXd::Ones(2)) == doctest::Approx(Y.col(1).mean()));
}

TEST_CASE("fit_bias_model matches a QR least-squares oracle on a simulated pool") {
  sim::SimConfig c;
  c.seed = 9;
  c.graph.user_count = 5000;
  c.treated_count = 3;
  c.donor_count = 200;
  auto cohort = sim::simulate_cohort(c);
  std::vector<MetricKind> metrics{MetricKind::views, MetricKind::reposts};
  auto scales = compute_scales(cohort.cohort.treated, metrics);
  const auto& t = cohort.cohort.treated[0];
  auto plan = plan_fit(t, scales, metrics, 8);
  auto pool = screen_and_select_donors(t, cohort.cohort.donors, scales, plan, 1000);
  auto model = fit_bias_model(cohort.cohort.donors, pool, plan, scales);
  REQUIRE_FALSE(model.disabled);

  Eigen::MatrixXd X(static_cast<Eigen::Index>(pool.size()), static_cast<Eigen::Index>(model.feature_count()));
  for (std::size_t i = 0; i < pool.size(); ++i)
    X.row(static_cast<Eigen::Index>(i)) = bias_features(cohort.cohort.donors[pool.donor_index[i]], plan, scales).transpose();
  // Age-0 values are zero for every donor, so the design is rank deficient
  // and the documented ridge applies: solve the augmented system
  // [Zc; sqrt(lambda) I] b = [yc; 0] by QR instead.
  CHECK(model.ridge_used);
  const Eigen::MatrixXd Zc = X.rowwise() - X.colwise().mean();
  Eigen::MatrixXd aug(Zc.rows() + Zc.cols(), Zc.cols());
  aug << Zc, std::sqrt(model.ridge_lambda) * Eigen::MatrixXd::Identity(Zc.cols(), Zc.cols());
  for (int step : {0, 4, 8}) {
    Eigen::VectorXd y(X.rows());
    for (std::size_t i = 0; i < pool.size(); ++i)
      y(static_cast<Eigen::Index>(i)) = cohort.cohort.donors[pool.donor_index[i]].series.at(MetricKind::reposts).at(plan.treatment_step + step);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(aug.rows());
    rhs.head(y.size()) = y.array() - y.mean();
    const Eigen::VectorXd ref = aug.colPivHouseholderQr().solve(rhs);
    const auto& beta = model.coefficients.at(MetricKind::reposts);
    const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < X.cols(); ++j) CHECK(std::abs(beta(j, step) - ref(j)) <= 1e-6 * scale);
    const double intercept = y.mean() - ref.dot(X.colwise().mean().transpose());
    CHECK(model.intercepts.at(MetricKind::reposts)(step) == doctest::Approx(intercept).epsilon(1e-6).scale(1.0));
  }

  // Full-rank design: plain OLS by QR.
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    if ((X.col(j).array() - X.col(j).mean()).abs().maxCoeff() > 1e-9) cols.push_back(j);
  Eigen::MatrixXd Xf(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) Xf.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  Eigen::MatrixXd Y(X.rows(), 1);
  for (std::size_t i = 0; i < pool.size(); ++i)
    Y(static_cast<Eigen::Index>(i), 0) = cohort.cohort.donors[pool.donor_index[i]].series.at(MetricKind::views).at(plan.treatment_step + 8);
  auto plain = fit_bias_model(Xf, {{MetricKind::views, Y}});
  REQUIRE_FALSE(plain.ridge_used);
  auto ref = oracle::ols_qr(Xf, Y.col(0));
  const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < Xf.cols(); ++j)
    CHECK(std::abs(plain.coefficients.at(MetricKind::views)(j, 0) - ref(j + 1)) <= 1e-6 * scale);
  CHECK(std::abs(plain.intercepts.at(MetricKind::views)(0) - ref(0)) <= 1e-6 * scale);
}

TEST_CASE("bias_corrected_ite") {
  const auto base = base_series();
  auto treated = with_views("t", kA * kGridStep, shifted(base, 1.0));
  auto scales = unit_scales();
  auto plan = plan_fit(treated, scales, kViews, kH);
  std::vector<PostRecord> donors{with_views("a", {}, base), with_views("b", {}, shifted(base, 4.0))};
  auto pool = screen_and_select_donors(treated, donors, scales, plan, 10);
  auto w = fit_weights(treated, donors, pool, plan, scales);

  BiasModel zero;
  const auto f = static_cast<Eigen::Index>(kBiasFeatureFractions.size() + 1);
  zero.coefficients[MetricKind::views] = Eigen::MatrixXd::Zero(f, kH + 1);
  zero.intercepts[MetricKind::views] = Eigen::VectorXd::Constant(kH + 1, 7.0);
  zero.feature_means = Eigen::VectorXd::Zero(f);
  auto a = bias_corrected_ite(treated, donors, pool, plan, scales, w, &zero);
  auto b = bias_corrected_ite(treated, donors, pool, plan, scales, w, nullptr);
  const auto& ia = *a.find(MetricKind::views);
  for (int t = 0; t <= kH; ++t) {
    const auto k = static_cast<std::size_t>(t);
    CHECK(ia.tau[k] == ia.y1[k] - ia.y0hat[k]);
    CHECK(ia.tau[k] == b.find(MetricKind::views)->tau[k]);
    // The weights reproduce the treated series exactly (0.75 a + 0.25 b).
    CHECK(ia.tau[k] == doctest::Approx(0.0).scale(1.0));
  }

  // A treated post equal to its synthetic control on the outcome model: zero effect.
  BiasModel lin = zero;
  lin.coefficients[MetricKind::views].row(0).setConstant(2.0);
  auto c = bias_corrected_ite(treated, donors, pool, plan, scales, w, &lin);
  for (double tau : c.find(MetricKind::views)->tau) CHECK(std::abs(tau) <= 1e-9);
}

TEST_CASE("fit_treated_post reports why a fit failed") {
  const auto base = base_series();
  auto scales = unit_scales();
  FitConfig fc;
  fc.metrics = kViews;
  fc.horizon_steps = kH;
  std::vector<PostRecord> donors{with_views("a", {}, base)};
  auto t = with_views("t", kA * kGridStep, base);
  auto one_donor = fit_treated_post(t, donors, scales, fc);
  CHECK(one_donor.status == FitStatus::infeasible);
  CHECK(one_donor.reason == "fewer than two eligible donors");

  auto untreated = with_views("u", {}, base);
  CHECK(fit_treated_post(untreated, donors, scales, fc).reason == "no treatment time");

  auto short_post = with_views("s", kA * kGridStep, std::vector<double>(base.begin(), base.begin() + kA + 2));
  CHECK(fit_treated_post(short_post, donors, scales, fc).reason == "no outcome metric covers the post window");
}
