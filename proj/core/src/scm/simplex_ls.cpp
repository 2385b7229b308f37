#include "noteffect/scm/simplex_ls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace noteffect {

namespace {

Eigen::VectorXd gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& w) {
  const double scale = 2.0 / static_cast<double>(X.rows());
  return scale * (X.transpose() * (X * w - y));
}

double gap_from_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& w) {
  return std::max(0.0, g.dot(w) - g.minCoeff());
}

// min ||X_S z - y||^2 subject to sum(z) = 1, by eliminating the first
// passive coordinate and solving a rank-revealing least-squares problem.
Eigen::VectorXd equality_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const std::vector<Eigen::Index>& passive) {
  const auto k = static_cast<Eigen::Index>(passive.size());
  Eigen::VectorXd z(k);
  if (k == 1) {
    z(0) = 1.0;
    return z;
  }
  const auto ref = X.col(passive[0]);
  Eigen::MatrixXd D(X.rows(), k - 1);
  for (Eigen::Index i = 1; i < k; ++i) D.col(i - 1) = X.col(passive[i]) - ref;
  const Eigen::VectorXd b = y - ref;
  const Eigen::VectorXd u = D.colPivHouseholderQr().solve(b);
  z(0) = 1.0 - u.sum();
  z.tail(k - 1) = u;
  return z;
}

double max_singular_value_sq(const Eigen::MatrixXd& X) {
  // Power iteration on X'X; padded upward since it approaches from below.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(X.cols()) / std::sqrt(static_cast<double>(X.cols()));
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd u = X.transpose() * (X * v);
    const double norm = u.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(u);
    v = u / norm;
    if (std::abs(next - lambda) <= 1e-10 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::min(lambda * 1.05, X.squaredNorm());
}

// Monotone accelerated projected gradient from a feasible start.
void projected_gradient_polish(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const SimplexLsOptions& options, double target_gap,
                               SimplexLsResult& r) {
  const double P = static_cast<double>(X.rows());
  const double L = 2.0 / P * max_singular_value_sq(X);
  if (L <= 0.0) return;
  Eigen::VectorXd w = r.weights, extrap = w, prev = w;
  double f = r.objective;
  double momentum = 1.0;
  for (; r.iterations < options.max_iterations; ++r.iterations) {
    const Eigen::VectorXd g = gradient(X, y, extrap);
    Eigen::VectorXd cand = project_to_simplex(extrap - g / L);
    const double fc = simplex_ls_objective(X, y, cand);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    prev = w;
    if (fc <= f) {
      w = cand;
      f = fc;
      extrap = w + ((momentum - 1.0) / next_momentum) * (w - prev);
    } else {
      // Restart momentum from the last accepted point.
      extrap = w;
      momentum = 1.0;
      continue;
    }
    momentum = next_momentum;
    if (options.record_trace) r.objective_trace.push_back(f);
    if ((r.iterations & 15) == 0 && gap_from_gradient(gradient(X, y, w), w) <= target_gap) {
      ++r.iterations;
      break;
    }
  }
  r.weights = w;
  r.objective = f;
}

}  // namespace

double simplex_ls_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w) {
  return (X * w - y).squaredNorm() / static_cast<double>(X.rows());
}

double simplex_duality_gap(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& w) {
  return gap_from_gradient(gradient(X, y, w), w);
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

SimplexLsResult solve_simplex_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const SimplexLsOptions& options) {
  if (X.cols() == 0 || X.rows() == 0 || X.rows() != y.size())
    throw std::invalid_argument("solve_simplex_ls: empty or mismatched problem");
  const Eigen::Index J = X.cols();
  const double P = static_cast<double>(X.rows());
  SimplexLsResult r;
  const double y_scale = y.squaredNorm() / P;

  if (options.constraint == WeightConstraint::affine) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(J));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    r.weights = equality_ls(X, y, all);
    r.objective = simplex_ls_objective(X, y, r.weights);
    const Eigen::VectorXd g = gradient(X, y, r.weights);
    // KKT residual on the affine set: spread of the gradient.
    r.optimality_gap = g.maxCoeff() - g.minCoeff();
    r.objective_scale = std::max({r.objective, 1e-6 * y_scale, std::numeric_limits<double>::min()});
    r.converged = std::isfinite(r.objective);
    r.singular = !r.converged;
    r.iterations = 1;
    return r;
  }

  // Start at the single nearest donor.
  Eigen::Index start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < J; ++j) {
    const double d = (X.col(j) - y).squaredNorm();
    if (d < best) {
      best = d;
      start = j;
    }
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(J);
  w(start) = 1.0;
  std::vector<Eigen::Index> passive{start};
  std::vector<char> in_passive(static_cast<std::size_t>(J), 0);
  in_passive[static_cast<std::size_t>(start)] = 1;
  double f = simplex_ls_objective(X, y, w);
  if (options.record_trace) r.objective_trace.push_back(f);

  bool stalled = false;
  bool optimal = false;
  while (r.iterations < options.max_iterations) {
    ++r.iterations;
    const Eigen::VectorXd g = gradient(X, y, w);
    const double level = g.dot(w);
    const double slack = 1e-11 * std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index entering = -1;
    double most_negative = -slack;
    for (Eigen::Index j = 0; j < J; ++j) {
      if (in_passive[static_cast<std::size_t>(j)]) continue;
      const double reduced = g(j) - level;
      if (reduced < most_negative) {
        most_negative = reduced;
        entering = j;
      }
    }
    if (entering < 0) {
      optimal = true;
      break;
    }
    passive.push_back(entering);
    in_passive[static_cast<std::size_t>(entering)] = 1;

    for (int inner = 0;; ++inner) {
      const Eigen::VectorXd z = equality_ls(X, y, passive);
      if (!z.allFinite()) {
        stalled = true;
        break;
      }
      const double floor = 1e-14;
      bool positive = true;
      for (Eigen::Index i = 0; i < z.size(); ++i) positive = positive && z(i) > floor;
      if (positive) {
        Eigen::VectorXd next = Eigen::VectorXd::Zero(J);
        for (std::size_t i = 0; i < passive.size(); ++i) next(passive[i]) = z(static_cast<Eigen::Index>(i));
        w = next;
        f = simplex_ls_objective(X, y, w);
        break;
      }
      // Step toward z until the first passive weight reaches zero.
      double alpha = 1.0;
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const double zi = z(static_cast<Eigen::Index>(i));
        if (zi > floor) continue;
        const double wi = w(passive[i]);
        const double a = wi - zi > 0.0 ? wi / (wi - zi) : 0.0;
        alpha = std::min(alpha, a);
      }
      Eigen::VectorXd next = w;
      for (std::size_t i = 0; i < passive.size(); ++i)
        next(passive[i]) += alpha * (z(static_cast<Eigen::Index>(i)) - w(passive[i]));
      std::vector<Eigen::Index> kept;
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const Eigen::Index j = passive[i];
        if (next(j) <= 1e-14) {
          next(j) = 0.0;
          in_passive[static_cast<std::size_t>(j)] = 0;
        } else {
          kept.push_back(j);
        }
      }
      if (kept.empty() || (!in_passive[static_cast<std::size_t>(entering)] && alpha == 0.0)) {
        // The entering column was rejected at once: numerically degenerate.
        stalled = true;
        for (std::size_t i = 0; i < passive.size(); ++i) in_passive[static_cast<std::size_t>(passive[i])] = 0;
        passive.clear();
        for (Eigen::Index j = 0; j < J; ++j)
          if (w(j) > 0.0) {
            passive.push_back(j);
            in_passive[static_cast<std::size_t>(j)] = 1;
          }
        break;
      }
      next /= next.sum();
      w = next;
      f = simplex_ls_objective(X, y, w);
      passive = std::move(kept);
      if (options.record_trace) r.objective_trace.push_back(f);
      if (inner > 4 * J) {
        stalled = true;
        break;
      }
    }
    if (options.record_trace) r.objective_trace.push_back(f);
    if (stalled) break;
  }

  r.weights = w;
  r.objective = f;
  r.objective_scale = std::max({f, 1e-6 * y_scale, std::numeric_limits<double>::min()});
  double gap = simplex_duality_gap(X, y, w);
  const double target = options.tolerance * r.objective_scale;
  if ((!optimal || stalled) && gap > target) {
    projected_gradient_polish(X, y, options, target, r);
    r.objective_scale = std::max({r.objective, 1e-6 * y_scale, std::numeric_limits<double>::min()});
    gap = simplex_duality_gap(X, y, r.weights);
  }
  for (Eigen::Index j = 0; j < J; ++j)
    if (r.weights(j) < 0.0) r.weights(j) = 0.0;
  r.weights /= r.weights.sum();
  r.objective = simplex_ls_objective(X, y, r.weights);
  r.optimality_gap = simplex_duality_gap(X, y, r.weights);
  r.converged = r.optimality_gap <= options.tolerance * r.objective_scale;
  r.low_quality = r.optimality_gap > 10.0 * options.tolerance * r.objective_scale;
  r.singular = !std::isfinite(r.objective);
  return r;
}

}  // namespace noteffect
