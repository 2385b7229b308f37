#pragma once

// Reference implementations shared by the unit and acceptance tests. They are
// deliberately naive and independent of the library code they check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <vector>

namespace oracle {

// Long-horizon projected gradient on the simplex with a fixed 1/L step and
// sort-based projection.
inline Eigen::VectorXd simplex_projection(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.rbegin(), u.rend());
  double css = 0, theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    double t = (css - 1) / static_cast<double>(i + 1);
    if (u[i] > t) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

inline double objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  return (X * w - y).squaredNorm() / static_cast<double>(X.rows());
}

inline Eigen::VectorXd projected_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          int iterations = 200000) {
  const double P = static_cast<double>(X.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  const double L = 2.0 / P * svd.singularValues()(0) * svd.singularValues()(0);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(X.cols(), 1.0 / static_cast<double>(X.cols()));
  Eigen::VectorXd z = w, prev = w;
  double t = 1;
  const Eigen::MatrixXd G = X.transpose() * X;
  const Eigen::VectorXd b = X.transpose() * y;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd grad = 2.0 / P * (G * z - b);
    prev = w;
    w = simplex_projection(z - grad / L);
    double tn = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    z = w + ((t - 1) / tn) * (w - prev);
    t = tn;
    if ((it % 1000) == 999 && (w - prev).norm() < 1e-15) break;
  }
  return w;
}

// Random instance in the shape of a synthetic-control fit: smooth donor
// trajectories and a treated series near their hull.
struct Instance {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

inline Instance random_instance(std::mt19937_64& rng, int donors, int points) {
  std::normal_distribution<double> n01;
  Instance in{Eigen::MatrixXd(points, donors), Eigen::VectorXd(points)};
  for (int j = 0; j < donors; ++j) {
    double level = 0, slope = std::abs(n01(rng));
    for (int i = 0; i < points; ++i) {
      level += slope * 0.1 + 0.05 * n01(rng);
      in.X(i, j) = level;
    }
  }
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(donors);
  for (int k = 0; k < 3; ++k) mix(static_cast<Eigen::Index>(rng() % donors)) += 1.0 / 3;
  in.y = in.X * mix;
  for (int i = 0; i < points; ++i) in.y(i) += 0.3 * n01(rng);
  return in;
}

// Parent array of a random recursive tree; parent[0] is unused.
inline std::vector<std::size_t> random_tree(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> parent(n, 0);
  const int style = static_cast<int>(rng() % 3);
  for (std::size_t v = 1; v < n; ++v) {
    if (style == 0) parent[v] = rng() % v;                       // uniform attachment
    else if (style == 1) parent[v] = v - 1 - (rng() % std::min<std::size_t>(v, 3));  // path-like
    else parent[v] = (rng() % 4 == 0) ? rng() % v : 0;           // star-like
  }
  return parent;
}

// Mean pairwise distance by BFS from every node.
inline double mean_distance_bfs(const std::vector<std::size_t>& parent) {
  const std::size_t n = parent.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 1; v < n; ++v) {
    adj[v].push_back(parent[v]);
    adj[parent[v]].push_back(v);
  }
  double total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<long> d(n, -1);
    std::deque<std::size_t> q{s};
    d[s] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto w : adj[u])
        if (d[w] < 0) {
          d[w] = d[u] + 1;
          q.push_back(w);
        }
    }
    for (std::size_t t = s + 1; t < n; ++t) total += static_cast<double>(d[t]);
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

inline int max_depth(const std::vector<std::size_t>& parent) {
  std::vector<int> d(parent.size(), 0);
  int m = 0;
  for (std::size_t v = 1; v < parent.size(); ++v) m = std::max(m, d[v] = d[parent[v]] + 1);
  return m;
}

inline std::size_t max_breadth(const std::vector<std::size_t>& parent) {
  std::vector<int> d(parent.size(), 0);
  std::vector<std::size_t> count(parent.size() + 1, 0);
  std::size_t m = 0;
  for (std::size_t v = 1; v < parent.size(); ++v) {
    d[v] = d[parent[v]] + 1;
    m = std::max(m, ++count[static_cast<std::size_t>(d[v])]);
  }
  return m;
}

// Ordinary least squares with intercept via column-pivoted Householder QR.
// Returns [intercept, coefficients...].
inline Eigen::VectorXd ols_qr(const Eigen::MatrixXd& features, const Eigen::VectorXd& y) {
  Eigen::MatrixXd A(features.rows(), features.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(features.cols()) = features;
  return A.colPivHouseholderQr().solve(y);
}

}  // namespace oracle
