#pragma once

#include <vector>

#include <Eigen/Dense>

namespace noteffect {

enum class WeightConstraint {
  simplex,  // w >= 0, sum(w) = 1
  affine,   // sum(w) = 1 only (sensitivity runs)
};

struct SimplexLsOptions {
  // Stop once the duality gap is at most tolerance * objective scale.
  double tolerance = 1e-6;
  int max_iterations = 10000;
  WeightConstraint constraint = WeightConstraint::simplex;
  bool record_trace = false;
};

struct SimplexLsResult {
  Eigen::VectorXd weights;
  double objective = 0.0;       // (1/P) ||X w - y||^2
  double optimality_gap = 0.0;  // upper bound on objective - optimum
  double objective_scale = 0.0;
  int iterations = 0;
  bool converged = false;
  bool low_quality = false;     // gap above 10x tolerance at the iteration cap
  bool singular = false;
  std::vector<double> objective_trace;
};

// Minimizes (1/P) ||X w - y||^2 over the constraint set, P = rows of X.
// Simplex problems are solved by a primal active-set method whose inner
// steps are equality-constrained least-squares solves; when it stalls,
// accelerated projected gradient takes over from the current iterate.
SimplexLsResult solve_simplex_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const SimplexLsOptions& options = {});

// Frank-Wolfe gap g'w - min_j g_j with g the objective gradient at w. For a
// feasible w it bounds the suboptimality from above.
double simplex_duality_gap(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& w);

double simplex_ls_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w);

// Euclidean projection onto {w >= 0, sum(w) = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

}  // namespace noteffect
