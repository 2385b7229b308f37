#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "noteffect/scm/scales.hpp"

namespace noteffect {

// One metric's part in a fit. Pre-window steps are [pre_begin, pre_end);
// pre_end is the treatment step. Outcome metrics also need the post window
// [pre_end, pre_end + horizon_steps].
struct MetricWindow {
  MetricKind metric = MetricKind::views;
  int pre_begin = 0;
  int pre_end = 0;
  bool outcome = false;
};

struct FitPlan {
  std::string treated_id;
  int treatment_step = 0;
  int horizon_steps = 192;
  std::vector<MetricWindow> metrics;

  std::size_t pre_point_count() const;
  bool has_outcome(MetricKind m) const;
};

// Metrics matched for this treated post: those with pre-treatment coverage
// and a positive scale. Outcome metrics that also cover the post window are
// outcomes of this fit.
FitPlan plan_fit(const PostRecord& treated, const StandardizationScales& scales,
                 std::span<const MetricKind> metrics, int horizon_steps);

// Candidate donors for one treated post, nearest first.
struct DonorPool {
  std::string treated_id;
  std::vector<std::size_t> donor_index;  // into the donor span given to selection
  std::vector<std::string> donor_ids;
  std::vector<double> distances;
  std::size_t screened_out = 0;

  std::size_t size() const { return donor_ids.size(); }
  bool feasible() const { return donor_ids.size() >= 2; }
};

// True when the donor covers every (metric, step) the plan needs.
bool donor_covers(const PostRecord& donor, const FitPlan& plan);

// Root-mean-square difference of standardized pre-treatment values.
double standardized_distance(const PostRecord& treated, const PostRecord& donor,
                             const FitPlan& plan, const StandardizationScales& scales);

// Screens donors by coverage and keeps the k nearest; ties go to the smaller
// donor id.
DonorPool screen_and_select_donors(const PostRecord& treated,
                                   std::span<const PostRecord> donors,
                                   const StandardizationScales& scales,
                                   const FitPlan& plan, std::size_t k = 1000);

// Standardized pre-treatment values: y for the treated post and one column of
// X per pool donor, rows ordered by (plan metric, step).
struct PreMatrix {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

PreMatrix build_pre_matrix(const PostRecord& treated, std::span<const PostRecord> donors,
                           const DonorPool& pool, const FitPlan& plan,
                           const StandardizationScales& scales);

}  // namespace noteffect
