#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noteffect/effects/report.hpp"
#include "noteffect/simulator/simulator.hpp"

namespace noteffect::pipeline {

struct MetricRecovery {
  MetricKind metric = MetricKind::views;
  std::size_t n_estimate = 0;
  std::size_t n_truth = 0;
  std::optional<ATTEntry> estimate;  // at the horizon
  std::optional<double> true_att;
  std::optional<double> true_se;
  std::optional<double> abs_error;
  std::optional<double> rel_error;
  std::optional<bool> ci_covers_truth;
  // Paired arms share random numbers, so a null effect is exactly zero.
  bool true_effect_nonzero = false;
  std::optional<bool> sign_correct;
  std::optional<double> est_growth;
  std::optional<double> true_growth;
  std::optional<double> growth_error_pp;
  std::optional<double> est_total;
  std::optional<double> true_total;
  std::optional<double> total_error_pp;
};

struct RecoveryReport {
  int horizon_steps = 0;
  std::vector<MetricRecovery> metrics;

  const MetricRecovery* find(MetricKind m) const;
};

// Compares estimates with the truth over the same posts per metric.
RecoveryReport validate_recovery(const EffectReport& report, const sim::GroundTruth& truth);

std::string recovery_to_json(const RecoveryReport& report);

}  // namespace noteffect::pipeline
