#pragma once

#include <string>
#include <utility>
#include <vector>

#include "noteffect/io/archive.hpp"
#include "noteffect/pipeline/config.hpp"
#include "noteffect/simulator/simulator.hpp"

namespace noteffect::pipeline {

struct FilterReport {
  std::size_t treated_before = 0;
  std::size_t donors_before = 0;
  std::size_t treated_after = 0;
  std::size_t donors_after = 0;
  // Flagged posts with the evidence per metric.
  std::vector<std::pair<std::string, std::vector<std::pair<MetricKind, AnomalyReport>>>> anomalies;
  std::vector<Exclusion> exclusions;
  std::vector<std::string> warnings;
};

// Drops posts with spike-dip artifacts in any cumulative metric, then
// treated posts without enough coverage around treatment.
FilterReport filter_stage(io::Archive& archive, const PipelineConfig& config);

struct CascadeReport {
  std::size_t posts = 0;
  std::size_t events = 0;
  std::size_t repost_series_replaced = 0;
};

// For every post in the reposts data: cascade depth, breadth and structural
// virality series, and exact repost counts that replace the observed ones.
// The grid runs to the end of the post's observed coverage.
CascadeReport cascade_stage(io::Archive& archive, unsigned workers);

FitSet fit_stage(const io::Archive& archive, const PipelineConfig& config);
EffectReport effects_stage(const io::Archive& archive, const FitSet& fits,
                           const PipelineConfig& config);
PlaceboReport placebo_stage(const io::Archive& archive, const PipelineConfig& config);

// The archive a simulated cohort would produce through its files.
io::Archive archive_from_sim(const sim::SimCohort& cohort);

struct PipelineResult {
  FilterReport filter;
  CascadeReport cascades;
  FitSet fits;
  EffectReport effects;
};

// filter -> cascades -> fit -> effects on a copy of the archive.
PipelineResult run_pipeline(io::Archive archive, const PipelineConfig& config);

std::string filter_report_to_json(const FilterReport& report);

}  // namespace noteffect::pipeline
