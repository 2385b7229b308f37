#pragma once

#include <filesystem>

#include "noteffect/simulator/simulator.hpp"

namespace noteffect::io {

// Writes a simulated cohort in the ingest file formats (posts.csv,
// observations.csv, note_events.csv, labels.csv, reposts.csv, follows.csv)
// plus ground_truth.json.
void write_cohort_files(const std::filesystem::path& dir, const sim::SimCohort& cohort);

}  // namespace noteffect::io
