#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "noteffect/effects/report.hpp"
#include "noteffect/placebo/placebo.hpp"
#include "noteffect/simulator/simulator.hpp"

namespace noteffect::io {

inline constexpr const char* kFitsSchema = "noteffect.fits/1";
inline constexpr const char* kEffectsSchema = "noteffect.effects/1";
inline constexpr const char* kPlaceboSchema = "noteffect.placebo/1";
inline constexpr const char* kTruthSchema = "noteffect.ground_truth/1";
inline constexpr const char* kRecoverySchema = "noteffect.recovery/1";

// Documents are pretty-printed JSON with a "schema" field. Readers check it
// and throw DataError on a mismatch.
std::string fits_to_json(const FitSet& fits, bool include_bias_coefficients = false);
// Restores everything but the bias coefficients; zero weights are not
// stored, so donor_ids holds only the donors that received weight.
FitSet fits_from_json(std::string_view text);

std::string effects_to_json(const EffectReport& report);
EffectReport effects_from_json(std::string_view text);

std::string placebo_to_json(const PlaceboReport& report);

std::string truth_to_json(const sim::GroundTruth& truth);
sim::GroundTruth truth_from_json(std::string_view text);

// Partial documents are fine: missing fields keep their defaults.
sim::SimConfig sim_config_from_json(std::string_view text);
std::string sim_config_to_json(const sim::SimConfig& config);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace noteffect::io
