#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "noteffect/effects/report.hpp"

namespace noteffect::io {

// One tab-separated file per figure panel: ATT curves, stratified bars,
// effect histograms, positive shares and growth-matched bins. Returns the
// file names written.
std::vector<std::string> write_plot_data(const std::filesystem::path& dir,
                                         const EffectReport& report);

}  // namespace noteffect::io
