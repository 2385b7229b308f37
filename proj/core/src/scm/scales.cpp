#include "noteffect/scm/scales.hpp"

#include <algorithm>

#include "noteffect/util/stats.hpp"

namespace noteffect {

double StandardizationScales::at(MetricKind m, int step) const {
  auto it = per_step.find(m);
  if (it != per_step.end() && step >= 0 && static_cast<std::size_t>(step) < it->second.size() &&
      it->second[static_cast<std::size_t>(step)] > 0.0)
    return it->second[static_cast<std::size_t>(step)];
  return scale.at(m);
}

StandardizationScales compute_scales(std::span<const PostRecord> treated,
                                     std::span<const MetricKind> metrics,
                                     const ScaleOptions& options) {
  StandardizationScales out;
  for (MetricKind m : metrics) {
    std::vector<double> pooled;
    std::vector<std::vector<double>> by_step;
    for (const auto& post : treated) {
      const auto a = post.treatment_step();
      const auto* s = post.find_series(m);
      if (!a || !s) continue;
      const int end = std::min(*a - 1, s->last_step());
      for (int step = std::max(s->first_step, 0); step <= end; ++step) {
        pooled.push_back(s->at(step));
        if (options.per_age) {
          if (by_step.size() <= static_cast<std::size_t>(step)) by_step.resize(step + 1);
          by_step[static_cast<std::size_t>(step)].push_back(s->at(step));
        }
      }
    }
    const double sd = stats::sample_sd(pooled);
    if (pooled.size() < 2 || !(sd > 0.0)) {
      out.warnings.push_back(std::string(to_string(m)) +
                             ": zero variance or too few treated values; excluded from matching");
      continue;
    }
    out.scale[m] = sd;
    if (options.per_age) {
      std::vector<double> steps(by_step.size(), 0.0);
      for (std::size_t k = 0; k < by_step.size(); ++k)
        if (by_step[k].size() >= 2) steps[k] = stats::sample_sd(by_step[k]);
      out.per_step[m] = std::move(steps);
    }
  }
  return out;
}

}  // namespace noteffect
