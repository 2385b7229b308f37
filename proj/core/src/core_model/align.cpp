#include "noteffect/core_model/align.hpp"

#include <algorithm>

#include "noteffect/util/error.hpp"

namespace noteffect {

AlignResult align_series(std::span<const RawObservation> observations, Millis created_at,
                         Millis grid_step) {
  if (observations.empty()) throw DataError("no data");
  AlignResult out;
  out.series.metric = observations.front().metric;

  std::vector<RawObservation> obs(observations.begin(), observations.end());
  if (!std::is_sorted(obs.begin(), obs.end(),
                      [](const auto& a, const auto& b) { return a.observed_at < b.observed_at; })) {
    std::stable_sort(obs.begin(), obs.end(),
                     [](const auto& a, const auto& b) { return a.observed_at < b.observed_at; });
    out.warnings.push_back("observations for " + obs.front().post_id + "/" +
                           std::string(to_string(out.series.metric)) + " were not time-sorted");
  }

  // Keep the last observation per timestamp.
  std::vector<std::pair<Millis, double>> points;
  points.reserve(obs.size());
  for (const auto& o : obs) {
    if (o.observed_at < created_at)
      throw DataError("observation before post creation for " + o.post_id);
    const Millis age = o.observed_at - created_at;
    if (!points.empty() && points.back().first == age) {
      if (points.back().second != o.value)
        out.warnings.push_back("conflicting duplicate observation for " + o.post_id + "/" +
                               std::string(to_string(o.metric)) + " at " +
                               format_iso8601(o.observed_at) + "; kept the last value");
      points.back().second = o.value;
    } else {
      points.emplace_back(age, o.value);
    }
  }

  const auto first = static_cast<int>(ceil_div(points.front().first, grid_step));
  const auto last = static_cast<int>(floor_div(points.back().first, grid_step));
  out.series.first_step = first;
  if (last < first) return out;

  out.series.values.reserve(static_cast<std::size_t>(last - first + 1));
  std::size_t seg = 0;
  for (int step = first; step <= last; ++step) {
    const Millis g = static_cast<Millis>(step) * grid_step;
    while (seg + 1 < points.size() && points[seg + 1].first < g) ++seg;
    const auto& [t0, v0] = points[seg];
    if (t0 == g || seg + 1 == points.size()) {
      out.series.values.push_back(v0);
      continue;
    }
    const auto& [t1, v1] = points[seg + 1];
    if (t1 == g) {
      out.series.values.push_back(v1);
      continue;
    }
    const double frac = static_cast<double>(g - t0) / static_cast<double>(t1 - t0);
    out.series.values.push_back(v0 + (v1 - v0) * frac);
  }
  return out;
}

}  // namespace noteffect
