#include "noteffect/core_model/post.hpp"

#include <unordered_set>

#include "noteffect/util/error.hpp"

namespace noteffect {

std::optional<int> PostRecord::treatment_step() const {
  if (!treatment_time) return std::nullopt;
  return static_cast<int>(floor_div(*treatment_time - created_at, kGridStep));
}

const EngagementSeries* PostRecord::find_series(MetricKind m) const {
  auto it = series.find(m);
  if (it == series.end() || it->second.empty()) return nullptr;
  return &it->second;
}

std::optional<std::string> PostRecord::label(const std::string& key) const {
  auto it = labels.find(key);
  if (it == labels.end() || it->second.empty()) return std::nullopt;
  return it->second.front();
}

void Cohort::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto* group : {&treated, &donors}) {
    for (const auto& p : *group) {
      if (!seen.insert(p.post_id).second) throw DataError("duplicate post_id: " + p.post_id);
    }
  }
  for (const auto& p : treated)
    if (!p.treated()) throw DataError("treated post without treatment time: " + p.post_id);
  for (const auto& p : donors)
    if (p.treated()) throw DataError("donor post with treatment time: " + p.post_id);
}

}  // namespace noteffect
