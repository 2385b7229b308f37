#pragma once

#include <string>
#include <vector>

#include "noteffect/core_model/post.hpp"

namespace test {

using namespace noteffect;

inline EngagementSeries series(MetricKind m, int first_step, std::vector<double> values) {
  EngagementSeries s;
  s.metric = m;
  s.first_step = first_step;
  s.values = std::move(values);
  return s;
}

// Post created at 0 with an optional treatment age; series are added by the caller.
inline PostRecord post(std::string id, std::optional<Millis> treatment_age = std::nullopt,
                       double followers = 100.0) {
  PostRecord p;
  p.post_id = std::move(id);
  p.created_at = 0;
  p.treatment_time = treatment_age;
  p.author_follower_count = followers;
  return p;
}

// Steps from a to b inclusive, filled by f(step).
template <typename F>
std::vector<double> fill(int a, int b, F f) {
  std::vector<double> v;
  for (int k = a; k <= b; ++k) v.push_back(f(k));
  return v;
}

}  // namespace test
