#include "noteffect/core_model/eligibility.hpp"

namespace noteffect {

AvailabilityClass classify_availability(const EngagementSeries& series, int treatment_step,
                                        Millis post_window) {
  if (series.empty()) return AvailabilityClass::unavailable;
  const int post_steps = static_cast<int>(post_window / kGridStep);
  if (series.first_step >= treatment_step) return AvailabilityClass::only_post_treatment;
  if (series.last_step() < treatment_step) return AvailabilityClass::dropped_pre_treatment;
  if (series.last_step() < treatment_step + post_steps)
    return AvailabilityClass::dropped_post_treatment;
  return AvailabilityClass::fully_available;
}

EligibilityResult eligibility_filter(const Cohort& cohort, const EligibilityConfig& config) {
  EligibilityResult out;
  out.cohort.donors = cohort.donors;
  const int pre_steps = static_cast<int>(ceil_div(config.min_pre, kGridStep));
  const int post_steps = static_cast<int>(ceil_div(config.min_post, kGridStep));
  for (const auto& post : cohort.treated) {
    const auto a = post.treatment_step();
    bool any_pre = false, any_both = false;
    if (a) {
      for (const auto& [metric, s] : post.series) {
        if (s.empty()) continue;
        const bool pre = s.first_step <= *a - pre_steps && s.last_step() >= *a;
        const bool post_ok = s.last_step() >= *a + post_steps;
        any_pre = any_pre || pre;
        any_both = any_both || (pre && post_ok);
      }
    }
    if (any_both) {
      out.cohort.treated.push_back(post);
    } else {
      out.exclusions.push_back(
          {post.post_id, "eligibility", any_pre ? kInsufficientPost : kInsufficientPre});
    }
  }
  return out;
}

}  // namespace noteffect
