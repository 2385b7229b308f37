#pragma once

#include <vector>

#include "noteffect/core_model/post.hpp"

namespace noteffect {

struct EligibilityConfig {
  Millis min_pre = 1 * kHour;
  Millis min_post = 48 * kHour;
};

struct EligibilityResult {
  Cohort cohort;
  std::vector<Exclusion> exclusions;
};

// Coverage of a series relative to the treatment grid step.
AvailabilityClass classify_availability(const EngagementSeries& series,
                                        int treatment_step,
                                        Millis post_window = 48 * kHour);

// Treated posts are kept when at least one metric covers min_pre before and
// min_post after treatment. Donors are never removed here.
EligibilityResult eligibility_filter(const Cohort& cohort,
                                     const EligibilityConfig& config = {});

inline constexpr const char* kInsufficientPre = "insufficient pre-treatment";
inline constexpr const char* kInsufficientPost = "insufficient post-treatment";

}  // namespace noteffect
