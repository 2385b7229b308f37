#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "noteffect/core_model/post.hpp"

namespace noteffect {

struct TreatmentAssignment {
  bool treated = false;
  std::optional<Millis> treatment_time;
  friend bool operator==(const TreatmentAssignment&, const TreatmentAssignment&) = default;
};

// A post is treated for its whole life once any note was rated helpful; the
// treatment time is the earliest helpful rating. Later helpful -> not_helpful
// transitions do not revoke treatment.
TreatmentAssignment assign_treatment(std::span<const NoteStatusEvent> events);

// Per-note helpful intervals reconstructed from the status events, clipped to
// [window_begin, window_end). A note that is still helpful at its last event
// stays helpful until window_end.
std::vector<NoteText> helpful_intervals(std::span<const NoteStatusEvent> events,
                                        Millis window_begin, Millis window_end);

// Time-weighted note attributes over [treatment, treatment + horizon).
// Returns an empty map when no note spent positive time rated helpful.
std::map<std::string, double> effective_note_attributes(const PostRecord& post,
                                                        Millis horizon = 48 * kHour);

// Helpful-time weights per note, normalized to sum to 1 over notes with
// positive helpful time. Empty when the total is zero.
std::vector<double> note_weights(const PostRecord& post, Millis horizon = 48 * kHour);

}  // namespace noteffect
