#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "noteffect/core_model/series.hpp"

namespace noteffect {

enum class NoteStatus { helpful, not_helpful };

struct NoteStatusEvent {
  std::string post_id;
  std::string note_id;
  NoteStatus status = NoteStatus::helpful;
  Millis at = 0;
  std::string note_text;

  friend bool operator==(const NoteStatusEvent&, const NoteStatusEvent&) = default;
};

// Half-open [begin, end) stretch of time during which a note was rated helpful.
struct HelpfulInterval {
  Millis begin = 0;
  Millis end = 0;
  friend bool operator==(const HelpfulInterval&, const HelpfulInterval&) = default;
};

struct NoteText {
  std::string note_id;
  std::string text;
  std::vector<HelpfulInterval> helpful;
  friend bool operator==(const NoteText&, const NoteText&) = default;
};

// Stratification label keys understood by the effects module.
namespace label_keys {
inline constexpr const char* kPartisanship = "partisanship";
inline constexpr const char* kMediaType = "media_type";
inline constexpr const char* kAccuracyConcerns = "accuracy_concerns";
inline constexpr const char* kNoteGradeLevel = "note_grade_level";
inline constexpr const char* kNoteSentenceCount = "note_sentence_count";
}  // namespace label_keys

struct PostRecord {
  std::string post_id;
  Millis created_at = 0;
  std::optional<Millis> treatment_time;
  double author_follower_count = 0.0;
  std::map<MetricKind, EngagementSeries> series;
  // Multi-label keys (accuracy_concerns) hold several values.
  std::map<std::string, std::vector<std::string>> labels;
  std::vector<NoteText> notes;

  bool treated() const { return treatment_time.has_value(); }

  // Treatment mapped to the nearest grid step at or before it.
  std::optional<int> treatment_step() const;

  const EngagementSeries* find_series(MetricKind m) const;

  std::optional<std::string> label(const std::string& key) const;

  friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

struct Cohort {
  std::vector<PostRecord> treated;
  std::vector<PostRecord> donors;

  // Throws DataError on duplicate ids or a donor carrying a treatment time.
  void validate() const;

  friend bool operator==(const Cohort&, const Cohort&) = default;
};

// A post removed by a filtering stage, with the reason.
struct Exclusion {
  std::string post_id;
  std::string stage;
  std::string reason;
  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

}  // namespace noteffect
