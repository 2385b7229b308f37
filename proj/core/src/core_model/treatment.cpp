#include "noteffect/core_model/treatment.hpp"

#include <algorithm>
#include <numeric>

#include "noteffect/effects/readability.hpp"

namespace noteffect {

TreatmentAssignment assign_treatment(std::span<const NoteStatusEvent> events) {
  TreatmentAssignment out;
  for (const auto& e : events) {
    if (e.status != NoteStatus::helpful) continue;
    if (!out.treatment_time || e.at < *out.treatment_time) out.treatment_time = e.at;
  }
  out.treated = out.treatment_time.has_value();
  return out;
}

std::vector<NoteText> helpful_intervals(std::span<const NoteStatusEvent> events,
                                        Millis window_begin, Millis window_end) {
  std::vector<const NoteStatusEvent*> sorted;
  sorted.reserve(events.size());
  for (const auto& e : events) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->note_id != b->note_id ? a->note_id < b->note_id : a->at < b->at;
  });

  std::vector<NoteText> notes;
  auto close = [&](NoteText& note, Millis begin, Millis end) {
    begin = std::max(begin, window_begin);
    end = std::min(end, window_end);
    if (end > begin) note.helpful.push_back({begin, end});
  };
  for (std::size_t i = 0; i < sorted.size();) {
    NoteText note;
    note.note_id = sorted[i]->note_id;
    std::optional<Millis> helpful_since;
    for (; i < sorted.size() && sorted[i]->note_id == note.note_id; ++i) {
      const auto& e = *sorted[i];
      if (!e.note_text.empty()) note.text = e.note_text;
      if (e.status == NoteStatus::helpful) {
        if (!helpful_since) helpful_since = e.at;
      } else if (helpful_since) {
        close(note, *helpful_since, e.at);
        helpful_since.reset();
      }
    }
    if (helpful_since) close(note, *helpful_since, window_end);
    notes.push_back(std::move(note));
  }
  return notes;
}

std::vector<double> note_weights(const PostRecord& post, Millis horizon) {
  std::vector<double> weights(post.notes.size(), 0.0);
  if (!post.treatment_time) return {};
  const Millis begin = *post.treatment_time;
  const Millis end = begin + horizon;
  double total = 0.0;
  for (std::size_t i = 0; i < post.notes.size(); ++i) {
    Millis t = 0;
    for (const auto& iv : post.notes[i].helpful) {
      const Millis b = std::max(iv.begin, begin);
      const Millis e = std::min(iv.end, end);
      if (e > b) t += e - b;
    }
    weights[i] = static_cast<double>(t);
    total += weights[i];
  }
  if (total <= 0.0) return {};
  for (double& w : weights) w /= total;
  return weights;
}

std::map<std::string, double> effective_note_attributes(const PostRecord& post, Millis horizon) {
  const auto weights = note_weights(post, horizon);
  if (weights.empty()) return {};
  double grade = 0.0, sentences = 0.0, grade_weight = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    const auto fk = flesch_kincaid(post.notes[i].text);
    if (!fk) continue;
    grade += weights[i] * *fk;
    sentences += weights[i] * static_cast<double>(sentence_count(post.notes[i].text));
    grade_weight += weights[i];
  }
  if (grade_weight <= 0.0) return {};
  return {{label_keys::kNoteGradeLevel, grade / grade_weight},
          {label_keys::kNoteSentenceCount, sentences / grade_weight}};
}

}  // namespace noteffect
