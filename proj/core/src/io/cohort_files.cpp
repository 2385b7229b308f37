#include "noteffect/io/cohort_files.hpp"

#include <fstream>

#include "noteffect/io/csv.hpp"
#include "noteffect/io/reports.hpp"

namespace noteffect::io {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_cohort_files(const std::filesystem::path& dir, const sim::SimCohort& sc) {
  std::filesystem::create_directories(dir);
  std::vector<const PostRecord*> posts;
  for (const auto& p : sc.cohort.treated) posts.push_back(&p);
  for (const auto& p : sc.cohort.donors) posts.push_back(&p);

  {
    auto out = open(dir / "posts.csv");
    CsvWriter w(out);
    w.row({"post_id", "created_at", "author_follower_count"});
    for (const auto* p : posts)
      w.row({p->post_id, format_iso8601(p->created_at), format_double(p->author_follower_count)});
  }
  {
    auto out = open(dir / "observations.csv");
    CsvWriter w(out);
    w.row({"post_id", "metric", "observed_at", "value"});
    for (const auto* p : posts)
      for (const auto& [m, s] : p->series) {
        if (m == MetricKind::follower_count) continue;  // rebuilt from the posts file
        for (std::size_t k = 0; k < s.values.size(); ++k)
          w.row({p->post_id, to_string(m), format_iso8601(p->created_at + s.age_of(k)),
                 format_double(s.values[k])});
      }
  }
  {
    auto out = open(dir / "note_events.csv");
    CsvWriter w(out);
    w.row({"post_id", "note_id", "status", "at", "note_text_ref"});
    for (const auto* p : posts)
      for (const auto& n : p->notes) {
        if (n.helpful.empty()) {
          w.row({p->post_id, n.note_id, "not_helpful", format_iso8601(p->created_at + 30 * kMinute), n.text});
          continue;
        }
        for (const auto& iv : n.helpful) w.row({p->post_id, n.note_id, "helpful", format_iso8601(iv.begin), n.text});
      }
  }
  {
    auto out = open(dir / "labels.csv");
    CsvWriter w(out);
    w.row({"post_id", "key", "value"});
    for (const auto* p : posts)
      for (const auto& [key, values] : p->labels)
        for (const auto& v : values) w.row({p->post_id, key, v});
  }
  {
    auto out = open(dir / "reposts.csv");
    CsvWriter w(out);
    w.row({"root_post_id", "reposter_id", "at"});
    for (const auto& [root, events] : sc.reposts)
      for (const auto& e : events) w.row({root, e.reposter, format_iso8601(e.at)});
  }
  {
    auto out = open(dir / "follows.csv");
    CsvWriter w(out);
    w.row({"follower_id", "followee_id"});
    for (UserId u = 0; u < sc.follows.user_count(); ++u)
      for (UserId v : sc.follows.followees(u)) w.row({sc.follows.name(u), sc.follows.name(v)});
  }
  write_text(dir / "ground_truth.json", truth_to_json(sc.truth));
}

}  // namespace noteffect::io
