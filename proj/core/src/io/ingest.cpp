#include "noteffect/io/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "noteffect/core_model/align.hpp"
#include "noteffect/core_model/treatment.hpp"
#include "noteffect/io/csv.hpp"

namespace noteffect::io {

IngestPaths ingest_paths_in(const std::filesystem::path& dir) {
  return {dir / "posts.csv",  dir / "observations.csv", dir / "note_events.csv",
          dir / "labels.csv", dir / "reposts.csv",      dir / "follows.csv"};
}

namespace {

Millis parse_time(const CsvTable& t, std::size_t row, std::size_t col) {
  try {
    return parse_iso8601(t.rows[row][col]);
  } catch (const DataError& e) {
    throw SchemaError(t.source, t.lines[row], e.what());
  }
}

double parse_number(const CsvTable& t, std::size_t row, std::size_t col) {
  double v = 0.0;
  if (!parse_double(t.rows[row][col], v) || !std::isfinite(v))
    throw SchemaError(t.source, t.lines[row], "bad number '" + t.rows[row][col] + "' in column " +
                                                  t.header[col]);
  return v;
}

bool present(const std::filesystem::path& p) { return !p.empty() && std::filesystem::exists(p); }

}  // namespace

IngestResult ingest(const IngestPaths& paths) {
  IngestResult result;
  auto& report = result.report;
  auto& archive = result.archive;

  constexpr std::array<std::string_view, 3> post_cols = {"post_id", "created_at", "author_follower_count"};
  const auto posts = read_csv(paths.posts, post_cols);
  report.rows["posts"] = posts.rows.size();
  std::map<std::string, PostRecord> records;
  std::vector<std::string> order;
  {
    const auto id = posts.column("post_id"), created = posts.column("created_at"),
               followers = posts.column("author_follower_count");
    for (std::size_t r = 0; r < posts.rows.size(); ++r) {
      PostRecord p;
      p.post_id = posts.rows[r][id];
      if (p.post_id.empty()) throw SchemaError(posts.source, posts.lines[r], "empty post_id");
      p.created_at = parse_time(posts, r, created);
      p.author_follower_count = parse_number(posts, r, followers);
      if (records.count(p.post_id))
        throw SchemaError(posts.source, posts.lines[r], "duplicate post_id " + p.post_id);
      order.push_back(p.post_id);
      records.emplace(p.post_id, std::move(p));
    }
  }

  constexpr std::array<std::string_view, 4> obs_cols = {"post_id", "metric", "observed_at", "value"};
  const auto obs = read_csv(paths.observations, obs_cols);
  report.rows["observations"] = obs.rows.size();
  if (obs.rows.empty()) throw DataError("no data");
  std::map<std::string, std::map<MetricKind, std::vector<RawObservation>>> raw;
  std::map<std::string, Millis> last_seen;
  {
    const auto id = obs.column("post_id"), metric = obs.column("metric"),
               at = obs.column("observed_at"), value = obs.column("value");
    for (std::size_t r = 0; r < obs.rows.size(); ++r) {
      const auto& row = obs.rows[r];
      const auto m = parse_metric(row[metric]);
      if (!m) throw SchemaError(obs.source, obs.lines[r], "unknown metric '" + row[metric] + "'");
      const Millis t = parse_time(obs, r, at);
      const double v = parse_number(obs, r, value);
      if (!records.count(row[id])) {
        report.rejections.push_back(obs.source + ":" + std::to_string(obs.lines[r]) +
                                    ": unknown post " + row[id]);
        continue;
      }
      raw[row[id]][*m].push_back({row[id], *m, t, v});
      auto& last = last_seen[row[id]];
      last = std::max(last, t);
    }
  }
  for (auto& [id, by_metric] : raw) {
    auto& post = records.at(id);
    for (auto& [m, list] : by_metric) {
      try {
        auto aligned = align_series(list, post.created_at);
        for (auto& w : aligned.warnings) report.warnings.push_back(id + " " + std::string(to_string(m)) + ": " + w);
        if (!aligned.series.empty()) post.series[m] = std::move(aligned.series);
      } catch (const DataError& e) {
        report.rejections.push_back(id + " " + std::string(to_string(m)) + ": " + e.what());
      }
    }
  }

  std::map<std::string, std::vector<NoteStatusEvent>> events;
  if (present(paths.note_events)) {
    constexpr std::array<std::string_view, 5> cols = {"post_id", "note_id", "status", "at", "note_text_ref"};
    const auto t = read_csv(paths.note_events, cols);
    report.rows["note_events"] = t.rows.size();
    const auto id = t.column("post_id"), note = t.column("note_id"), status = t.column("status"),
               at = t.column("at"), text = t.column("note_text_ref");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      NoteStatusEvent e;
      e.post_id = row[id];
      e.note_id = row[note];
      if (row[status] == "helpful" || row[status] == "currently_rated_helpful")
        e.status = NoteStatus::helpful;
      else if (row[status] == "not_helpful" || row[status] == "needs_more_ratings" ||
               row[status] == "currently_rated_not_helpful")
        e.status = NoteStatus::not_helpful;
      else
        throw SchemaError(t.source, t.lines[r], "unknown status '" + row[status] + "'");
      e.at = parse_time(t, r, at);
      e.note_text = row[text];
      if (!records.count(e.post_id)) {
        report.rejections.push_back(t.source + ":" + std::to_string(t.lines[r]) + ": unknown post " + e.post_id);
        continue;
      }
      events[e.post_id].push_back(std::move(e));
    }
  }

  if (present(paths.labels)) {
    constexpr std::array<std::string_view, 3> cols = {"post_id", "key", "value"};
    const auto t = read_csv(paths.labels, cols);
    report.rows["labels"] = t.rows.size();
    const auto id = t.column("post_id"), key = t.column("key"), value = t.column("value");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      auto it = records.find(row[id]);
      if (it == records.end()) {
        report.rejections.push_back(t.source + ":" + std::to_string(t.lines[r]) + ": unknown post " + row[id]);
        continue;
      }
      auto& values = it->second.labels[row[key]];
      if (std::find(values.begin(), values.end(), row[value]) == values.end()) values.push_back(row[value]);
    }
  }

  if (present(paths.reposts)) {
    constexpr std::array<std::string_view, 3> cols = {"root_post_id", "reposter_id", "at"};
    const auto t = read_csv(paths.reposts, cols);
    report.rows["reposts"] = t.rows.size();
    const auto root = t.column("root_post_id"), who = t.column("reposter_id"), at = t.column("at");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (!records.count(row[root])) {
        report.rejections.push_back(t.source + ":" + std::to_string(t.lines[r]) + ": unknown post " + row[root]);
        continue;
      }
      if (row[who].empty()) throw SchemaError(t.source, t.lines[r], "empty reposter_id");
      archive.reposts[row[root]].push_back({row[root], row[who], parse_time(t, r, at)});
    }
  }

  if (present(paths.follows)) {
    constexpr std::array<std::string_view, 2> cols = {"follower_id", "followee_id"};
    const auto t = read_csv(paths.follows, cols);
    report.rows["follows"] = t.rows.size();
    const auto a = t.column("follower_id"), b = t.column("followee_id");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.rows[r][a].empty() || t.rows[r][b].empty())
        throw SchemaError(t.source, t.lines[r], "empty user id");
      archive.follows.add_follow(t.rows[r][a], t.rows[r][b]);
    }
  }
  archive.follows.finalize();

  for (const auto& id : order) {
    auto& post = records.at(id);
    if (post.series.empty()) {
      archive.exclusions.push_back({id, "ingest", "no observations"});
      continue;
    }
    if (!post.series.count(MetricKind::follower_count)) {
      int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
      for (const auto& [m, s] : post.series) {
        lo = std::min(lo, s.first_step);
        hi = std::max(hi, s.last_step());
      }
      EngagementSeries f;
      f.metric = MetricKind::follower_count;
      f.first_step = lo;
      f.values.assign(static_cast<std::size_t>(hi - lo + 1), post.author_follower_count);
      post.series[MetricKind::follower_count] = std::move(f);
    }
    auto ev = events.find(id);
    if (ev == events.end()) {
      archive.exclusions.push_back({id, "ingest", "no proposed note"});
      continue;
    }
    const auto assignment = assign_treatment(ev->second);
    post.treatment_time = assignment.treatment_time;
    post.notes = helpful_intervals(ev->second, post.created_at, last_seen.at(id));
    (assignment.treated ? archive.cohort.treated : archive.cohort.donors).push_back(std::move(post));
  }
  // With a reposts file, a kept post without rows has an empty cascade.
  std::map<std::string, std::vector<RepostEvent>> kept;
  if (present(paths.reposts)) {
    for (const auto* list : {&archive.cohort.treated, &archive.cohort.donors})
      for (const auto& p : *list) {
        auto it = archive.reposts.find(p.post_id);
        kept[p.post_id] = it == archive.reposts.end() ? std::vector<RepostEvent>{} : std::move(it->second);
      }
  }
  archive.reposts = std::move(kept);
  archive.cohort.validate();
  return result;
}

}  // namespace noteffect::io
