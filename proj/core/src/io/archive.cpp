#include "noteffect/io/archive.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "noteffect/io/csv.hpp"

namespace noteffect::io {

bool Archive::operator==(const Archive& other) const {
  return cohort == other.cohort && reposts == other.reposts && follows == other.follows &&
         exclusions == other.exclusions && cascades_built == other.cascades_built;
}

namespace {

constexpr std::string_view kMagic = "noteffect-archive";
constexpr int kVersion = 1;

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(s[i]);
    }
  }
  return out;
}

void write_post(std::ostream& out, const PostRecord& p, bool treated) {
  out << "post\t" << (treated ? "treated" : "donor") << '\t' << escape(p.post_id) << '\t'
      << p.created_at << '\t';
  if (p.treatment_time)
    out << *p.treatment_time;
  else
    out << '-';
  out << '\t' << format_double(p.author_follower_count) << '\n';
  for (const auto& [m, s] : p.series) {
    out << "series\t" << escape(p.post_id) << '\t' << to_string(m) << '\t' << s.first_step << '\t';
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      if (k) out << ' ';
      out << format_double(s.values[k]);
    }
    out << '\n';
  }
  for (const auto& [key, values] : p.labels)
    for (const auto& v : values)
      out << "label\t" << escape(p.post_id) << '\t' << escape(key) << '\t' << escape(v) << '\n';
  for (const auto& n : p.notes) {
    out << "note\t" << escape(p.post_id) << '\t' << escape(n.note_id) << '\t' << escape(n.text)
        << '\n';
    for (const auto& iv : n.helpful)
      out << "helpful\t" << escape(p.post_id) << '\t' << iv.begin << '\t' << iv.end << '\n';
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

void write_archive(std::ostream& out, const Archive& a) {
  out << kMagic << '\t' << kVersion << '\n';
  out << "cascades\t" << (a.cascades_built ? 1 : 0) << '\n';
  for (const auto& p : a.cohort.treated) write_post(out, p, true);
  for (const auto& p : a.cohort.donors) write_post(out, p, false);
  for (const auto& [root, events] : a.reposts) {
    out << "cascade\t" << escape(root) << '\n';
    for (const auto& e : events)
      out << "repost\t" << escape(e.root_post) << '\t' << escape(e.reposter) << '\t' << e.at << '\n';
  }
  for (UserId u = 0; u < a.follows.user_count(); ++u)
    out << "user\t" << escape(a.follows.name(u)) << '\n';
  for (UserId u = 0; u < a.follows.user_count(); ++u)
    for (UserId v : a.follows.followees(u))
      out << "follow\t" << escape(a.follows.name(u)) << '\t' << escape(a.follows.name(v)) << '\n';
  for (const auto& e : a.exclusions)
    out << "exclusion\t" << escape(e.post_id) << '\t' << escape(e.stage) << '\t' << escape(e.reason)
        << '\n';
}

Archive read_archive(std::istream& in, const std::string& source) {
  Archive a;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> SchemaError { return SchemaError(source, line_no, msg); };
  auto need = [&](const std::vector<std::string_view>& f, std::size_t n) {
    if (f.size() != n) throw fail("expected " + std::to_string(n) + " fields");
  };
  auto int64 = [&](std::string_view s) {
    std::int64_t v = 0;
    if (!parse_int64(s, v)) throw fail("bad integer " + std::string(s));
    return v;
  };
  auto number = [&](std::string_view s) {
    double v = 0;
    if (!parse_double(s, v)) throw fail("bad number " + std::string(s));
    return v;
  };
  // Posts are located by id; pointers stay valid because indices are stored.
  std::map<std::string, std::pair<bool, std::size_t>> where;
  auto post = [&](std::string_view id) -> PostRecord& {
    auto it = where.find(unescape(id));
    if (it == where.end()) throw fail("unknown post " + std::string(id));
    return it->second.first ? a.cohort.treated[it->second.second] : a.cohort.donors[it->second.second];
  };

  if (!std::getline(in, line)) throw DataError(source + ": empty archive");
  ++line_no;
  {
    const auto f = split_tabs(line);
    if (f.size() != 2 || f[0] != kMagic || f[1] != std::to_string(kVersion))
      throw fail("not a version " + std::to_string(kVersion) + " archive");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    const auto kind = f[0];
    if (kind == "cascades") {
      need(f, 2);
      a.cascades_built = f[1] == "1";
    } else if (kind == "post") {
      need(f, 6);
      PostRecord p;
      p.post_id = unescape(f[2]);
      p.created_at = int64(f[3]);
      if (f[4] != "-") p.treatment_time = int64(f[4]);
      p.author_follower_count = number(f[5]);
      const bool treated = f[1] == "treated";
      if (!treated && f[1] != "donor") throw fail("bad role " + std::string(f[1]));
      auto& list = treated ? a.cohort.treated : a.cohort.donors;
      if (!where.emplace(p.post_id, std::make_pair(treated, list.size())).second)
        throw fail("duplicate post_id " + p.post_id);
      list.push_back(std::move(p));
    } else if (kind == "series") {
      need(f, 5);
      auto& p = post(f[1]);
      const auto m = parse_metric(f[2]);
      if (!m) throw fail("unknown metric " + std::string(f[2]));
      EngagementSeries s;
      s.metric = *m;
      s.first_step = static_cast<int>(int64(f[3]));
      std::string_view values = f[4];
      while (!values.empty()) {
        const auto sp = values.find(' ');
        s.values.push_back(number(values.substr(0, sp)));
        if (sp == std::string_view::npos) break;
        values.remove_prefix(sp + 1);
      }
      p.series[*m] = std::move(s);
    } else if (kind == "label") {
      need(f, 4);
      post(f[1]).labels[unescape(f[2])].push_back(unescape(f[3]));
    } else if (kind == "note") {
      need(f, 4);
      post(f[1]).notes.push_back({unescape(f[2]), unescape(f[3]), {}});
    } else if (kind == "helpful") {
      need(f, 4);
      auto& p = post(f[1]);
      if (p.notes.empty()) throw fail("helpful interval before any note");
      p.notes.back().helpful.push_back({int64(f[2]), int64(f[3])});
    } else if (kind == "cascade") {
      need(f, 2);
      a.reposts[unescape(f[1])];
    } else if (kind == "repost") {
      need(f, 4);
      a.reposts[unescape(f[1])].push_back({unescape(f[1]), unescape(f[2]), int64(f[3])});
    } else if (kind == "user") {
      need(f, 2);
      a.follows.intern(unescape(f[1]));
    } else if (kind == "follow") {
      need(f, 3);
      a.follows.add_follow(unescape(f[1]), unescape(f[2]));
    } else if (kind == "exclusion") {
      need(f, 4);
      a.exclusions.push_back({unescape(f[1]), unescape(f[2]), unescape(f[3])});
    } else {
      throw fail("unknown record " + std::string(kind));
    }
  }
  a.follows.finalize();
  return a;
}

void save_archive(const std::filesystem::path& path, const Archive& archive) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_archive(out, archive);
  if (!out) throw DataError("write failed for " + path.string());
}

Archive load_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_archive(in, path.filename().string());
}

}  // namespace noteffect::io
