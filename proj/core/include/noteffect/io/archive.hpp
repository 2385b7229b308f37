#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "noteffect/cascade/cascade.hpp"
#include "noteffect/cascade/follow_graph.hpp"
#include "noteffect/core_model/post.hpp"

namespace noteffect::io {

// Aligned cohort plus everything later stages need from the raw inputs.
struct Archive {
  Cohort cohort;
  std::map<std::string, std::vector<RepostEvent>> reposts;  // by root post
  FollowEdgeSet follows;
  std::vector<Exclusion> exclusions;
  bool cascades_built = false;

  bool operator==(const Archive& other) const;
};

// Line-oriented, tab-separated text; numbers use shortest round-trip form so
// read(write(a)) == a.
void write_archive(std::ostream& out, const Archive& archive);
Archive read_archive(std::istream& in, const std::string& source = "archive");

void save_archive(const std::filesystem::path& path, const Archive& archive);
Archive load_archive(const std::filesystem::path& path);

}  // namespace noteffect::io
