#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "noteffect/io/archive.hpp"

namespace noteffect::io {

// posts and observations are required; the rest may be left empty.
struct IngestPaths {
  std::filesystem::path posts;
  std::filesystem::path observations;
  std::filesystem::path note_events;
  std::filesystem::path labels;
  std::filesystem::path reposts;
  std::filesystem::path follows;
};

// Conventional file names inside one directory.
IngestPaths ingest_paths_in(const std::filesystem::path& dir);

struct IngestReport {
  std::map<std::string, std::size_t> rows;  // per input file
  std::vector<std::string> rejections;
  std::vector<std::string> warnings;
};

struct IngestResult {
  Archive archive;
  IngestReport report;
};

// Parses, validates and aligns the input files. Throws SchemaError for
// malformed rows and DataError("no data") for an empty observations file.
// Posts with a helpful note event are treated; posts whose notes were never
// helpful are donors; posts without note events or observations are
// rejected.
IngestResult ingest(const IngestPaths& paths);

}  // namespace noteffect::io
