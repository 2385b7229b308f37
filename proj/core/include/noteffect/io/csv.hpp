#pragma once

#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noteffect/util/error.hpp"

namespace noteffect::io {

// Schema violation with the file and 1-based line it was found on.
class SchemaError : public DataError {
 public:
  SchemaError(std::string file, std::size_t line, const std::string& message);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_ = 0;
};

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // starting line of each row

  std::size_t column(std::string_view name) const;  // throws when absent
  bool has_column(std::string_view name) const;
};

// RFC 4180 style: comma separated, double-quoted fields may hold commas,
// quotes ("") and newlines. Blank lines are skipped. Every required column
// must be in the header and every row must have the header's width.
CsvTable parse_csv(std::string_view text, const std::string& source,
                   std::span<const std::string_view> required = {});
CsvTable read_csv(const std::filesystem::path& path,
                  std::span<const std::string_view> required = {});

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(std::initializer_list<std::string_view> fields);
  void row(std::span<const std::string> fields);

 private:
  void field(std::string_view f, bool first);
  std::ostream& out_;
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
// Strict parses; the whole field must be consumed.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);

}  // namespace noteffect::io
