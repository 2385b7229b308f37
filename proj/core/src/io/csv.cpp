#include "noteffect/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace noteffect::io {

SchemaError::SchemaError(std::string file, std::size_t line, const std::string& message)
    : DataError(file + ":" + std::to_string(line) + ": " + message),
      file_(std::move(file)),
      line_(line) {}

std::size_t CsvTable::column(std::string_view name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError(source, 1, "missing column " + std::string(name));
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable parse_csv(std::string_view text, const std::string& source,
                   std::span<const std::string_view> required) {
  CsvTable table;
  table.source = source;
  std::size_t i = 0, line = 1;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  std::vector<std::string> record;
  std::string field;
  while (i < text.size()) {
    const std::size_t start_line = line;
    record.clear();
    bool blank = true;
    for (;;) {
      field.clear();
      if (i < text.size() && text[i] == '"') {
        blank = false;
        ++i;
        for (;;) {
          if (i >= text.size()) throw SchemaError(source, start_line, "unterminated quoted field");
          const char c = text[i++];
          if (c == '"') {
            if (i < text.size() && text[i] == '"') {
              field.push_back('"');
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw SchemaError(source, line, "text after closing quote");
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          field.push_back(text[i++]);
        if (!field.empty()) blank = false;
      }
      record.push_back(field);
      if (i < text.size() && text[i] == ',') {
        blank = false;
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == '\r') ++i;
      if (i < text.size() && text[i] == '\n') {
        ++i;
        ++line;
      }
      break;
    }
    if (blank) continue;
    if (table.header.empty()) {
      table.header = record;
      continue;
    }
    if (record.size() != table.header.size())
      throw SchemaError(source, start_line,
                        "expected " + std::to_string(table.header.size()) + " fields, found " +
                            std::to_string(record.size()));
    table.rows.push_back(record);
    table.lines.push_back(start_line);
  }
  if (table.header.empty()) throw SchemaError(source, 1, "missing header");
  for (auto name : required) table.column(name);
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, std::span<const std::string_view> required) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.filename().string(), required);
}

void CsvWriter::field(std::string_view f, bool first) {
  if (!first) out_ << ',';
  if (f.find_first_of(",\"\n\r") == std::string_view::npos) {
    out_ << f;
    return;
  }
  out_ << '"';
  for (char c : f) {
    if (c == '"') out_ << '"';
    out_ << c;
  }
  out_ << '"';
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    field(f, first);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    field(f, first);
    first = false;
  }
  out_ << '\n';
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_int64(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace noteffect::io
