#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tweetsent::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line where the row starts
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180 style: comma separated, double-quote quoting with "" escapes,
// quoted fields may span lines. A leading UTF-8 BOM is skipped. Rows are
// not checked for width; callers decide how strict to be.
Table parse(std::string_view text, std::string_view source = "<memory>");
Table read_file(const std::filesystem::path& path);

std::string quote(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

class Writer {
 public:
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

std::string read_text_file(const std::filesystem::path& path);
// Writes through a temporary file then renames, so partial files never appear.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace tweetsent::csv
