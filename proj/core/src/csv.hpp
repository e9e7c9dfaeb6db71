#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace busim::csv {

/// Shortest fixed-notation decimal that parses back to the same double.
std::string format_double(double v);

/// Like format_double but zero-padded to at least 6 fractional digits, the
/// precision contract for coordinates. Padding preserves the parsed value.
std::string format_coord(double v);

std::vector<std::string> split(const std::string& text, char delim);

/// Line-oriented comma-delimited writer. LF endings, UTF-8 passthrough;
/// throws IoError on failure. Output is a pure function of the rows, so
/// equal data serializes byte-identically.
class Writer {
 public:
  Writer(const std::filesystem::path& file, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Strict reader: fixed column count, 1-based line numbers for errors.
class Reader {
 public:
  /// Throws IoError when the file cannot be opened; `what` names the
  /// logical record kind (e.g. "stops") for the error message.
  Reader(const std::filesystem::path& file, const std::string& what,
         const std::vector<std::string>& expected_header);

  /// Next data row, or false at end of file.
  bool next(std::vector<std::string>& fields);

  std::size_t line() const { return line_; }
  [[noreturn]] void fail(const std::string& message) const;

  double as_double(const std::string& field, const std::string& name) const;
  std::int64_t as_int(const std::string& field, const std::string& name) const;
  std::uint64_t as_uint(const std::string& field, const std::string& name) const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::size_t columns_;
};

}  // namespace busim::csv
