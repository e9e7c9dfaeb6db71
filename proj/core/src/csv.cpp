#include "csv.hpp"

#include <charconv>
#include <system_error>

#include "busim/errors.hpp"

namespace busim::csv {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  if (ec != std::errc()) throw Error("cannot format double");
  return std::string(buf, ptr);
}

std::string format_coord(double v) {
  std::string s = format_double(v);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    s += ".000000";
  } else {
    std::size_t frac = s.size() - dot - 1;
    while (frac < 6) {
      s += '0';
      ++frac;
    }
  }
  return s;
}

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

namespace {
std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}
}  // namespace

Writer::Writer(const std::filesystem::path& file, const std::vector<std::string>& header)
    : path_(file), out_(file, std::ios::binary), columns_(header.size()) {
  if (!out_) throw IoError("cannot open " + file.string() + " for writing");
  out_ << join(header) << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    throw Error("row width mismatch writing " + path_.string());
  out_ << join(fields) << '\n';
  if (!out_) throw IoError("write failure on " + path_.string());
}

void Writer::close() {
  out_.flush();
  if (!out_) throw IoError("write failure on " + path_.string());
  out_.close();
}

Reader::Reader(const std::filesystem::path& file, const std::string& what,
               const std::vector<std::string>& expected_header)
    : path_(file), in_(file, std::ios::binary), columns_(expected_header.size()) {
  if (!in_) {
    throw IoError("missing required file: " + what + " (" + file.string() + ")");
  }
  std::string header;
  if (!std::getline(in_, header)) fail("empty file, expected a header line");
  line_ = 1;
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (split(header, ',') != expected_header) {
    fail("unexpected header, want: " + join(expected_header));
  }
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;  // tolerate a trailing blank line
    fields = split(text, ',');
    if (fields.size() != columns_) {
      fail("expected " + std::to_string(columns_) + " fields, got " +
           std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

void Reader::fail(const std::string& message) const {
  throw ParseError(path_.string(), line_, message);
}

double Reader::as_double(const std::string& field, const std::string& name) const {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail("field " + name + ": not a number: '" + field + "'");
  }
  return value;
}

std::int64_t Reader::as_int(const std::string& field, const std::string& name) const {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail("field " + name + ": not an integer: '" + field + "'");
  }
  return value;
}

std::uint64_t Reader::as_uint(const std::string& field, const std::string& name) const {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail("field " + name + ": not an unsigned integer: '" + field + "'");
  }
  return value;
}

}  // namespace busim::csv
