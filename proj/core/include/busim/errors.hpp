#pragma once

#include <stdexcept>
#include <string>

#include "busim/domain.hpp"

namespace busim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error {
  using Error::Error;
};

/// A record in an input file did not parse; carries file and 1-based line.
struct ParseError : Error {
  ParseError(std::string file_, std::size_t line_, const std::string& what_)
      : Error(file_ + ":" + std::to_string(line_) + ": " + what_),
        file(std::move(file_)),
        line(line_) {}
  std::string file;
  std::size_t line;
};

struct ValidationError : Error {
  explicit ValidationError(ValidationReport report_)
      : Error("scenario validation failed:\n" + report_.to_string()),
        report(std::move(report_)) {}
  ValidationReport report;
};

struct InvalidParams : Error {
  using Error::Error;
};

struct VariantMismatch : Error {
  using Error::Error;
};

}  // namespace busim
