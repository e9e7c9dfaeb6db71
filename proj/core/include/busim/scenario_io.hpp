#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "busim/domain.hpp"

namespace busim {

/// The scenario interchange format is a directory of UTF-8 comma-delimited
/// files with a header line: stops.csv, edges.csv, lines.csv,
/// schedules.csv, itineraries.csv, crimes.csv, plus config.csv when the
/// configuration differs from the defaults. Column sets are documented in
/// docs/file_formats.md.
struct LoadOptions {
  /// When set, only crimes of these types are kept (the default keeps all
  /// property crime, as the analyses aggregate the three types).
  std::optional<std::vector<CrimeType>> crime_filter;
};

/// Loads and validates a scenario directory. Throws IoError when a file is
/// missing, ParseError (with file and line) on a malformed record, and
/// ValidationError (embedding the report) when invariants do not hold.
Scenario load_scenario(const std::filesystem::path& dir, const LoadOptions& options = {});

/// Writes a scenario directory; re-loading yields a field-equal scenario.
/// Deterministic: identical scenarios serialize byte-identically.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

/// Reads a standalone file in the crimes.csv format.
std::vector<CrimeRecord> load_crimes_file(const std::filesystem::path& file,
                                          const LoadOptions& options = {});

}  // namespace busim
