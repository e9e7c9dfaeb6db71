#pragma once

#include <filesystem>

#include "busim/engine.hpp"
#include "busim/metrics.hpp"

namespace busim {

/// Writes a finalized report as plot-ready delimited files, one set per
/// variant: events_<v>.csv, passengers_<v>.csv, waiting_<v>.csv,
/// occupancy_<v>.csv, transfer_crime_<v>.csv, summary_<v>.csv.
/// Deterministic byte-for-byte for equal reports.
void write_report(const SimulationReport& report, const std::filesystem::path& dir);

/// Reads back what write_report produced; field-equal round trip.
SimulationReport load_report(const std::filesystem::path& dir, Variant variant);

/// Writes the comparison artifacts on top of the two per-variant sets:
/// powerlaw.csv and comparison.csv.
void write_comparison(const ComparisonReport& comparison, const std::filesystem::path& dir);

}  // namespace busim
