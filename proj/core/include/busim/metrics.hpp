#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "busim/domain.hpp"
#include "busim/engine.hpp"
#include "busim/indicators.hpp"

namespace busim {

/// Reporting window folded to clock-of-day, [start, end). Defaults to the
/// peak hours, 05:00-08:00.
struct ReportWindow {
  Clock start_s = 5 * 3600;
  Clock end_s = 8 * 3600;
  bool contains(Clock clock_s) const {
    Clock day = ((clock_s % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
    return day >= start_s && day < end_s;
  }
};

struct AnalysisParams {
  double radius_m = 200.0;
  int threshold = 10;       // exposure cutoff: more than 10 crimes nearby
  ReportWindow window;
  bool operator==(const AnalysisParams&) const = default;
};

/// Per-boarding waiting times from a completed run: board clock minus the
/// moment the passenger started waiting (appearance for the first leg, the
/// previous alight for transfers). Passengers who never board contribute no
/// sample and are counted as unserved.
WaitingTimes waiting_times(const SimulationReport& report);

/// Occupancy bucket counts per snapshot.
OccupancyHistogram occupancy_histogram(const EventLog& log);

/// Sorted-by-latitude crime index; prunes haversine evaluations to a
/// latitude band. Exact: the band over-covers the radius.
class CrimeIndex {
 public:
  explicit CrimeIndex(const std::vector<CrimeRecord>& crimes);
  std::int64_t count_near(double lat, double lon, double radius_m) const;

 private:
  std::vector<std::pair<double, double>> by_lat_;  // (lat, lon), lat ascending
};

/// Crimes within radius_m of the stop (haversine, mean earth radius).
std::int64_t crimes_near_stop(const Stop& stop, const std::vector<CrimeRecord>& crimes,
                              double radius_m);

/// Rate of Crime at a transfer stop: nearby crimes per transferring user.
/// users_on_site == 0 yields an empty rate (UNDEFINED).
std::optional<double> crime_rate_at_stop(std::int64_t crime_count,
                                         std::int64_t users_on_site);
std::optional<double> crime_rate_at_stop(const Stop& stop,
                                         const std::vector<CrimeRecord>& crimes,
                                         std::int64_t users_on_site, double radius_m);

/// Per-stop transfer crime profiles for one run: who transferred where in
/// the reporting window, and how much crime sits within the radius.
std::vector<StopCrimeProfile> transfer_crime_profiles(const SimulationReport& report,
                                                      const Scenario& scenario,
                                                      const AnalysisParams& params);

/// Fraction of transfer occurrences (per occurrence, not per unique stop)
/// of the given variant whose stop has more than `threshold` crimes within
/// radius_m. Zero transfers yield fraction 0.
ExposureResult transfer_crime_exposure(const std::vector<PassengerItinerary>& itineraries,
                                       Variant variant, const TransitNetwork& network,
                                       const std::vector<CrimeRecord>& crimes,
                                       double radius_m, int threshold);

/// Crimes within radius of every stop, in stop order. Input to the
/// heavy-tail analysis.
std::vector<std::pair<std::string, std::int64_t>> crimes_per_stop(
    const TransitNetwork& network, const std::vector<CrimeRecord>& crimes,
    double radius_m);

/// Computes and attaches the indicators to a report.
void finalize_report(SimulationReport& report, const Scenario& scenario,
                     const AnalysisParams& params);

/// Side-by-side comparison of the actual and the time-optimal runs over the
/// same scenario, plus the network-wide crimes-per-stop power-law fit.
struct ComparisonReport {
  AnalysisParams params;
  SimulationReport actual;
  SimulationReport optimal;
  ExposureResult exposure_actual;
  ExposureResult exposure_optimal;
  std::optional<double> mean_window_wait_actual_s;
  std::optional<double> mean_window_wait_optimal_s;
  std::optional<double> mean_transfer_crime_rate_actual;
  std::optional<double> mean_transfer_crime_rate_optimal;
  std::optional<PowerLawFit> crime_power_law;
};

/// Throws VariantMismatch unless report_actual/report_optimal carry the
/// matching variants. Both reports are finalized if they are not already.
ComparisonReport compare_scenarios(SimulationReport report_actual,
                                   SimulationReport report_optimal,
                                   const Scenario& scenario,
                                   const AnalysisParams& params);

}  // namespace busim
