#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "busim/domain.hpp"

namespace busim {

/// One boarding: when it happened and how long the passenger had been
/// waiting at the stop (since appearance for leg 0, since the previous
/// alight for transfers).
struct WaitingSample {
  Clock board_clock_s = 0;
  std::string passenger_id;
  int leg_index = 0;
  Clock wait_s = 0;
  bool operator==(const WaitingSample&) const = default;
};

struct WaitingTimes {
  std::vector<WaitingSample> samples;  // log order
  std::int64_t served = 0;             // passengers with at least one boarding
  std::int64_t unserved = 0;           // passengers who never boarded
  bool operator==(const WaitingTimes&) const = default;

  /// Samples grouped by hour of day of the boarding clock.
  std::map<int, std::vector<Clock>> by_hour() const;
  /// Mean wait over boardings inside [window_start, window_end), folded to
  /// clock-of-day. Empty when no boarding falls in the window.
  std::optional<double> mean_in_window(Clock window_start_s, Clock window_end_s) const;
};

/// Fleet-loading buckets per the occupancy classification: LOW 0-20,
/// MID 21-60, HIGH 61 and above.
enum class OccupancyBucket { kLow, kMid, kHigh };

OccupancyBucket occupancy_bucket(int onboard);

struct OccupancyRow {
  Clock clock_s = 0;
  int low = 0;
  int mid = 0;
  int high = 0;
  bool operator==(const OccupancyRow&) const = default;
  int total() const { return low + mid + high; }
};

struct OccupancyHistogram {
  std::vector<OccupancyRow> rows;  // one per snapshot, clock ascending
  bool operator==(const OccupancyHistogram&) const = default;
};

/// Crime exposure of one transfer stop: crimes within the vicinity radius
/// and the users who transferred there in the reporting window. The rate is
/// empty (UNDEFINED) when no user transferred; undefined rates are excluded
/// from aggregates.
struct StopCrimeProfile {
  std::string stop_id;
  std::int64_t transfer_events = 0;   // transfer occurrences in window
  std::int64_t users_on_site = 0;     // distinct transferring passengers
  std::int64_t crime_count = 0;
  std::optional<double> rate;         // crime_count / users_on_site
  bool operator==(const StopCrimeProfile&) const = default;
};

/// Continuous maximum-likelihood power-law fit with KS-selected x_min.
struct PowerLawFit {
  double alpha = 0.0;
  double x_min = 0.0;
  double ks_distance = 0.0;
  std::int64_t n_tail = 0;  // samples >= x_min used for the estimate
  bool operator==(const PowerLawFit&) const = default;
};

/// Fraction of transfer occurrences whose stop has more than `threshold`
/// crimes nearby.
struct ExposureResult {
  std::int64_t transfers = 0;
  std::int64_t over_threshold = 0;
  double fraction = 0.0;
  bool operator==(const ExposureResult&) const = default;
};

}  // namespace busim
