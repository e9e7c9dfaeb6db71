#include "busim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "busim/errors.hpp"
#include "busim/geo.hpp"
#include "busim/powerlaw.hpp"
#include "busim/router.hpp"

namespace busim {

namespace {

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

}  // namespace

std::map<int, std::vector<Clock>> WaitingTimes::by_hour() const {
  std::map<int, std::vector<Clock>> grouped;
  for (const auto& s : samples) grouped[hour_of_day(s.board_clock_s)].push_back(s.wait_s);
  return grouped;
}

std::optional<double> WaitingTimes::mean_in_window(Clock window_start_s,
                                                   Clock window_end_s) const {
  ReportWindow window{window_start_s, window_end_s};
  double sum = 0.0;
  std::int64_t n = 0;
  for (const auto& s : samples) {
    if (!window.contains(s.board_clock_s)) continue;
    sum += static_cast<double>(s.wait_s);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

OccupancyBucket occupancy_bucket(int onboard) {
  if (onboard <= 20) return OccupancyBucket::kLow;
  if (onboard <= 60) return OccupancyBucket::kMid;
  return OccupancyBucket::kHigh;
}

WaitingTimes waiting_times(const SimulationReport& report) {
  WaitingTimes out;
  std::unordered_set<std::string> boarded;
  for (const Event& e : report.log.events) {
    if (e.kind != EventKind::kBoard) continue;
    auto parts = split(e.payload, ':');  // vehicle:stop:leg:wait_start
    WaitingSample sample;
    sample.board_clock_s = e.clock_s;
    sample.passenger_id = e.subject;
    sample.leg_index = std::stoi(parts[2]);
    sample.wait_s = e.clock_s - static_cast<Clock>(std::stoll(parts[3]));
    out.samples.push_back(std::move(sample));
    boarded.insert(e.subject);
  }
  out.served = static_cast<std::int64_t>(boarded.size());
  out.unserved = static_cast<std::int64_t>(report.passengers.size()) - out.served;
  return out;
}

OccupancyHistogram occupancy_histogram(const EventLog& log) {
  OccupancyHistogram hist;
  for (const Event& e : log.events) {
    if (e.kind != EventKind::kSnapshot) continue;
    OccupancyRow row;
    row.clock_s = e.clock_s;
    if (!e.payload.empty()) {
      for (const std::string& entry : split(e.payload, ';')) {
        auto pair = split(entry, ':');
        int onboard = std::stoi(pair[1]);
        switch (occupancy_bucket(onboard)) {
          case OccupancyBucket::kLow: ++row.low; break;
          case OccupancyBucket::kMid: ++row.mid; break;
          case OccupancyBucket::kHigh: ++row.high; break;
        }
      }
    }
    hist.rows.push_back(row);
  }
  return hist;
}

CrimeIndex::CrimeIndex(const std::vector<CrimeRecord>& crimes) {
  by_lat_.reserve(crimes.size());
  for (const auto& c : crimes) by_lat_.emplace_back(c.lat, c.lon);
  std::sort(by_lat_.begin(), by_lat_.end());
}

std::int64_t CrimeIndex::count_near(double lat, double lon, double radius_m) const {
  // Any point within radius_m lies within this latitude band (the
  // meridional component never exceeds the great-circle distance); the
  // small slack only widens the scan.
  double band_deg = radius_m / kEarthRadiusM * (180.0 / 3.141592653589793) + 1e-9;
  auto lo = std::lower_bound(by_lat_.begin(), by_lat_.end(),
                             std::make_pair(lat - band_deg, -std::numeric_limits<double>::infinity()));
  auto hi = std::upper_bound(by_lat_.begin(), by_lat_.end(),
                             std::make_pair(lat + band_deg, std::numeric_limits<double>::infinity()));
  std::int64_t count = 0;
  for (auto it = lo; it != hi; ++it) {
    if (haversine_m(lat, lon, it->first, it->second) <= radius_m) ++count;
  }
  return count;
}

std::int64_t crimes_near_stop(const Stop& stop, const std::vector<CrimeRecord>& crimes,
                              double radius_m) {
  return CrimeIndex(crimes).count_near(stop.lat, stop.lon, radius_m);
}

std::optional<double> crime_rate_at_stop(std::int64_t crime_count,
                                         std::int64_t users_on_site) {
  if (users_on_site == 0) return std::nullopt;  // UNDEFINED, excluded from aggregates
  return static_cast<double>(crime_count) / static_cast<double>(users_on_site);
}

std::optional<double> crime_rate_at_stop(const Stop& stop,
                                         const std::vector<CrimeRecord>& crimes,
                                         std::int64_t users_on_site, double radius_m) {
  return crime_rate_at_stop(crimes_near_stop(stop, crimes, radius_m), users_on_site);
}

std::vector<StopCrimeProfile> transfer_crime_profiles(const SimulationReport& report,
                                                      const Scenario& scenario,
                                                      const AnalysisParams& params) {
  // Transfers are ALIGHT events with the "transfer" disposition; the stop
  // is the second payload field.
  std::map<std::string, std::pair<std::int64_t, std::set<std::string>>> by_stop;
  for (const Event& e : report.log.events) {
    if (e.kind != EventKind::kAlight) continue;
    auto parts = split(e.payload, ':');  // vehicle:stop:leg:disposition
    if (parts[3] != "transfer") continue;
    if (!params.window.contains(e.clock_s)) continue;
    auto& entry = by_stop[parts[1]];
    entry.first += 1;
    entry.second.insert(e.subject);
  }

  CrimeIndex index(scenario.crimes);
  std::unordered_map<std::string, const Stop*> stops;
  for (const auto& s : scenario.network.stops) stops.emplace(s.id, &s);

  std::vector<StopCrimeProfile> profiles;
  for (const auto& [stop_id, entry] : by_stop) {
    StopCrimeProfile p;
    p.stop_id = stop_id;
    p.transfer_events = entry.first;
    p.users_on_site = static_cast<std::int64_t>(entry.second.size());
    const Stop* stop = stops.at(stop_id);
    p.crime_count = index.count_near(stop->lat, stop->lon, params.radius_m);
    p.rate = crime_rate_at_stop(p.crime_count, p.users_on_site);
    profiles.push_back(std::move(p));
  }
  return profiles;  // std::map iteration: already sorted by stop id
}

ExposureResult transfer_crime_exposure(const std::vector<PassengerItinerary>& itineraries,
                                       Variant variant, const TransitNetwork& network,
                                       const std::vector<CrimeRecord>& crimes,
                                       double radius_m, int threshold) {
  CrimeIndex index(crimes);
  std::unordered_map<std::string, const Stop*> stops;
  for (const auto& s : network.stops) stops.emplace(s.id, &s);
  std::unordered_map<std::string, std::int64_t> count_cache;

  ExposureResult result;
  for (const auto& itinerary : itineraries) {
    if (itinerary.variant != variant) continue;
    for (const std::string& stop_id : extract_transfer_stops(itinerary)) {
      // per transfer occurrence, not per unique stop
      result.transfers += 1;
      auto cached = count_cache.find(stop_id);
      std::int64_t count;
      if (cached != count_cache.end()) {
        count = cached->second;
      } else {
        const Stop* stop = stops.at(stop_id);
        count = index.count_near(stop->lat, stop->lon, radius_m);
        count_cache.emplace(stop_id, count);
      }
      if (count > threshold) result.over_threshold += 1;
    }
  }
  result.fraction = result.transfers == 0
                        ? 0.0
                        : static_cast<double>(result.over_threshold) /
                              static_cast<double>(result.transfers);
  return result;
}

std::vector<std::pair<std::string, std::int64_t>> crimes_per_stop(
    const TransitNetwork& network, const std::vector<CrimeRecord>& crimes,
    double radius_m) {
  CrimeIndex index(crimes);
  std::vector<std::pair<std::string, std::int64_t>> out;
  out.reserve(network.stops.size());
  for (const auto& stop : network.stops) {
    out.emplace_back(stop.id, index.count_near(stop.lat, stop.lon, radius_m));
  }
  return out;
}

void finalize_report(SimulationReport& report, const Scenario& scenario,
                     const AnalysisParams& params) {
  report.waiting = waiting_times(report);
  report.occupancy = occupancy_histogram(report.log);
  report.transfer_crime = transfer_crime_profiles(report, scenario, params);
  report.finalized = true;
}

namespace {

std::optional<double> mean_defined_rate(const std::vector<StopCrimeProfile>& profiles) {
  double sum = 0.0;
  std::int64_t n = 0;
  for (const auto& p : profiles) {
    if (!p.rate) continue;
    sum += *p.rate;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

ComparisonReport compare_scenarios(SimulationReport report_actual,
                                   SimulationReport report_optimal,
                                   const Scenario& scenario,
                                   const AnalysisParams& params) {
  if (report_actual.variant != Variant::kActual)
    throw VariantMismatch("first report must be the actual variant");
  if (report_optimal.variant != Variant::kOptimal)
    throw VariantMismatch("second report must be the optimal variant");

  if (!report_actual.finalized) finalize_report(report_actual, scenario, params);
  if (!report_optimal.finalized) finalize_report(report_optimal, scenario, params);

  ComparisonReport cmp;
  cmp.params = params;
  cmp.exposure_actual =
      transfer_crime_exposure(scenario.itineraries, Variant::kActual, scenario.network,
                              scenario.crimes, params.radius_m, params.threshold);
  cmp.exposure_optimal =
      transfer_crime_exposure(scenario.itineraries, Variant::kOptimal, scenario.network,
                              scenario.crimes, params.radius_m, params.threshold);
  cmp.mean_window_wait_actual_s =
      report_actual.waiting.mean_in_window(params.window.start_s, params.window.end_s);
  cmp.mean_window_wait_optimal_s =
      report_optimal.waiting.mean_in_window(params.window.start_s, params.window.end_s);
  cmp.mean_transfer_crime_rate_actual = mean_defined_rate(report_actual.transfer_crime);
  cmp.mean_transfer_crime_rate_optimal = mean_defined_rate(report_optimal.transfer_crime);

  std::vector<double> counts;
  for (const auto& [stop_id, count] : crimes_per_stop(scenario.network, scenario.crimes,
                                                      params.radius_m)) {
    if (count > 0) counts.push_back(static_cast<double>(count));
  }
  cmp.crime_power_law = fit_power_law(counts);

  cmp.actual = std::move(report_actual);
  cmp.optimal = std::move(report_optimal);
  return cmp;
}

}  // namespace busim
