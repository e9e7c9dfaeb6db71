#include "busim/scenario_io.hpp"

#include <algorithm>
#include <map>

#include "busim/errors.hpp"
#include "csv.hpp"

namespace busim {

namespace fs = std::filesystem;
using csv::Reader;
using csv::Writer;

namespace {

const std::vector<std::string> kStopsHeader = {"stop_id", "lat", "lon"};
const std::vector<std::string> kEdgesHeader = {"from_stop", "to_stop", "mean_s", "std_s"};
const std::vector<std::string> kLinesHeader = {"line_id", "seq", "stop_id"};
const std::vector<std::string> kSchedulesHeader = {"vehicle_id", "capacity", "trip_index",
                                                   "line_id", "departure_s"};
const std::vector<std::string> kItinerariesHeader = {
    "passenger_id", "variant", "appearance_s", "leg_index",
    "line_id",      "board_stop", "alight_stop"};
const std::vector<std::string> kCrimesHeader = {"lat", "lon", "crime_type", "occurred_at"};
const std::vector<std::string> kConfigHeader = {"key", "value"};

void write_stops(const TransitNetwork& network, const fs::path& dir) {
  Writer w(dir / "stops.csv", kStopsHeader);
  for (const auto& s : network.stops) {
    w.row({s.id, csv::format_coord(s.lat), csv::format_coord(s.lon)});
  }
  w.close();
}

void write_edges(const TransitNetwork& network, const fs::path& dir) {
  Writer w(dir / "edges.csv", kEdgesHeader);
  for (const auto& e : network.edges) {
    w.row({e.from, e.to, csv::format_double(e.mean_s), csv::format_double(e.std_s)});
  }
  w.close();
}

void write_lines(const std::vector<LinePlan>& lines, const fs::path& dir) {
  Writer w(dir / "lines.csv", kLinesHeader);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.stop_sequence.size(); ++i) {
      w.row({line.line_id, std::to_string(i), line.stop_sequence[i]});
    }
  }
  w.close();
}

void write_schedules(const std::vector<VehicleSchedule>& vehicles, const fs::path& dir) {
  Writer w(dir / "schedules.csv", kSchedulesHeader);
  for (const auto& v : vehicles) {
    for (std::size_t i = 0; i < v.trips.size(); ++i) {
      w.row({v.vehicle_id, std::to_string(v.capacity), std::to_string(i),
             v.trips[i].line_id, std::to_string(v.trips[i].departure_s)});
    }
  }
  w.close();
}

void write_itineraries(const std::vector<PassengerItinerary>& itineraries,
                       const fs::path& dir) {
  Writer w(dir / "itineraries.csv", kItinerariesHeader);
  for (const auto& it : itineraries) {
    for (std::size_t k = 0; k < it.legs.size(); ++k) {
      const auto& leg = it.legs[k];
      w.row({it.passenger_id, variant_name(it.variant), std::to_string(it.appearance_s),
             std::to_string(k), leg.line_id, leg.board_stop, leg.alight_stop});
    }
  }
  w.close();
}

void write_crimes(const std::vector<CrimeRecord>& crimes, const fs::path& dir) {
  Writer w(dir / "crimes.csv", kCrimesHeader);
  for (const auto& c : crimes) {
    w.row({csv::format_coord(c.lat), csv::format_coord(c.lon), crime_type_name(c.type),
           c.occurred_at});
  }
  w.close();
}

void write_config(const SimConfig& config, const fs::path& dir) {
  Writer w(dir / "config.csv", kConfigHeader);
  w.row({"start_clock_s", std::to_string(config.start_clock_s)});
  w.row({"end_clock_s", std::to_string(config.end_clock_s)});
  w.row({"tick_s", std::to_string(config.tick_s)});
  w.row({"crime_radius_m", csv::format_double(config.crime_radius_m)});
  w.row({"rng_seed", std::to_string(config.rng_seed)});
  w.close();
}

TransitNetwork load_network(const fs::path& dir) {
  TransitNetwork network;
  {
    Reader r(dir / "stops.csv", "stops", kStopsHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      Stop s{f[0], r.as_double(f[1], "lat"), r.as_double(f[2], "lon")};
      if (s.lat < -90.0 || s.lat > 90.0) r.fail("lat out of range [-90, 90]");
      if (s.lon < -180.0 || s.lon > 180.0) r.fail("lon out of range [-180, 180]");
      network.stops.push_back(std::move(s));
    }
  }
  {
    Reader r(dir / "edges.csv", "edges", kEdgesHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      network.edges.push_back(
          {f[0], f[1], r.as_double(f[2], "mean_s"), r.as_double(f[3], "std_s")});
    }
  }
  return network;
}

std::vector<LinePlan> load_lines(const fs::path& dir) {
  std::vector<LinePlan> lines;
  std::map<std::string, std::size_t> index;
  Reader r(dir / "lines.csv", "lines", kLinesHeader);
  std::vector<std::string> f;
  while (r.next(f)) {
    auto seq = r.as_int(f[1], "seq");
    auto it = index.find(f[0]);
    if (it == index.end()) {
      if (seq != 0) r.fail("line " + f[0] + ": first row must have seq 0");
      index.emplace(f[0], lines.size());
      lines.push_back({f[0], {f[2]}});
    } else {
      auto& line = lines[it->second];
      if (seq != static_cast<std::int64_t>(line.stop_sequence.size()))
        r.fail("line " + f[0] + ": seq must be contiguous");
      line.stop_sequence.push_back(f[2]);
    }
  }
  return lines;
}

std::vector<VehicleSchedule> load_schedules(const fs::path& dir) {
  std::vector<VehicleSchedule> vehicles;
  std::map<std::string, std::size_t> index;
  Reader r(dir / "schedules.csv", "schedules", kSchedulesHeader);
  std::vector<std::string> f;
  while (r.next(f)) {
    auto capacity = r.as_int(f[1], "capacity");
    auto trip_index = r.as_int(f[2], "trip_index");
    Trip trip{f[3], r.as_int(f[4], "departure_s")};
    auto it = index.find(f[0]);
    if (it == index.end()) {
      if (trip_index != 0) r.fail("vehicle " + f[0] + ": first row must have trip_index 0");
      index.emplace(f[0], vehicles.size());
      vehicles.push_back({f[0], static_cast<int>(capacity), {std::move(trip)}});
    } else {
      auto& vehicle = vehicles[it->second];
      if (capacity != vehicle.capacity)
        r.fail("vehicle " + f[0] + ": capacity differs between rows");
      if (trip_index != static_cast<std::int64_t>(vehicle.trips.size()))
        r.fail("vehicle " + f[0] + ": trip_index must be contiguous");
      vehicle.trips.push_back(std::move(trip));
    }
  }
  return vehicles;
}

std::vector<PassengerItinerary> load_itineraries(const fs::path& dir) {
  std::vector<PassengerItinerary> itineraries;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  Reader r(dir / "itineraries.csv", "itineraries", kItinerariesHeader);
  std::vector<std::string> f;
  while (r.next(f)) {
    auto variant = parse_variant(f[1]);
    if (!variant) r.fail("unknown variant '" + f[1] + "'");
    auto appearance = r.as_int(f[2], "appearance_s");
    auto leg_index = r.as_int(f[3], "leg_index");
    ItineraryLeg leg{f[4], f[5], f[6]};
    auto key = std::make_pair(f[0], f[1]);
    auto it = index.find(key);
    if (it == index.end()) {
      if (leg_index != 0) r.fail("passenger " + f[0] + ": first row must have leg_index 0");
      index.emplace(key, itineraries.size());
      itineraries.push_back({f[0], *variant, appearance, {std::move(leg)}});
    } else {
      auto& itinerary = itineraries[it->second];
      if (appearance != itinerary.appearance_s)
        r.fail("passenger " + f[0] + ": appearance_s differs between rows");
      if (leg_index != static_cast<std::int64_t>(itinerary.legs.size()))
        r.fail("passenger " + f[0] + ": leg_index must be contiguous");
      itinerary.legs.push_back(std::move(leg));
    }
  }
  return itineraries;
}

std::vector<CrimeRecord> load_crimes_from(const fs::path& file, const LoadOptions& options) {
  std::vector<CrimeRecord> crimes;
  Reader r(file, "crimes", kCrimesHeader);
  std::vector<std::string> f;
  while (r.next(f)) {
    CrimeRecord c;
    c.lat = r.as_double(f[0], "lat");
    c.lon = r.as_double(f[1], "lon");
    if (c.lat < -90.0 || c.lat > 90.0) r.fail("lat out of range [-90, 90]");
    if (c.lon < -180.0 || c.lon > 180.0) r.fail("lon out of range [-180, 180]");
    auto type = parse_crime_type(f[2]);
    if (!type) r.fail("unknown crime_type '" + f[2] + "'");
    c.type = *type;
    c.occurred_at = f[3];
    if (options.crime_filter) {
      const auto& keep = *options.crime_filter;
      if (std::find(keep.begin(), keep.end(), c.type) == keep.end()) continue;
    }
    crimes.push_back(std::move(c));
  }
  return crimes;
}

SimConfig load_config(const fs::path& dir) {
  SimConfig config;
  if (!fs::exists(dir / "config.csv")) return config;  // defaults
  Reader r(dir / "config.csv", "config", kConfigHeader);
  std::vector<std::string> f;
  while (r.next(f)) {
    if (f[0] == "start_clock_s") config.start_clock_s = r.as_int(f[1], f[0]);
    else if (f[0] == "end_clock_s") config.end_clock_s = r.as_int(f[1], f[0]);
    else if (f[0] == "tick_s") config.tick_s = r.as_int(f[1], f[0]);
    else if (f[0] == "crime_radius_m") config.crime_radius_m = r.as_double(f[1], f[0]);
    else if (f[0] == "rng_seed") config.rng_seed = r.as_uint(f[1], f[0]);
    else r.fail("unknown config key '" + f[0] + "'");
  }
  return config;
}

}  // namespace

Scenario load_scenario(const fs::path& dir, const LoadOptions& options) {
  if (!fs::exists(dir)) throw IoError("scenario directory does not exist: " + dir.string());
  Scenario scenario;
  scenario.network = load_network(dir);
  scenario.lines = load_lines(dir);
  scenario.vehicles = load_schedules(dir);
  scenario.itineraries = load_itineraries(dir);
  scenario.crimes = load_crimes_from(dir / "crimes.csv", options);
  scenario.config = load_config(dir);

  auto report = validate_scenario(scenario);
  if (!report.ok()) throw ValidationError(std::move(report));
  return scenario;
}

std::vector<CrimeRecord> load_crimes_file(const fs::path& file, const LoadOptions& options) {
  return load_crimes_from(file, options);
}

void write_scenario(const Scenario& scenario, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  write_stops(scenario.network, dir);
  write_edges(scenario.network, dir);
  write_lines(scenario.lines, dir);
  write_schedules(scenario.vehicles, dir);
  write_itineraries(scenario.itineraries, dir);
  write_crimes(scenario.crimes, dir);
  // config.csv only when it differs from the defaults, so freshly generated
  // scenarios stay at the six-file layout.
  if (!(scenario.config == SimConfig{})) {
    write_config(scenario.config, dir);
  } else if (fs::exists(dir / "config.csv")) {
    fs::remove(dir / "config.csv");
  }
}

}  // namespace busim
