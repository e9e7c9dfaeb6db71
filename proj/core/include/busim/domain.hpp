#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace busim {

/// Simulation clock, in integer seconds since midnight of day 0.
/// 02:00 on day 0 is 7200, 02:00 on day 1 is 93600. Integer arithmetic
/// keeps schedules exact; only edge traversal times are real-valued.
using Clock = std::int64_t;

constexpr Clock kSecondsPerDay = 86400;
constexpr Clock kTickSeconds = 60;
constexpr int kDefaultCapacity = 80;

/// Parses "HH:MM" or "HH:MM:SS"; an optional "+1d" suffix adds one day.
std::optional<Clock> parse_clock(const std::string& text);
/// Formats a clock as "HH:MM:SS" with a "+Nd" suffix past day 0.
std::string format_clock(Clock clock_s);
/// Hour of day in [0, 24), folding multi-day clocks.
int hour_of_day(Clock clock_s);

/// A geolocated bus stop. Ids are opaque strings, unique within a network.
struct Stop {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const Stop&) const = default;
};

/// Directed travel-time edge between two stops: mean and standard
/// deviation of the traversal time in seconds.
struct TimeEdge {
  std::string from;
  std::string to;
  double mean_s = 0.0;
  double std_s = 0.0;
  bool operator==(const TimeEdge&) const = default;
};

struct TransitNetwork {
  std::vector<Stop> stops;
  std::vector<TimeEdge> edges;
  bool operator==(const TransitNetwork&) const = default;
};

/// Ordered stop sequence of a bus line. Every consecutive pair must be
/// backed by a TimeEdge in the network.
struct LinePlan {
  std::string line_id;
  std::vector<std::string> stop_sequence;
  bool operator==(const LinePlan&) const = default;
};

/// One scheduled trip of a vehicle: which line it serves and when it leaves
/// the line's first stop.
struct Trip {
  std::string line_id;
  Clock departure_s = 0;
  bool operator==(const Trip&) const = default;
};

struct VehicleSchedule {
  std::string vehicle_id;
  int capacity = kDefaultCapacity;
  std::vector<Trip> trips;  // ordered by departure
  bool operator==(const VehicleSchedule&) const = default;
};

enum class Variant { kActual, kOptimal };

std::string variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& text);

/// One leg of a passenger journey: ride line_id from board_stop to
/// alight_stop. Consecutive legs share the transfer stop.
struct ItineraryLeg {
  std::string line_id;
  std::string board_stop;
  std::string alight_stop;
  bool operator==(const ItineraryLeg&) const = default;
};

struct PassengerItinerary {
  std::string passenger_id;
  Variant variant = Variant::kActual;
  Clock appearance_s = 0;
  std::vector<ItineraryLeg> legs;
  bool operator==(const PassengerItinerary&) const = default;

  const std::string& origin() const { return legs.front().board_stop; }
  const std::string& destination() const { return legs.back().alight_stop; }
};

enum class CrimeType { kTheft, kRobbery, kBurglary };

std::string crime_type_name(CrimeType t);
std::optional<CrimeType> parse_crime_type(const std::string& text);

/// A property-crime record. The timestamp is carried as opaque metadata;
/// only the coordinates enter the analysis.
struct CrimeRecord {
  double lat = 0.0;
  double lon = 0.0;
  CrimeType type = CrimeType::kTheft;
  std::string occurred_at;
  bool operator==(const CrimeRecord&) const = default;
};

struct SimConfig {
  Clock start_clock_s = 2 * 3600;    // 02:00, fewest vehicles in circulation
  Clock end_clock_s = 26 * 3600;     // 02:00 next day
  Clock tick_s = kTickSeconds;       // fixed; other values are rejected
  double crime_radius_m = 200.0;
  std::uint64_t rng_seed = 0;
  bool operator==(const SimConfig&) const = default;
};

/// Everything a run needs: network, service plan, demand, crime data and
/// configuration. A scenario is only usable once validate_scenario is clean.
struct Scenario {
  TransitNetwork network;
  std::vector<LinePlan> lines;
  std::vector<VehicleSchedule> vehicles;
  std::vector<PassengerItinerary> itineraries;
  std::vector<CrimeRecord> crimes;
  SimConfig config;
  bool operator==(const Scenario&) const = default;

  std::vector<PassengerItinerary> itineraries_of(Variant v) const;
};

struct Violation {
  std::string entity;   // "stop", "edge", "line", "vehicle", "passenger", "crime", "config"
  std::string id;       // offending entity id, empty for config
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant and returns all violations found.
/// Pure and idempotent; violations are data, not failures.
ValidationReport validate_scenario(const Scenario& scenario);

/// True iff the id is non-empty and uses only [A-Za-z0-9_.+-].
/// Keeps ids safe inside the delimited interchange and log formats.
bool is_valid_id(const std::string& id);

/// Read-side lookup tables over a scenario. Build once, share freely.
class ScenarioIndex {
 public:
  explicit ScenarioIndex(const Scenario& scenario);

  const Stop* stop(const std::string& id) const;
  const LinePlan* line(const std::string& id) const;
  const TimeEdge* edge(const std::string& from, const std::string& to) const;
  /// Position of a stop in a line's sequence, if present.
  std::optional<int> stop_position(const std::string& line_id, const std::string& stop_id) const;
  /// Lines whose sequence contains the stop, in line_id order.
  const std::vector<std::string>& lines_at_stop(const std::string& stop_id) const;

 private:
  const Scenario* scenario_;
  std::unordered_map<std::string, std::size_t> stop_by_id_;
  std::unordered_map<std::string, std::size_t> line_by_id_;
  std::unordered_map<std::string, std::size_t> edge_by_pair_;
  std::unordered_map<std::string, std::unordered_map<std::string, int>> position_in_line_;
  std::unordered_map<std::string, std::vector<std::string>> lines_at_stop_;
  std::vector<std::string> no_lines_;
};

}  // namespace busim
