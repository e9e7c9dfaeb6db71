#include "busim/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace busim {

std::optional<Clock> parse_clock(const std::string& text) {
  std::string body = text;
  Clock extra = 0;
  if (auto plus = body.find('+'); plus != std::string::npos) {
    std::string suffix = body.substr(plus);
    body = body.substr(0, plus);
    if (suffix.size() < 3 || suffix.back() != 'd') return std::nullopt;
    for (std::size_t i = 1; i + 1 < suffix.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(suffix[i]))) return std::nullopt;
    }
    extra = kSecondsPerDay * std::stoll(suffix.substr(1, suffix.size() - 2));
  }
  int hh = 0, mm = 0, ss = 0;
  char tail = 0;
  int fields = std::sscanf(body.c_str(), "%d:%d:%d%c", &hh, &mm, &ss, &tail);
  if (fields == 3) {
    // fall through
  } else {
    ss = 0;
    fields = std::sscanf(body.c_str(), "%d:%d%c", &hh, &mm, &tail);
    if (fields != 2) return std::nullopt;
  }
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 59) return std::nullopt;
  return extra + Clock{hh} * 3600 + Clock{mm} * 60 + ss;
}

std::string format_clock(Clock clock_s) {
  Clock day = clock_s >= 0 ? clock_s / kSecondsPerDay : -1;
  Clock rem = clock_s - day * kSecondsPerDay;
  if (rem < 0) {  // negative clocks only show up in hand-built tests
    rem += kSecondsPerDay;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", static_cast<int>(rem / 3600),
                static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
  std::string out = buf;
  if (day > 0) out += "+" + std::to_string(day) + "d";
  return out;
}

int hour_of_day(Clock clock_s) {
  Clock day = ((clock_s % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
  return static_cast<int>(day / 3600);
}

std::string variant_name(Variant v) {
  return v == Variant::kActual ? "actual" : "optimal";
}

std::optional<Variant> parse_variant(const std::string& text) {
  if (text == "actual") return Variant::kActual;
  if (text == "optimal") return Variant::kOptimal;
  return std::nullopt;
}

std::string crime_type_name(CrimeType t) {
  switch (t) {
    case CrimeType::kTheft: return "theft";
    case CrimeType::kRobbery: return "robbery";
    case CrimeType::kBurglary: return "burglary";
  }
  return "theft";
}

std::optional<CrimeType> parse_crime_type(const std::string& text) {
  if (text == "theft") return CrimeType::kTheft;
  if (text == "robbery") return CrimeType::kRobbery;
  if (text == "burglary") return CrimeType::kBurglary;
  return std::nullopt;
}

std::vector<PassengerItinerary> Scenario::itineraries_of(Variant v) const {
  std::vector<PassengerItinerary> out;
  for (const auto& it : itineraries) {
    if (it.variant == v) out.push_back(it);
  }
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.entity;
    if (!v.id.empty()) os << " " << v.id;
    os << ": " << v.message << "\n";
  }
  return os.str();
}

bool is_valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
              c == '+' || c == '-';
    if (!ok) return false;
  }
  return true;
}

namespace {

std::string edge_key(const std::string& from, const std::string& to) {
  return from + '\x1f' + to;
}

bool finite_range(double v, double lo, double hi) {
  return std::isfinite(v) && v >= lo && v <= hi;
}

}  // namespace

ScenarioIndex::ScenarioIndex(const Scenario& scenario) : scenario_(&scenario) {
  for (std::size_t i = 0; i < scenario.network.stops.size(); ++i) {
    stop_by_id_.emplace(scenario.network.stops[i].id, i);
  }
  for (std::size_t i = 0; i < scenario.network.edges.size(); ++i) {
    const auto& e = scenario.network.edges[i];
    edge_by_pair_.emplace(edge_key(e.from, e.to), i);
  }
  for (std::size_t i = 0; i < scenario.lines.size(); ++i) {
    const auto& line = scenario.lines[i];
    line_by_id_.emplace(line.line_id, i);
    auto& positions = position_in_line_[line.line_id];
    for (std::size_t p = 0; p < line.stop_sequence.size(); ++p) {
      // first occurrence wins; duplicates are flagged by validation
      positions.emplace(line.stop_sequence[p], static_cast<int>(p));
      auto& lines_here = lines_at_stop_[line.stop_sequence[p]];
      if (lines_here.empty() || lines_here.back() != line.line_id) {
        lines_here.push_back(line.line_id);
      }
    }
  }
  for (auto& [stop, lines] : lines_at_stop_) {
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  }
}

const Stop* ScenarioIndex::stop(const std::string& id) const {
  auto it = stop_by_id_.find(id);
  return it == stop_by_id_.end() ? nullptr : &scenario_->network.stops[it->second];
}

const LinePlan* ScenarioIndex::line(const std::string& id) const {
  auto it = line_by_id_.find(id);
  return it == line_by_id_.end() ? nullptr : &scenario_->lines[it->second];
}

const TimeEdge* ScenarioIndex::edge(const std::string& from, const std::string& to) const {
  auto it = edge_by_pair_.find(edge_key(from, to));
  return it == edge_by_pair_.end() ? nullptr : &scenario_->network.edges[it->second];
}

std::optional<int> ScenarioIndex::stop_position(const std::string& line_id,
                                                const std::string& stop_id) const {
  auto line_it = position_in_line_.find(line_id);
  if (line_it == position_in_line_.end()) return std::nullopt;
  auto pos_it = line_it->second.find(stop_id);
  if (pos_it == line_it->second.end()) return std::nullopt;
  return pos_it->second;
}

const std::vector<std::string>& ScenarioIndex::lines_at_stop(const std::string& stop_id) const {
  auto it = lines_at_stop_.find(stop_id);
  return it == lines_at_stop_.end() ? no_lines_ : it->second;
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  auto add = [&report](std::string entity, std::string id, std::string message) {
    report.violations.push_back({std::move(entity), std::move(id), std::move(message)});
  };

  std::set<std::string> stop_ids;
  for (const auto& stop : scenario.network.stops) {
    if (!is_valid_id(stop.id)) add("stop", stop.id, "invalid or empty id");
    if (!stop_ids.insert(stop.id).second) add("stop", stop.id, "duplicate stop id");
    if (!finite_range(stop.lat, -90.0, 90.0))
      add("stop", stop.id, "latitude out of range [-90, 90]");
    if (!finite_range(stop.lon, -180.0, 180.0))
      add("stop", stop.id, "longitude out of range [-180, 180]");
  }

  ScenarioIndex index(scenario);

  std::set<std::string> edge_pairs;
  for (const auto& edge : scenario.network.edges) {
    std::string id = edge.from + "->" + edge.to;
    if (!stop_ids.count(edge.from)) add("edge", id, "from-stop does not exist");
    if (!stop_ids.count(edge.to)) add("edge", id, "to-stop does not exist");
    if (edge.from == edge.to) add("edge", id, "self-loop");
    if (!(std::isfinite(edge.mean_s) && edge.mean_s > 0))
      add("edge", id, "mean_s must be > 0");
    if (!(std::isfinite(edge.std_s) && edge.std_s >= 0))
      add("edge", id, "std_s must be >= 0");
    if (!edge_pairs.insert(edge_key(edge.from, edge.to)).second)
      add("edge", id, "duplicate edge for ordered stop pair");
  }

  std::set<std::string> line_ids;
  for (const auto& line : scenario.lines) {
    if (!is_valid_id(line.line_id)) add("line", line.line_id, "invalid or empty id");
    if (!line_ids.insert(line.line_id).second)
      add("line", line.line_id, "duplicate line id");
    if (line.stop_sequence.size() < 2) {
      add("line", line.line_id, "needs at least 2 stops");
      continue;
    }
    std::set<std::string> seen;
    for (const auto& stop : line.stop_sequence) {
      if (!stop_ids.count(stop))
        add("line", line.line_id, "stop " + stop + " does not exist");
      if (!seen.insert(stop).second)
        add("line", line.line_id, "stop " + stop + " repeats in the sequence");
    }
    for (std::size_t i = 0; i + 1 < line.stop_sequence.size(); ++i) {
      const auto& a = line.stop_sequence[i];
      const auto& b = line.stop_sequence[i + 1];
      if (stop_ids.count(a) && stop_ids.count(b) && !index.edge(a, b)) {
        add("line", line.line_id, "no time edge for consecutive pair " + a + "->" + b);
      }
    }
  }

  std::set<std::string> vehicle_ids;
  for (const auto& vehicle : scenario.vehicles) {
    if (!is_valid_id(vehicle.vehicle_id))
      add("vehicle", vehicle.vehicle_id, "invalid or empty id");
    if (!vehicle_ids.insert(vehicle.vehicle_id).second)
      add("vehicle", vehicle.vehicle_id, "duplicate vehicle id");
    if (vehicle.capacity <= 0) add("vehicle", vehicle.vehicle_id, "capacity must be > 0");
    if (vehicle.trips.empty()) {
      // the interchange format cannot express a trip-less vehicle
      add("vehicle", vehicle.vehicle_id, "has no trips");
    }
    Clock prev = -1;
    bool first = true;
    for (const auto& trip : vehicle.trips) {
      if (!line_ids.count(trip.line_id))
        add("vehicle", vehicle.vehicle_id, "trip line " + trip.line_id + " does not exist");
      if (trip.departure_s < 0)
        add("vehicle", vehicle.vehicle_id, "negative trip departure");
      if (!first && trip.departure_s < prev)
        add("vehicle", vehicle.vehicle_id, "trips not ordered by departure");
      prev = trip.departure_s;
      first = false;
    }
  }

  std::set<std::pair<std::string, std::string>> passenger_keys;
  for (const auto& itinerary : scenario.itineraries) {
    const std::string& pid = itinerary.passenger_id;
    if (!is_valid_id(pid)) add("passenger", pid, "invalid or empty id");
    if (!passenger_keys.insert({pid, variant_name(itinerary.variant)}).second)
      add("passenger", pid, "duplicate (passenger, variant) itinerary");
    if (itinerary.appearance_s < 0) add("passenger", pid, "negative appearance time");
    if (itinerary.legs.empty()) {
      add("passenger", pid, "itinerary has no legs");
      continue;
    }
    for (std::size_t k = 0; k < itinerary.legs.size(); ++k) {
      const auto& leg = itinerary.legs[k];
      std::string where = "leg " + std::to_string(k);
      if (!line_ids.count(leg.line_id)) {
        add("passenger", pid, where + ": line " + leg.line_id + " does not exist");
        continue;
      }
      auto board = index.stop_position(leg.line_id, leg.board_stop);
      auto alight = index.stop_position(leg.line_id, leg.alight_stop);
      if (!board)
        add("passenger", pid, where + ": board stop " + leg.board_stop + " not on line " +
                                  leg.line_id);
      if (!alight)
        add("passenger", pid, where + ": alight stop " + leg.alight_stop + " not on line " +
                                  leg.line_id);
      if (board && alight && *board >= *alight)
        add("passenger", pid, where + ": board stop must precede alight stop on the line");
      if (k + 1 < itinerary.legs.size() &&
          leg.alight_stop != itinerary.legs[k + 1].board_stop) {
        add("passenger", pid,
            where + ": alight stop " + leg.alight_stop + " does not match next board stop " +
                itinerary.legs[k + 1].board_stop);
      }
    }
  }

  for (std::size_t i = 0; i < scenario.crimes.size(); ++i) {
    const auto& crime = scenario.crimes[i];
    std::string id = std::to_string(i);
    if (!finite_range(crime.lat, -90.0, 90.0))
      add("crime", id, "latitude out of range [-90, 90]");
    if (!finite_range(crime.lon, -180.0, 180.0))
      add("crime", id, "longitude out of range [-180, 180]");
    if (crime.occurred_at.find(',') != std::string::npos ||
        crime.occurred_at.find('\n') != std::string::npos)
      add("crime", id, "timestamp contains a delimiter character");
  }

  const auto& cfg = scenario.config;
  if (cfg.end_clock_s <= cfg.start_clock_s)
    add("config", "", "end_clock must be after start_clock");
  if (cfg.tick_s != kTickSeconds)
    add("config", "", "tick_s must be 60 (one-minute ticks)");
  if (!(std::isfinite(cfg.crime_radius_m) && cfg.crime_radius_m > 0))
    add("config", "", "crime_radius_m must be > 0");
  if (cfg.start_clock_s < 0) add("config", "", "start_clock must be >= 0");

  return report;
}

}  // namespace busim
