#include "busim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "busim/errors.hpp"
#include "busim/rng.hpp"
#include "busim/router.hpp"

namespace busim {

namespace {

// Coordinates live in a box roughly the size of a coastal metropolis; the
// exact place is irrelevant, the scale (kilometers across, hundreds of
// meters between stops) is not.
constexpr double kLatLo = -3.85, kLatHi = -3.69;
constexpr double kLonLo = -38.62, kLonHi = -38.40;
constexpr double kMetersPerDegLat = 111320.0;
constexpr double kHotspotSigmaM = 120.0;
constexpr double kBackgroundShare = 0.25;

double quantize(double v, double step) { return std::round(v / step) * step; }
double quantize_coord(double v) { return quantize(v, 1e-6); }
double quantize_ms(double v) { return quantize(v, 1e-3); }

std::string padded_id(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

void check_params(const SyntheticParams& p) {
  auto bad = [](const std::string& name) -> void {
    throw InvalidParams("infeasible synthetic parameter: " + name);
  };
  if (p.n_stops < 2) bad("n_stops (need >= 2)");
  if (p.n_lines < 1) bad("n_lines (need >= 1)");
  if (p.stops_per_line < 2) bad("stops_per_line (need >= 2)");
  if (p.stops_per_line > p.n_stops) bad("stops_per_line (exceeds n_stops)");
  if (p.n_vehicles < 0) bad("n_vehicles (negative)");
  if (p.trips_per_vehicle < 1) bad("trips_per_vehicle (need >= 1)");
  if (p.n_passengers < 0) bad("n_passengers (negative)");
  if (p.n_crimes < 0) bad("n_crimes (negative)");
  if (p.crime_hotspot_count < 0) bad("crime_hotspot_count (negative)");
  if (!(p.mean_edge_s_lo > 0.0)) bad("mean_edge_s_lo (need > 0)");
  if (p.mean_edge_s_hi < p.mean_edge_s_lo) bad("mean_edge_s_hi (below lo)");
  if (p.cv_lo < 0.0) bad("cv_lo (negative)");
  if (p.cv_hi < p.cv_lo) bad("cv_hi (below lo)");
  if (p.appearance_window_lo < 0) bad("appearance_window_lo (negative)");
  if (p.appearance_window_hi < p.appearance_window_lo) bad("appearance_window_hi (below lo)");
  if (p.terminal_transfer_bias < 0.0 || p.terminal_transfer_bias > 1.0)
    bad("terminal_transfer_bias (outside [0, 1])");
}

/// Distinct random sample of k indices out of n (partial Fisher-Yates).
std::vector<int> sample_indices(int n, int k, SplitMix64& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    auto j = rng.uniform_int(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

struct TransferOption {
  std::string stop;
  std::vector<std::string> inbound_lines;   // stop not first on the line
  std::vector<std::string> outbound_lines;  // stop not last on the line
};

}  // namespace

Scenario generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
  check_params(params);
  Scenario scenario;

  // Stops.
  {
    SplitMix64 rng(derive_stream(seed, "stops"));
    scenario.network.stops.reserve(static_cast<std::size_t>(params.n_stops));
    for (int i = 0; i < params.n_stops; ++i) {
      Stop s;
      s.id = padded_id("s", i, 4);
      s.lat = quantize_coord(rng.uniform(kLatLo, kLatHi));
      s.lon = quantize_coord(rng.uniform(kLonLo, kLonHi));
      scenario.network.stops.push_back(std::move(s));
    }
  }

  const int n_terminals = std::max(2, params.n_stops / 20);
  std::vector<int> terminal_indices;
  {
    SplitMix64 rng(derive_stream(seed, "terminals"));
    terminal_indices = sample_indices(params.n_stops, std::min(n_terminals, params.n_stops), rng);
    std::sort(terminal_indices.begin(), terminal_indices.end());
  }
  std::set<int> terminal_set(terminal_indices.begin(), terminal_indices.end());

  // Lines and the time edges they ride on.
  std::set<std::pair<std::string, std::string>> edge_seen;
  {
    SplitMix64 rng(derive_stream(seed, "lines"));
    for (int li = 0; li < params.n_lines; ++li) {
      std::vector<int> stops = sample_indices(params.n_stops, params.stops_per_line, rng);

      // Make sure the line touches a terminal, and (after the first line)
      // shares a stop with an earlier line so transfers are possible.
      auto contains = [&stops](int idx) {
        return std::find(stops.begin(), stops.end(), idx) != stops.end();
      };
      bool has_terminal = std::any_of(stops.begin(), stops.end(),
                                      [&](int s) { return terminal_set.count(s) > 0; });
      if (!has_terminal && !terminal_indices.empty()) {
        int terminal = terminal_indices[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(terminal_indices.size()) - 1))];
        if (!contains(terminal)) {
          auto slot = rng.uniform_int(1, params.stops_per_line - 1);
          stops[static_cast<std::size_t>(slot)] = terminal;
        }
      }
      if (li > 0) {
        const auto& prev = scenario.lines[static_cast<std::size_t>(rng.uniform_int(0, li - 1))];
        // pick a random stop of a previous line and splice it in
        for (int attempt = 0; attempt < 8; ++attempt) {
          const std::string& shared = prev.stop_sequence[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(prev.stop_sequence.size()) - 1))];
          int shared_idx = std::stoi(shared.substr(1));
          if (contains(shared_idx)) break;
          auto slot = rng.uniform_int(0, params.stops_per_line - 1);
          stops[static_cast<std::size_t>(slot)] = shared_idx;
          break;
        }
      }
      // splices may have introduced duplicates; collapse and keep length
      std::vector<int> unique_stops;
      for (int s : stops) {
        if (std::find(unique_stops.begin(), unique_stops.end(), s) == unique_stops.end())
          unique_stops.push_back(s);
      }
      while (static_cast<int>(unique_stops.size()) < 2) {
        int extra = static_cast<int>(rng.uniform_int(0, params.n_stops - 1));
        if (std::find(unique_stops.begin(), unique_stops.end(), extra) == unique_stops.end())
          unique_stops.push_back(extra);
      }

      LinePlan line;
      line.line_id = padded_id("L", li, 2);
      for (int s : unique_stops) {
        line.stop_sequence.push_back(scenario.network.stops[static_cast<std::size_t>(s)].id);
      }
      for (std::size_t i = 0; i + 1 < line.stop_sequence.size(); ++i) {
        auto key = std::make_pair(line.stop_sequence[i], line.stop_sequence[i + 1]);
        double mean = quantize_ms(rng.uniform(params.mean_edge_s_lo, params.mean_edge_s_hi));
        double cv = rng.uniform(params.cv_lo, params.cv_hi);
        if (edge_seen.insert(key).second) {
          scenario.network.edges.push_back(
              {key.first, key.second, mean, quantize_ms(cv * mean)});
        }
      }
      scenario.lines.push_back(std::move(line));
    }
  }

  // Vehicles: mostly stay on one line; occasionally chain onto another.
  {
    SplitMix64 rng(derive_stream(seed, "vehicles"));
    std::vector<double> line_duration(scenario.lines.size(), 0.0);
    ScenarioIndex index(scenario);
    for (std::size_t li = 0; li < scenario.lines.size(); ++li) {
      const auto& seq = scenario.lines[li].stop_sequence;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        line_duration[li] += index.edge(seq[i], seq[i + 1])->mean_s;
      }
    }
    const Clock window_span =
        std::max<Clock>(1, params.appearance_window_hi - params.appearance_window_lo);
    for (int vi = 0; vi < params.n_vehicles; ++vi) {
      VehicleSchedule vehicle;
      vehicle.vehicle_id = padded_id("v", vi, 3);
      vehicle.capacity = kDefaultCapacity;
      auto line_idx = rng.uniform_int(0, params.n_lines - 1);
      Clock departure = params.appearance_window_lo + rng.uniform_int(0, window_span / 3);
      for (int t = 0; t < params.trips_per_vehicle; ++t) {
        vehicle.trips.push_back(
            {scenario.lines[static_cast<std::size_t>(line_idx)].line_id, departure});
        Clock layover = 300 + rng.uniform_int(0, 600);
        departure += static_cast<Clock>(
                         std::ceil(line_duration[static_cast<std::size_t>(line_idx)])) +
                     layover;
        if (rng.next_unit() < 0.3) line_idx = rng.uniform_int(0, params.n_lines - 1);
      }
      scenario.vehicles.push_back(std::move(vehicle));
    }
  }

  // Transfer options: stops reachable on one line and continuable on another.
  std::vector<TransferOption> all_transfers;
  std::vector<TransferOption> terminal_transfers;
  {
    ScenarioIndex index(scenario);
    for (int si = 0; si < params.n_stops; ++si) {
      const std::string& stop_id = scenario.network.stops[static_cast<std::size_t>(si)].id;
      TransferOption option;
      option.stop = stop_id;
      for (const std::string& line_id : index.lines_at_stop(stop_id)) {
        int pos = *index.stop_position(line_id, stop_id);
        int len = static_cast<int>(index.line(line_id)->stop_sequence.size());
        if (pos > 0) option.inbound_lines.push_back(line_id);
        if (pos + 1 < len) option.outbound_lines.push_back(line_id);
      }
      bool usable = false;
      for (const auto& in : option.inbound_lines) {
        for (const auto& out : option.outbound_lines) {
          if (in != out) usable = true;
        }
      }
      if (!usable) continue;
      all_transfers.push_back(option);
      if (terminal_set.count(si)) terminal_transfers.push_back(option);
    }
  }

  // Passengers: terminal-biased actual routes plus router-built optimal ones.
  {
    SplitMix64 rng(derive_stream(seed, "passengers"));
    RoutingGraph graph = build_routing_graph(scenario.network, scenario.lines, 0.0);
    ScenarioIndex index(scenario);
    std::vector<PassengerItinerary> actuals;

    auto random_line = [&](SplitMix64& r) -> const LinePlan& {
      return scenario.lines[static_cast<std::size_t>(r.uniform_int(0, params.n_lines - 1))];
    };

    for (int pi = 0; pi < params.n_passengers; ++pi) {
      PassengerItinerary actual;
      actual.passenger_id = padded_id("p", pi, 5);
      actual.variant = Variant::kActual;
      actual.appearance_s = params.appearance_window_lo +
                            rng.uniform_int(0, params.appearance_window_hi -
                                                   params.appearance_window_lo);

      bool want_transfer = rng.next_unit() < 0.55 && !all_transfers.empty();
      bool built = false;
      if (want_transfer) {
        const auto& pool = (!terminal_transfers.empty() &&
                            rng.next_unit() < params.terminal_transfer_bias)
                               ? terminal_transfers
                               : all_transfers;
        const TransferOption& option = pool[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
        for (int attempt = 0; attempt < 8 && !built; ++attempt) {
          const std::string& in = option.inbound_lines[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(option.inbound_lines.size()) - 1))];
          const std::string& out = option.outbound_lines[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(option.outbound_lines.size()) - 1))];
          if (in == out) continue;
          int in_pos = *index.stop_position(in, option.stop);
          int out_pos = *index.stop_position(out, option.stop);
          int out_len = static_cast<int>(index.line(out)->stop_sequence.size());
          auto board_pos = rng.uniform_int(0, in_pos - 1);
          auto alight_pos = rng.uniform_int(out_pos + 1, out_len - 1);
          const std::string& origin =
              index.line(in)->stop_sequence[static_cast<std::size_t>(board_pos)];
          const std::string& dest =
              index.line(out)->stop_sequence[static_cast<std::size_t>(alight_pos)];
          if (origin == dest || origin == option.stop || dest == option.stop) continue;
          actual.legs = {{in, origin, option.stop}, {out, option.stop, dest}};
          built = true;
        }
      }
      if (!built) {
        for (int attempt = 0; attempt < 16 && !built; ++attempt) {
          const LinePlan& line = random_line(rng);
          int len = static_cast<int>(line.stop_sequence.size());
          if (len < 2) continue;
          auto board = rng.uniform_int(0, len - 2);
          auto alight = rng.uniform_int(board + 1, len - 1);
          actual.legs = {{line.line_id, line.stop_sequence[static_cast<std::size_t>(board)],
                          line.stop_sequence[static_cast<std::size_t>(alight)]}};
          built = true;
        }
      }
      if (!built) continue;  // degenerate network; skip this passenger
      actuals.push_back(std::move(actual));
    }

    for (const auto& actual : actuals) {
      auto routed = compute_time_optimal_route(graph, actual.origin(), actual.destination());
      // the actual itinerary is itself a path, so one must exist
      PassengerItinerary optimal = routed->itinerary;
      optimal.passenger_id = actual.passenger_id;
      optimal.appearance_s = actual.appearance_s;
      scenario.itineraries.push_back(actual);
      scenario.itineraries.push_back(std::move(optimal));
    }
  }

  // Crimes: uniform background plus Gaussian hotspots with Zipf weights,
  // which leaves crimes-per-stop heavy-tailed.
  {
    SplitMix64 rng(derive_stream(seed, "crimes"));
    std::vector<std::pair<double, double>> hotspots;
    if (params.crime_hotspot_count > 0) {
      std::vector<int> centers =
          sample_indices(params.n_stops, std::min(params.crime_hotspot_count, params.n_stops), rng);
      for (int c : centers) {
        const Stop& s = scenario.network.stops[static_cast<std::size_t>(c)];
        hotspots.emplace_back(s.lat, s.lon);
      }
    }
    std::vector<double> weights(hotspots.size());
    double total_weight = 0.0;
    for (std::size_t k = 0; k < hotspots.size(); ++k) {
      weights[k] = 1.0 / static_cast<double>(k + 1);
      total_weight += weights[k];
    }

    for (int ci = 0; ci < params.n_crimes; ++ci) {
      CrimeRecord crime;
      double lat, lon;
      double pick = rng.next_unit();
      if (hotspots.empty() || pick < kBackgroundShare) {
        lat = rng.uniform(kLatLo, kLatHi);
        lon = rng.uniform(kLonLo, kLonHi);
      } else {
        double roll = rng.next_unit() * total_weight;
        std::size_t k = 0;
        while (k + 1 < hotspots.size() && roll > weights[k]) {
          roll -= weights[k];
          ++k;
        }
        double north_m = rng.next_normal() * kHotspotSigmaM;
        double east_m = rng.next_normal() * kHotspotSigmaM;
        lat = hotspots[k].first + north_m / kMetersPerDegLat;
        lon = hotspots[k].second +
              east_m / (kMetersPerDegLat * std::cos(hotspots[k].first * std::numbers::pi / 180.0));
      }
      crime.lat = quantize_coord(std::clamp(lat, -90.0, 90.0));
      crime.lon = quantize_coord(std::clamp(lon, -180.0, 180.0));
      crime.type = static_cast<CrimeType>(rng.uniform_int(0, 2));
      char ts[40];
      std::snprintf(ts, sizeof(ts), "2015-%02d-%02dT%02d:%02d:00",
                    static_cast<int>(rng.uniform_int(1, 12)),
                    static_cast<int>(rng.uniform_int(1, 28)),
                    static_cast<int>(rng.uniform_int(0, 23)),
                    static_cast<int>(rng.uniform_int(0, 59)));
      crime.occurred_at = ts;
      scenario.crimes.push_back(std::move(crime));
    }
  }

  scenario.config = SimConfig{};
  return scenario;
}

Scenario make_funnel_scenario() {
  Scenario scenario;
  const double lat0 = -3.80;
  const double lon0 = -38.60;
  const double step = 0.01;  // about 1.1 km; keeps 200 m vicinities disjoint

  // Two identical corridors. In each: four origin stops feed a fast pair of
  // lines through a hub (sparse headways, crime hotspot) and a slow pair
  // through a terminal (frequent headways, quiet). The fast path is always
  // shorter in ride time, so time-optimal routing transfers at the hub.
  for (int c = 1; c <= 2; ++c) {
    double lat = lat0 + (c - 1) * 0.03;
    std::string cs = std::to_string(c);
    std::vector<std::string> origins, dests;
    for (int i = 1; i <= 4; ++i) {
      std::string id = "A" + cs + std::to_string(i);
      scenario.network.stops.push_back(
          {id, quantize_coord(lat), quantize_coord(lon0 + (i - 1) * step)});
      origins.push_back(id);
    }
    std::string hub = "H" + cs;
    std::string terminal = "T" + cs;
    const double hub_lat = quantize_coord(lat), hub_lon = quantize_coord(lon0 + 4 * step);
    const double term_lat = quantize_coord(lat), term_lon = quantize_coord(lon0 + 5 * step);
    scenario.network.stops.push_back({hub, hub_lat, hub_lon});
    scenario.network.stops.push_back({terminal, term_lat, term_lon});
    for (int i = 1; i <= 4; ++i) {
      std::string id = "B" + cs + std::to_string(i);
      scenario.network.stops.push_back(
          {id, quantize_coord(lat), quantize_coord(lon0 + (5 + i) * step)});
      dests.push_back(id);
    }

    auto add_edge = [&scenario](const std::string& a, const std::string& b, double mean) {
      scenario.network.edges.push_back({a, b, mean, 0.0});
    };
    add_edge(origins[0], origins[1], 60);
    add_edge(origins[1], origins[2], 60);
    add_edge(origins[2], origins[3], 60);
    add_edge(origins[3], hub, 60);        // fast spur
    add_edge(origins[3], terminal, 1800); // slow detour
    add_edge(hub, dests[0], 60);
    add_edge(terminal, dests[0], 1800);
    add_edge(dests[0], dests[1], 60);
    add_edge(dests[1], dests[2], 60);
    add_edge(dests[2], dests[3], 60);

    LinePlan fast_in{"F" + cs, {origins[0], origins[1], origins[2], origins[3], hub}};
    LinePlan fast_out{"G" + cs, {hub, dests[0], dests[1], dests[2], dests[3]}};
    LinePlan slow_in{"S" + cs, {origins[0], origins[1], origins[2], origins[3], terminal}};
    LinePlan slow_out{"U" + cs, {terminal, dests[0], dests[1], dests[2], dests[3]}};
    scenario.lines.push_back(fast_in);
    scenario.lines.push_back(fast_out);
    scenario.lines.push_back(slow_in);
    scenario.lines.push_back(slow_out);

    // Fast lines: 45-minute headways; each outbound departure leaves the hub
    // two minutes before the feeder arrives, so hub transfers wait ~43 min.
    VehicleSchedule feeder{"vfast" + cs + "a", kDefaultCapacity, {}};
    for (Clock dep : {Clock{5 * 3600 + 300}, Clock{5 * 3600 + 3000}, Clock{6 * 3600 + 2100},
                      Clock{7 * 3600 + 1200}}) {
      feeder.trips.push_back({fast_in.line_id, dep});
    }
    VehicleSchedule distributor{"vfast" + cs + "b", kDefaultCapacity, {}};
    for (Clock dep : {Clock{5 * 3600 + 360}, Clock{5 * 3600 + 3060}, Clock{6 * 3600 + 2160},
                      Clock{7 * 3600 + 1260}, Clock{8 * 3600 + 360}}) {
      distributor.trips.push_back({fast_out.line_id, dep});
    }
    // One early fleet vehicle that changes line between trips.
    VehicleSchedule mixed{"vmix" + cs, kDefaultCapacity,
                          {{fast_in.line_id, 4 * 3600 + 1800}, {fast_out.line_id, 4 * 3600 + 2400}}};
    scenario.vehicles.push_back(feeder);
    scenario.vehicles.push_back(distributor);
    scenario.vehicles.push_back(mixed);

    // Slow lines: 6-minute headways from 05:00 to 07:54, ten vehicles each
    // chaining three trips an hour apart.
    for (int k = 0; k < 10; ++k) {
      VehicleSchedule sv{"vslowS" + cs + padded_id("n", k, 2), kDefaultCapacity, {}};
      VehicleSchedule uv{"vslowU" + cs + padded_id("n", k, 2), kDefaultCapacity, {}};
      for (int rep = 0; rep < 3; ++rep) {
        Clock dep = 5 * 3600 + k * 360 + rep * 3600;
        sv.trips.push_back({slow_in.line_id, dep});
        uv.trips.push_back({slow_out.line_id, dep});
      }
      scenario.vehicles.push_back(sv);
      scenario.vehicles.push_back(uv);
    }

    // Crime: a 60-crime ring around the hub, a lone crime at the terminal,
    // two near the first destination.
    for (int k = 0; k < 60; ++k) {
      double angle = 2.0 * std::numbers::pi * k / 60.0;
      double north_m = 80.0 * std::cos(angle);
      double east_m = 80.0 * std::sin(angle);
      CrimeRecord crime;
      crime.lat = quantize_coord(hub_lat + north_m / kMetersPerDegLat);
      crime.lon = quantize_coord(
          hub_lon + east_m / (kMetersPerDegLat * std::cos(hub_lat * std::numbers::pi / 180.0)));
      crime.type = static_cast<CrimeType>(k % 3);
      crime.occurred_at = "2015-06-0" + std::to_string(1 + k % 9) + "T20:00:00";
      scenario.crimes.push_back(std::move(crime));
    }
    scenario.crimes.push_back({term_lat, term_lon, CrimeType::kTheft, "2015-07-01T10:00:00"});
    const double b1_lat = quantize_coord(lat), b1_lon = quantize_coord(lon0 + 6 * step);
    scenario.crimes.push_back({quantize_coord(b1_lat + 50.0 / kMetersPerDegLat), b1_lon,
                               CrimeType::kRobbery, "2015-07-02T11:00:00"});
    scenario.crimes.push_back({quantize_coord(b1_lat - 50.0 / kMetersPerDegLat), b1_lon,
                               CrimeType::kBurglary, "2015-07-03T12:00:00"});
  }

  // Passengers: three per (origin, destination) pair per corridor, appearing
  // through 05:00-07:00. Actual routes detour via the terminal; optimal ones
  // come from the router and transfer at the hub.
  RoutingGraph graph = build_routing_graph(scenario.network, scenario.lines, 0.0);
  int pid = 0;
  for (int c = 1; c <= 2; ++c) {
    std::string cs = std::to_string(c);
    for (int i = 1; i <= 4; ++i) {
      for (int j = 1; j <= 4; ++j) {
        for (int rep = 0; rep < 3; ++rep) {
          std::string origin = "A" + cs + std::to_string(i);
          std::string dest = "B" + cs + std::to_string(j);
          PassengerItinerary actual;
          actual.passenger_id = padded_id("p", pid, 3);
          actual.variant = Variant::kActual;
          actual.appearance_s = 5 * 3600 + (pid * 137) % 7200;
          actual.legs = {{"S" + cs, origin, "T" + cs}, {"U" + cs, "T" + cs, dest}};

          auto routed = compute_time_optimal_route(graph, origin, dest);
          PassengerItinerary optimal = routed->itinerary;
          optimal.passenger_id = actual.passenger_id;
          optimal.appearance_s = actual.appearance_s;

          scenario.itineraries.push_back(std::move(actual));
          scenario.itineraries.push_back(std::move(optimal));
          ++pid;
        }
      }
    }
  }

  scenario.config = SimConfig{};
  return scenario;
}

}  // namespace busim
