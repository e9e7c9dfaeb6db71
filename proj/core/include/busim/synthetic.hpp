#pragma once

#include <cstdint>

#include "busim/domain.hpp"

namespace busim {

/// Knobs for the synthetic scenario generator, a desk-scale stand-in for
/// the proprietary city data. All counts except passengers and crimes must
/// be at least 1; ranges may be point-valued.
struct SyntheticParams {
  int n_stops = 100;
  int n_lines = 10;
  int stops_per_line = 12;
  int n_vehicles = 50;
  int trips_per_vehicle = 6;
  int n_passengers = 1000;
  int n_crimes = 5000;
  int crime_hotspot_count = 5;
  double mean_edge_s_lo = 60.0;   // seconds
  double mean_edge_s_hi = 300.0;
  double cv_lo = 0.1;             // sigma/mu
  double cv_hi = 0.5;
  Clock appearance_window_lo = 5 * 3600;
  Clock appearance_window_hi = 22 * 3600;
  /// Probability that a two-leg actual route transfers at a terminal stop
  /// rather than an arbitrary shared stop. Encodes the observed preference
  /// for exchanging buses at terminals.
  double terminal_transfer_bias = 0.8;
};

/// Deterministic synthetic scenario: fixed (params, seed) always yields
/// the same scenario, byte-identical once serialized. Crimes are a mixture
/// of uniform background and Gaussian hotspots so crimes-per-stop is
/// heavy-tailed. Every passenger gets an ACTUAL itinerary (terminal-biased
/// transfers) and an OPTIMAL one from the router. Output always validates.
/// Throws InvalidParams naming the offending parameter.
Scenario generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

/// The bundled "funnel" scenario: time-optimal routes concentrate
/// transfers on two hub stops served by sparse headways and surrounded by
/// crime hotspots, while the actual routes detour through two frequent,
/// quiet terminals. Deterministic; used to reproduce the qualitative
/// actual-vs-optimal effects at desk scale.
Scenario make_funnel_scenario();

}  // namespace busim
