#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "busim/domain.hpp"
#include "busim/indicators.hpp"
#include "busim/rng.hpp"

namespace busim {

enum class EventKind {
  kDispatch,
  kArriveStop,
  kBoard,
  kAlight,
  kTripChange,
  kBusRemoved,
  kSnapshot,
};

std::string event_kind_name(EventKind k);
std::optional<EventKind> parse_event_kind(const std::string& text);

/// One log record. Events within a tick carry the tick's clock; the
/// payload layout per kind is documented in docs/file_formats.md and is
/// what the exported `clock_s,kind,subject,payload` file contains.
struct Event {
  Clock clock_s = 0;
  EventKind kind = EventKind::kSnapshot;
  std::string subject;
  std::string payload;
  bool operator==(const Event&) const = default;
};

struct EventLog {
  std::vector<Event> events;
  bool operator==(const EventLog&) const = default;

  void append(Clock clock_s, EventKind kind, std::string subject, std::string payload);
};

enum class PassengerPhase { kNotYetAppeared, kWaiting, kOnboard, kArrived };

std::string passenger_phase_name(PassengerPhase p);
std::optional<PassengerPhase> parse_passenger_phase(const std::string& text);

/// Runtime state of one passenger. Phases only ever advance:
/// NOT_YET_APPEARED -> (WAITING -> ONBOARD)* -> ARRIVED.
struct PassengerState {
  std::string passenger_id;
  const PassengerItinerary* itinerary = nullptr;
  int leg_cursor = 0;
  PassengerPhase phase = PassengerPhase::kNotYetAppeared;
  Clock wait_start_s = 0;             // appearance, or alight clock after a transfer
  std::vector<Clock> boarded_at;      // per completed-or-current leg
  std::vector<Clock> alighted_at;
  bool stranded = false;

  const ItineraryLeg& current_leg() const { return itinerary->legs[static_cast<std::size_t>(leg_cursor)]; }
  bool on_final_leg() const {
    return static_cast<std::size_t>(leg_cursor) + 1 == itinerary->legs.size();
  }
};

enum class BusPhase {
  kPending,   // waiting for the current trip's departure time
  kEnRoute,   // moving along the current trip
  kRemoved,   // all trips done
};

/// Runtime state of one vehicle.
struct BusState {
  std::string vehicle_id;
  const VehicleSchedule* schedule = nullptr;
  BusPhase phase = BusPhase::kPending;
  std::size_t trip_cursor = 0;
  std::string current_line;
  int stop_index = -1;                // position of current_stop in the line
  std::string current_stop;           // last visited stop
  std::string next_stop;
  double remaining_edge_s = 0.0;
  std::vector<std::string> onboard;   // boarding order
  SplitMix64 rng;                     // per-vehicle edge-sampling stream

  explicit BusState(std::uint64_t stream_seed) : rng(stream_seed) {}
  int capacity() const { return schedule->capacity; }
};

/// Draws a traversal time for an edge: a Gaussian with the edge's mean and
/// standard deviation, floored at 1 s (a non-positive travel time is
/// physically meaningless). std_s == 0 returns the mean exactly. Consumes
/// exactly two raw draws from the rng whatever the outcome.
double sample_edge_time(const TimeEdge& edge, SplitMix64& rng);

struct RunOptions {
  Variant variant = Variant::kActual;
  std::uint64_t seed = 0;
};

struct PassengerOutcome {
  std::string passenger_id;
  PassengerPhase phase = PassengerPhase::kNotYetAppeared;
  int leg_cursor = 0;
  bool stranded = false;
  bool operator==(const PassengerOutcome&) const = default;
};

/// Result of one run: the event log, final passenger states and, once
/// finalize_report has been applied, the computed indicators.
struct SimulationReport {
  Variant variant = Variant::kActual;
  std::uint64_t seed = 0;
  SimConfig config;
  Clock ticks = 0;
  EventLog log;
  std::vector<PassengerOutcome> passengers;  // sorted by id

  bool finalized = false;
  WaitingTimes waiting;
  OccupancyHistogram occupancy;
  std::vector<StopCrimeProfile> transfer_crime;  // sorted by stop id

  bool operator==(const SimulationReport&) const = default;
};

/// The discrete-event core. One instance runs one scenario variant with a
/// one-minute tick. Step methods are exposed so tests can drive single
/// ticks; run() loops to the end clock or until every bus finished all of
/// its trips. Single-threaded by contract: within a tick, agent
/// interactions are order-sensitive, so all iteration is in sorted-id
/// order and replays identically for a fixed (scenario, seed).
class Simulation {
 public:
  /// Throws ValidationError if the scenario does not validate.
  Simulation(const Scenario& scenario, const RunOptions& options);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Moves passengers with appearance_time <= clock into WAITING.
  void activate_passengers();
  /// Starts every trip whose departure has been reached; returns the ids
  /// of vehicles dispatched this tick, in vehicle_id order.
  std::vector<std::string> dispatch_step();
  /// Spends this tick's 60 s budget on one bus.
  void move_bus(BusState& bus);
  /// Same, addressed by vehicle id; no-op for unknown ids.
  void move_bus(const std::string& vehicle_id);
  /// Runs one full tick: activation, dispatch, moves, snapshot. Returns
  /// false when the simulation is over (end clock reached or fleet done).
  bool tick();
  /// Ticks to completion and returns the (unfinalized) report.
  SimulationReport run();

  Clock clock() const;
  bool finished() const;
  const EventLog& log() const;
  const BusState* bus(const std::string& vehicle_id) const;
  const PassengerState* passenger(const std::string& passenger_id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Validates, runs one variant of the scenario, returns the report.
SimulationReport run_simulation(const Scenario& scenario, const RunOptions& options);

}  // namespace busim
