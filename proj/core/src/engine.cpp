#include "busim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "busim/errors.hpp"

namespace busim {

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::kDispatch: return "DISPATCH";
    case EventKind::kArriveStop: return "ARRIVE_STOP";
    case EventKind::kBoard: return "BOARD";
    case EventKind::kAlight: return "ALIGHT";
    case EventKind::kTripChange: return "TRIP_CHANGE";
    case EventKind::kBusRemoved: return "BUS_REMOVED";
    case EventKind::kSnapshot: return "SNAPSHOT";
  }
  return "SNAPSHOT";
}

std::optional<EventKind> parse_event_kind(const std::string& text) {
  if (text == "DISPATCH") return EventKind::kDispatch;
  if (text == "ARRIVE_STOP") return EventKind::kArriveStop;
  if (text == "BOARD") return EventKind::kBoard;
  if (text == "ALIGHT") return EventKind::kAlight;
  if (text == "TRIP_CHANGE") return EventKind::kTripChange;
  if (text == "BUS_REMOVED") return EventKind::kBusRemoved;
  if (text == "SNAPSHOT") return EventKind::kSnapshot;
  return std::nullopt;
}

std::string passenger_phase_name(PassengerPhase p) {
  switch (p) {
    case PassengerPhase::kNotYetAppeared: return "NOT_YET_APPEARED";
    case PassengerPhase::kWaiting: return "WAITING";
    case PassengerPhase::kOnboard: return "ONBOARD";
    case PassengerPhase::kArrived: return "ARRIVED";
  }
  return "NOT_YET_APPEARED";
}

std::optional<PassengerPhase> parse_passenger_phase(const std::string& text) {
  if (text == "NOT_YET_APPEARED") return PassengerPhase::kNotYetAppeared;
  if (text == "WAITING") return PassengerPhase::kWaiting;
  if (text == "ONBOARD") return PassengerPhase::kOnboard;
  if (text == "ARRIVED") return PassengerPhase::kArrived;
  return std::nullopt;
}

void EventLog::append(Clock clock_s, EventKind kind, std::string subject,
                      std::string payload) {
  events.push_back({clock_s, kind, std::move(subject), std::move(payload)});
}

double sample_edge_time(const TimeEdge& edge, SplitMix64& rng) {
  double z = rng.next_normal();  // drawn unconditionally: fixed rng consumption
  if (edge.std_s == 0.0) return std::max(1.0, edge.mean_s);
  return std::max(1.0, edge.mean_s + edge.std_s * z);
}

struct Simulation::Impl {
  const Scenario* scenario = nullptr;
  RunOptions options;
  ScenarioIndex index;
  Clock clock = 0;
  Clock ticks = 0;
  bool finished = false;

  // Selected-variant itineraries, copied so PassengerState can hold stable
  // pointers. Never resized after construction.
  std::vector<PassengerItinerary> itineraries;
  std::vector<PassengerState> passengers;  // sorted by passenger_id
  std::unordered_map<std::string, std::size_t> passenger_index;
  std::vector<std::size_t> activation_order;  // by (appearance, id)
  std::size_t next_activation = 0;

  std::vector<BusState> buses;  // sorted by vehicle_id
  std::unordered_map<std::string, std::size_t> bus_index;

  std::unordered_map<std::string, std::vector<std::size_t>> waiting_at_stop;

  EventLog log;

  Impl(const Scenario& s, const RunOptions& opt) : scenario(&s), options(opt), index(s) {}

  PassengerState& passenger_at(std::size_t i) { return passengers[i]; }

  void arrive(BusState& bus);
  void process_stop_arrival(BusState& bus, const std::string& stop);
  void chain_trips(BusState& bus);
  void snapshot();
};

Simulation::Simulation(const Scenario& scenario, const RunOptions& options)
    : impl_(std::make_unique<Impl>(scenario, options)) {
  auto validation = validate_scenario(scenario);
  if (!validation.ok()) throw ValidationError(std::move(validation));

  Impl& im = *impl_;
  im.clock = scenario.config.start_clock_s;

  im.itineraries = scenario.itineraries_of(options.variant);
  std::sort(im.itineraries.begin(), im.itineraries.end(),
            [](const auto& a, const auto& b) { return a.passenger_id < b.passenger_id; });
  im.passengers.reserve(im.itineraries.size());
  for (const auto& itinerary : im.itineraries) {
    PassengerState p;
    p.passenger_id = itinerary.passenger_id;
    p.itinerary = &itinerary;
    im.passenger_index.emplace(p.passenger_id, im.passengers.size());
    im.passengers.push_back(std::move(p));
  }
  im.activation_order.resize(im.passengers.size());
  for (std::size_t i = 0; i < im.passengers.size(); ++i) im.activation_order[i] = i;
  std::sort(im.activation_order.begin(), im.activation_order.end(),
            [&im](std::size_t a, std::size_t b) {
              const auto& pa = *im.passengers[a].itinerary;
              const auto& pb = *im.passengers[b].itinerary;
              if (pa.appearance_s != pb.appearance_s) return pa.appearance_s < pb.appearance_s;
              return pa.passenger_id < pb.passenger_id;
            });

  std::vector<const VehicleSchedule*> schedules;
  for (const auto& v : scenario.vehicles) schedules.push_back(&v);
  std::sort(schedules.begin(), schedules.end(), [](const auto* a, const auto* b) {
    return a->vehicle_id < b->vehicle_id;
  });
  im.buses.reserve(schedules.size());
  for (const auto* schedule : schedules) {
    BusState bus(derive_stream(options.seed, "vehicle:" + schedule->vehicle_id));
    bus.vehicle_id = schedule->vehicle_id;
    bus.schedule = schedule;
    im.bus_index.emplace(bus.vehicle_id, im.buses.size());
    im.buses.push_back(std::move(bus));
  }
}

Simulation::~Simulation() = default;

void Simulation::activate_passengers() {
  Impl& im = *impl_;
  while (im.next_activation < im.activation_order.size()) {
    PassengerState& p = im.passengers[im.activation_order[im.next_activation]];
    if (p.itinerary->appearance_s > im.clock) break;
    p.phase = PassengerPhase::kWaiting;
    p.wait_start_s = p.itinerary->appearance_s;
    im.waiting_at_stop[p.current_leg().board_stop].push_back(
        im.activation_order[im.next_activation]);
    ++im.next_activation;
  }
}

std::vector<std::string> Simulation::dispatch_step() {
  Impl& im = *impl_;
  std::vector<std::string> dispatched;
  for (BusState& bus : im.buses) {
    if (bus.phase != BusPhase::kPending) continue;
    const Trip& trip = bus.schedule->trips[bus.trip_cursor];
    if (trip.departure_s > im.clock) continue;
    const LinePlan* line = im.index.line(trip.line_id);
    bus.phase = BusPhase::kEnRoute;
    bus.current_line = trip.line_id;
    bus.stop_index = 0;
    bus.current_stop = line->stop_sequence[0];
    bus.next_stop = line->stop_sequence[1];
    // First edge is sampled at dispatch; observably equivalent to sampling
    // at the first move and keeps the state machine simpler.
    bus.remaining_edge_s =
        sample_edge_time(*im.index.edge(bus.current_stop, bus.next_stop), bus.rng);
    im.log.append(im.clock, EventKind::kDispatch, bus.vehicle_id,
                  trip.line_id + ":" + bus.current_stop + ":" +
                      std::to_string(bus.trip_cursor));
    im.process_stop_arrival(bus, bus.current_stop);
    dispatched.push_back(bus.vehicle_id);
  }
  return dispatched;
}

void Simulation::move_bus(BusState& bus) {
  Impl& im = *impl_;
  if (bus.phase != BusPhase::kEnRoute) return;
  double budget = static_cast<double>(kTickSeconds);
  while (budget > 0.0 && bus.phase == BusPhase::kEnRoute) {
    if (bus.remaining_edge_s > budget) {
      bus.remaining_edge_s -= budget;
      budget = 0.0;
    } else if (bus.remaining_edge_s == budget) {
      // Exactly the budget: the stretch completes with this tick.
      budget = 0.0;
      im.arrive(bus);
    } else {
      budget -= bus.remaining_edge_s;
      im.arrive(bus);
    }
  }
}

void Simulation::move_bus(const std::string& vehicle_id) {
  auto it = impl_->bus_index.find(vehicle_id);
  if (it == impl_->bus_index.end()) return;
  move_bus(impl_->buses[it->second]);
}

void Simulation::Impl::arrive(BusState& bus) {
  bus.stop_index += 1;
  bus.current_stop = bus.next_stop;
  bus.remaining_edge_s = 0.0;
  log.append(clock, EventKind::kArriveStop, bus.vehicle_id,
             bus.current_line + ":" + bus.current_stop);
  process_stop_arrival(bus, bus.current_stop);
  const LinePlan* line = index.line(bus.current_line);
  if (static_cast<std::size_t>(bus.stop_index) + 1 == line->stop_sequence.size()) {
    chain_trips(bus);
  } else {
    bus.next_stop = line->stop_sequence[static_cast<std::size_t>(bus.stop_index) + 1];
    bus.remaining_edge_s =
        sample_edge_time(*index.edge(bus.current_stop, bus.next_stop), bus.rng);
  }
}

void Simulation::Impl::process_stop_arrival(BusState& bus, const std::string& stop) {
  // Alight before board: frees seats first and never violates capacity.
  std::vector<std::string> still_onboard;
  still_onboard.reserve(bus.onboard.size());
  for (const std::string& pid : bus.onboard) {
    PassengerState& p = passengers[passenger_index.at(pid)];
    const ItineraryLeg& leg = p.current_leg();
    if (leg.alight_stop != stop) {
      still_onboard.push_back(pid);
      continue;
    }
    p.alighted_at.push_back(clock);
    if (p.on_final_leg()) {
      p.phase = PassengerPhase::kArrived;
      log.append(clock, EventKind::kAlight, pid,
                 bus.vehicle_id + ":" + stop + ":" + std::to_string(p.leg_cursor) +
                     ":final");
    } else {
      p.leg_cursor += 1;
      p.phase = PassengerPhase::kWaiting;
      p.wait_start_s = clock;
      waiting_at_stop[p.current_leg().board_stop].push_back(passenger_index.at(pid));
      log.append(clock, EventKind::kAlight, pid,
                 bus.vehicle_id + ":" + stop + ":" + std::to_string(p.leg_cursor - 1) +
                     ":transfer");
    }
  }
  bus.onboard = std::move(still_onboard);

  auto pool_it = waiting_at_stop.find(stop);
  if (pool_it == waiting_at_stop.end()) return;
  std::vector<std::size_t>& pool = pool_it->second;

  // Queue discipline: order of arrival at the stop (appearance time for
  // first legs, alight clock for transfers), passenger_id tiebreak.
  std::vector<std::size_t> candidates;
  for (std::size_t idx : pool) {
    const PassengerState& p = passengers[idx];
    if (p.phase != PassengerPhase::kWaiting) continue;
    const ItineraryLeg& leg = p.current_leg();
    if (leg.line_id == bus.current_line && leg.board_stop == stop) {
      candidates.push_back(idx);
    }
  }
  std::sort(candidates.begin(), candidates.end(), [this](std::size_t a, std::size_t b) {
    const PassengerState& pa = passengers[a];
    const PassengerState& pb = passengers[b];
    if (pa.wait_start_s != pb.wait_start_s) return pa.wait_start_s < pb.wait_start_s;
    return pa.passenger_id < pb.passenger_id;
  });

  std::vector<std::size_t> boarded;
  for (std::size_t idx : candidates) {
    if (static_cast<int>(bus.onboard.size()) >= bus.capacity()) break;  // wait for the next vehicle
    PassengerState& p = passengers[idx];
    p.phase = PassengerPhase::kOnboard;
    p.boarded_at.push_back(clock);
    bus.onboard.push_back(p.passenger_id);
    boarded.push_back(idx);
    log.append(clock, EventKind::kBoard, p.passenger_id,
               bus.vehicle_id + ":" + stop + ":" + std::to_string(p.leg_cursor) + ":" +
                   std::to_string(p.wait_start_s));
  }
  if (!boarded.empty()) {
    pool.erase(std::remove_if(pool.begin(), pool.end(),
                              [&boarded](std::size_t idx) {
                                return std::find(boarded.begin(), boarded.end(), idx) !=
                                       boarded.end();
                              }),
               pool.end());
  }
}

void Simulation::Impl::chain_trips(BusState& bus) {
  if (bus.trip_cursor + 1 < bus.schedule->trips.size()) {
    std::string old_line = bus.current_line;
    bus.trip_cursor += 1;
    const Trip& trip = bus.schedule->trips[bus.trip_cursor];
    const LinePlan* line = index.line(trip.line_id);
    bus.current_line = trip.line_id;
    bus.stop_index = 0;
    bus.current_stop = line->stop_sequence[0];
    bus.next_stop.clear();
    bus.remaining_edge_s = 0.0;
    bus.phase = BusPhase::kPending;  // moves again once the trip's departure is reached
    log.append(clock, EventKind::kTripChange, bus.vehicle_id,
               old_line + ":" + trip.line_id + ":" + std::to_string(bus.trip_cursor));
    return;
  }
  // No trips left. Anyone still aboard is force-alighted and flagged; a
  // validated scenario never gets here with passengers aboard, but the
  // conservation ledger must stay auditable either way.
  int stranded = 0;
  for (const std::string& pid : bus.onboard) {
    PassengerState& p = passengers[passenger_index.at(pid)];
    p.alighted_at.push_back(clock);
    p.phase = PassengerPhase::kWaiting;
    p.wait_start_s = clock;
    p.stranded = true;
    ++stranded;
    log.append(clock, EventKind::kAlight, pid,
               bus.vehicle_id + ":" + bus.current_stop + ":" +
                   std::to_string(p.leg_cursor) + ":stranded");
  }
  bus.onboard.clear();
  bus.phase = BusPhase::kRemoved;
  log.append(clock, EventKind::kBusRemoved, bus.vehicle_id,
             bus.current_stop + ":" + std::to_string(stranded));
}

void Simulation::Impl::snapshot() {
  std::string payload;
  for (const BusState& bus : buses) {
    if (bus.phase != BusPhase::kEnRoute) continue;
    if (!payload.empty()) payload += ';';
    payload += bus.vehicle_id + ":" + std::to_string(bus.onboard.size());
  }
  log.append(clock, EventKind::kSnapshot, "fleet", payload);
}

bool Simulation::tick() {
  Impl& im = *impl_;
  if (im.finished) return false;
  activate_passengers();
  dispatch_step();
  for (BusState& bus : im.buses) move_bus(bus);
  im.snapshot();
  im.ticks += 1;

  bool fleet_done = std::all_of(im.buses.begin(), im.buses.end(), [](const BusState& b) {
    return b.phase == BusPhase::kRemoved;
  });
  im.clock += kTickSeconds;
  if (im.clock >= im.scenario->config.end_clock_s || fleet_done) im.finished = true;
  return !im.finished;
}

SimulationReport Simulation::run() {
  Impl& im = *impl_;
  while (tick()) {
  }
  SimulationReport report;
  report.variant = im.options.variant;
  report.seed = im.options.seed;
  report.config = im.scenario->config;
  report.config.rng_seed = im.options.seed;
  report.ticks = im.ticks;
  report.log = im.log;
  report.passengers.reserve(im.passengers.size());
  for (const PassengerState& p : im.passengers) {
    report.passengers.push_back({p.passenger_id, p.phase, p.leg_cursor, p.stranded});
  }
  return report;
}

Clock Simulation::clock() const { return impl_->clock; }
bool Simulation::finished() const { return impl_->finished; }
const EventLog& Simulation::log() const { return impl_->log; }

const BusState* Simulation::bus(const std::string& vehicle_id) const {
  auto it = impl_->bus_index.find(vehicle_id);
  return it == impl_->bus_index.end() ? nullptr : &impl_->buses[it->second];
}

const PassengerState* Simulation::passenger(const std::string& passenger_id) const {
  auto it = impl_->passenger_index.find(passenger_id);
  return it == impl_->passenger_index.end() ? nullptr : &impl_->passengers[it->second];
}

SimulationReport run_simulation(const Scenario& scenario, const RunOptions& options) {
  Simulation sim(scenario, options);
  return sim.run();
}

}  // namespace busim
