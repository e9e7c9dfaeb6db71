#include <benchmark/benchmark.h>

#include "busim/engine.hpp"
#include "busim/metrics.hpp"
#include "busim/powerlaw.hpp"
#include "busim/router.hpp"
#include "busim/rng.hpp"
#include "busim/synthetic.hpp"
#include "support/oracles.hpp"

namespace {

busim::SyntheticParams sized_params(int passengers) {
  busim::SyntheticParams p;
  p.n_stops = 100;
  p.n_lines = 10;
  p.stops_per_line = 12;
  p.n_vehicles = 50;
  p.trips_per_vehicle = 8;
  p.n_passengers = passengers;
  p.n_crimes = 2000;
  return p;
}

void FullDayRun(benchmark::State& state) {
  busim::Scenario scenario =
      busim::generate_synthetic(sized_params(static_cast<int>(state.range(0))), 7);
  for (auto _ : state) {
    auto report = busim::run_simulation(scenario, {busim::Variant::kActual, 17});
    benchmark::DoNotOptimize(report.log.events.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(FullDayRun)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void EdgeSampling(benchmark::State& state) {
  busim::SplitMix64 rng(1);
  busim::TimeEdge edge{"a", "b", 120.0, 30.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(busim::sample_edge_time(edge, rng));
  }
}
BENCHMARK(EdgeSampling);

void RoutePlanning(benchmark::State& state) {
  busim::Scenario scenario = busim::generate_synthetic(sized_params(0), 7);
  busim::RoutingGraph graph =
      busim::build_routing_graph(scenario.network, scenario.lines, 0.0);
  busim::SplitMix64 rng(5);
  const auto& stops = scenario.network.stops;
  for (auto _ : state) {
    const auto& origin = stops[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(stops.size()) - 1))];
    const auto& dest = stops[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(stops.size()) - 1))];
    if (origin.id == dest.id) continue;
    benchmark::DoNotOptimize(busim::compute_time_optimal_route(graph, origin.id, dest.id));
  }
}
BENCHMARK(RoutePlanning);

void SpatialJoin(benchmark::State& state) {
  busim::Scenario scenario = busim::generate_synthetic(sized_params(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        busim::crimes_per_stop(scenario.network, scenario.crimes, 200.0));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(scenario.network.stops.size()));
}
BENCHMARK(SpatialJoin);

void PowerLawFit(benchmark::State& state) {
  auto samples =
      busim::oracle::power_law_samples(2.0, 1.0, static_cast<int>(state.range(0)), 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(busim::fit_power_law(samples));
  }
}
BENCHMARK(PowerLawFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
