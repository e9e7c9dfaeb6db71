// Acceptance suite: one criterion per check, one PASS/FAIL line each,
// nonzero exit if anything fails. Tolerances are pinned in the checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "busim/engine.hpp"
#include "busim/geo.hpp"
#include "busim/metrics.hpp"
#include "busim/powerlaw.hpp"
#include "busim/report_io.hpp"
#include "busim/router.hpp"
#include "busim/rng.hpp"
#include "busim/scenario_io.hpp"
#include "busim/synthetic.hpp"
#include "support/oracles.hpp"

using namespace busim;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::string name;
  std::function<void(std::string&)> run;  // throws or appends to detail on failure
};

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

SyntheticParams large_params() {
  SyntheticParams p;
  p.n_stops = 100;
  p.n_lines = 10;
  p.stops_per_line = 12;
  p.n_vehicles = 50;
  p.trips_per_vehicle = 8;
  p.n_passengers = 10000;
  p.n_crimes = 2000;
  return p;
}

// C1: capacity and conservation on a day-long 10k-passenger run, < 10 s.
void check_capacity_conservation(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  Scenario scenario = generate_synthetic(large_params(), 2026);
  SimulationReport report = run_simulation(scenario, {Variant::kActual, 17});
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::int64_t snapshot_entries = 0;
  std::map<std::string, int> boards, alights;
  std::map<std::string, int> onboard_now;
  std::set<std::string> stranded_in_log;
  for (const auto& e : report.log.events) {
    switch (e.kind) {
      case EventKind::kSnapshot:
        if (!e.payload.empty()) {
          for (const auto& entry : split(e.payload, ';')) {
            int count = std::stoi(split(entry, ':')[1]);
            require(count >= 0 && count <= 80, "snapshot onboard count out of [0, 80]");
            ++snapshot_entries;
          }
        }
        break;
      case EventKind::kBoard:
        ++boards[e.subject];
        ++onboard_now[e.subject];
        require(onboard_now[e.subject] == 1, "boarded while already onboard");
        break;
      case EventKind::kAlight: {
        ++alights[e.subject];
        --onboard_now[e.subject];
        require(onboard_now[e.subject] == 0, "alight without boarding");
        if (split(e.payload, ':')[3] == "stranded") stranded_in_log.insert(e.subject);
        break;
      }
      default:
        break;
    }
  }
  std::int64_t served = 0;
  for (const auto& p : report.passengers) {
    int final_onboard = p.phase == PassengerPhase::kOnboard ? 1 : 0;
    auto b = boards.find(p.passenger_id);
    int n_boards = b == boards.end() ? 0 : b->second;
    auto a = alights.find(p.passenger_id);
    int n_alights = a == alights.end() ? 0 : a->second;
    require(n_boards == n_alights + final_onboard, "conservation violated");
    require(p.stranded == (stranded_in_log.count(p.passenger_id) > 0),
            "stranded flag does not match the log");
    if (n_boards > 0) ++served;
  }
  require(elapsed < 10.0, "runtime exceeded 10 s");
  std::ostringstream os;
  os << report.log.events.size() << " events, " << snapshot_entries
     << " snapshot entries, " << served << "/" << report.passengers.size()
     << " passengers served, " << std::fixed << elapsed << " s";
  detail = os.str();
}

// C2: byte-identical outputs for equal seeds; traversal changes across seeds.
void check_determinism(std::string& detail) {
  SyntheticParams params = large_params();
  params.n_passengers = 800;
  Scenario scenario = generate_synthetic(params, 7);

  SimulationReport a = run_simulation(scenario, {Variant::kActual, 100});
  SimulationReport b = run_simulation(scenario, {Variant::kActual, 100});
  require(a == b, "reports differ for equal seeds");

  AnalysisParams ap;
  finalize_report(a, scenario, ap);
  finalize_report(b, scenario, ap);
  fs::path da = fs::temp_directory_path() / "busim_acc_det_a";
  fs::path db = fs::temp_directory_path() / "busim_acc_det_b";
  fs::remove_all(da);
  fs::remove_all(db);
  write_report(a, da);
  write_report(b, db);
  for (const auto& entry : fs::directory_iterator(da)) {
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(db / entry.path().filename(), std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    require(sa.str() == sb.str(), "serialized reports differ byte-wise");
  }

  SimulationReport c = run_simulation(scenario, {Variant::kActual, 101});
  auto arrivals = [](const SimulationReport& r) {
    std::vector<std::pair<Clock, std::string>> out;
    for (const auto& e : r.log.events) {
      if (e.kind == EventKind::kArriveStop) out.emplace_back(e.clock_s, e.subject + e.payload);
    }
    return out;
  };
  require(arrivals(a) != arrivals(c), "seed change did not move any edge traversal");
  detail = "equal-seed byte-identical; seed change altered arrivals";
}

// C3: sampler fidelity at (120, 30), exactness at sigma 0, 1 s floor.
void check_sampler(std::string& detail) {
  SplitMix64 rng(314159);
  TimeEdge edge{"a", "b", 120.0, 30.0};
  const int n = 100000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    double v = sample_edge_time(edge, rng);
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / n;
  double stddev = std::sqrt(sum_sq / n - mean * mean);
  require(std::abs(mean - 120.0) <= 1.0, "sample mean off by more than 1 s");
  require(std::abs(stddev - 30.0) <= 1.0, "sample std off by more than 1 s");

  TimeEdge flat{"a", "b", 123.0, 0.0};
  for (int i = 0; i < 1000; ++i) require(sample_edge_time(flat, rng) == 123.0, "sigma=0 not exact");

  TimeEdge wild{"a", "b", 30.0, 60.0};
  for (int i = 0; i < 50000; ++i) require(sample_edge_time(wild, rng) >= 1.0, "draw below 1 s");
  std::ostringstream os;
  os << "mean " << mean << ", std " << stddev;
  detail = os.str();
}

// C4: sigma-zero arrivals equal the closed-form tick-budget arithmetic.
void check_sigma_zero_oracle(std::string& detail) {
  Scenario s;
  std::vector<std::string> seq = {"S1", "S2", "S3", "S4", "S5", "S6"};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    s.network.stops.push_back({seq[i], -3.8, -38.6 + 0.001 * static_cast<double>(i)});
  }
  std::vector<double> edges = {90.0, 60.0, 30.0, 45.0, 200.0};
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    s.network.edges.push_back({seq[i], seq[i + 1], edges[i], 0.0});
  }
  s.lines = {{"L1", seq}};
  s.vehicles = {{"v1", 80, {{"L1", 18000}}}};

  SimulationReport report = run_simulation(s, {Variant::kActual, 1});
  std::vector<Clock> got;
  for (const auto& e : report.log.events) {
    if (e.kind == EventKind::kArriveStop) got.push_back(e.clock_s);
  }
  // cumulative 90,150,180,225,425 -> ticks 2,3,3,4,8 -> clocks below
  std::vector<Clock> frozen = {18060, 18120, 18120, 18180, 18420};
  require(got == frozen, "arrival clocks do not match the frozen hand computation");
  require(got == oracle::deterministic_arrival_clocks(18000, edges),
          "arrival clocks do not match the closed form");
  detail = "5 arrivals, exact match";
}

// C5: router equals exhaustive enumeration on 200 random small networks.
void check_router_optimality(std::string& detail) {
  SplitMix64 rng(60902);
  int checked = 0, reachable = 0;
  while (checked < 200) {
    Scenario s;
    int n_stops = static_cast<int>(rng.uniform_int(4, 8));
    for (int i = 0; i < n_stops; ++i) {
      s.network.stops.push_back({"S" + std::to_string(i), -3.8, -38.6 + 0.001 * i});
    }
    int n_lines = static_cast<int>(rng.uniform_int(1, 3));
    for (int li = 0; li < n_lines; ++li) {
      int len = static_cast<int>(rng.uniform_int(2, n_stops));
      std::vector<int> pool;
      for (int i = 0; i < n_stops; ++i) pool.push_back(i);
      for (int i = 0; i < len; ++i) {
        auto j = rng.uniform_int(i, n_stops - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      LinePlan line{"L" + std::to_string(li), {}};
      for (int i = 0; i < len; ++i) line.stop_sequence.push_back("S" + std::to_string(pool[static_cast<std::size_t>(i)]));
      for (std::size_t i = 0; i + 1 < line.stop_sequence.size(); ++i) {
        bool exists = false;
        for (const auto& e : s.network.edges) {
          if (e.from == line.stop_sequence[i] && e.to == line.stop_sequence[i + 1]) exists = true;
        }
        if (!exists) {
          s.network.edges.push_back({line.stop_sequence[i], line.stop_sequence[i + 1],
                                     static_cast<double>(rng.uniform_int(30, 600)), 0.0});
        }
      }
      s.lines.push_back(std::move(line));
    }
    auto o = rng.uniform_int(0, n_stops - 1);
    auto d = rng.uniform_int(0, n_stops - 1);
    if (o == d) continue;
    std::string origin = "S" + std::to_string(o);
    std::string dest = "S" + std::to_string(d);
    RoutingGraph g = build_routing_graph(s.network, s.lines, 0.0);
    auto routed = compute_time_optimal_route(g, origin, dest);
    auto best = oracle::brute_force_best_time(s.network, s.lines, origin, dest, 0.0);
    require(routed.has_value() == best.has_value(), "reachability disagreement");
    if (routed) {
      require(routed->expected_total_s == *best, "cost differs from enumeration minimum");
      ++reachable;
    }
    ++checked;
  }
  std::ostringstream os;
  os << checked << " networks, " << reachable << " reachable pairs, exact agreement";
  detail = os.str();
}

// C6: spatial join equals the naive double loop; 200/201 m boundary.
void check_spatial_join(std::string& detail) {
  SplitMix64 rng(11235);
  for (int instance = 0; instance < 100; ++instance) {
    std::vector<CrimeRecord> crimes;
    auto n = rng.uniform_int(0, 1000);
    for (std::int64_t i = 0; i < n; ++i) {
      crimes.push_back({rng.uniform(-3.9, -3.6), rng.uniform(-38.7, -38.3),
                        CrimeType::kTheft, "t"});
    }
    CrimeIndex index(crimes);
    for (int q = 0; q < 5; ++q) {
      double lat = rng.uniform(-3.9, -3.6);
      double lon = rng.uniform(-38.7, -38.3);
      double radius = rng.uniform(50.0, 2000.0);
      require(index.count_near(lat, lon, radius) ==
                  oracle::naive_crimes_near(lat, lon, crimes, radius),
              "index disagrees with the naive join");
    }
  }
  Stop stop{"S", -3.80, -38.60};
  constexpr double kPi = 3.14159265358979323846;
  double lat_201 = stop.lat + (201.0 / kEarthRadiusM) * (180.0 / kPi);
  double lat_199 = stop.lat + (199.0 / kEarthRadiusM) * (180.0 / kPi);
  std::vector<CrimeRecord> two = {{lat_201, stop.lon, CrimeType::kTheft, "t"},
                                  {lat_199, stop.lon, CrimeType::kTheft, "t"}};
  require(crimes_near_stop(stop, two, 200.0) == 1, "199/201 m boundary misbehaves");
  detail = "100 instances, exact count equality; boundary ok";
}

// C7: MLE recovery of alpha in {1.5, 2.0, 2.5} within 0.15 at n = 1e4.
void check_power_law_recovery(std::string& detail) {
  std::ostringstream os;
  std::uint64_t seed = 8888;
  for (double alpha : {1.5, 2.0, 2.5}) {
    auto samples = oracle::power_law_samples(alpha, 1.0, 10000, seed++);
    auto fit = fit_power_law(samples);
    require(fit.has_value(), "fit unexpectedly failed");
    require(std::abs(fit->alpha - alpha) <= 0.15, "exponent outside +-0.15");
    os << alpha << "->" << fit->alpha << " ";
  }
  detail = os.str();
}

// C8: funnel scenario, optimal strictly worse on waiting and transfer risk.
void check_direction_of_effect(std::string& detail) {
  Scenario funnel = make_funnel_scenario();
  SimulationReport actual = run_simulation(funnel, {Variant::kActual, 77});
  SimulationReport optimal = run_simulation(funnel, {Variant::kOptimal, 77});
  AnalysisParams params;  // 05:00-08:00 peak window, 200 m, threshold 10
  ComparisonReport cmp =
      compare_scenarios(std::move(actual), std::move(optimal), funnel, params);
  require(cmp.mean_window_wait_actual_s && cmp.mean_window_wait_optimal_s,
          "missing window wait means");
  require(*cmp.mean_window_wait_optimal_s > *cmp.mean_window_wait_actual_s,
          "optimal wait not strictly greater");
  require(cmp.mean_transfer_crime_rate_actual && cmp.mean_transfer_crime_rate_optimal,
          "missing transfer crime rates");
  require(*cmp.mean_transfer_crime_rate_optimal > *cmp.mean_transfer_crime_rate_actual,
          "optimal rate of crime not strictly greater");
  std::ostringstream os;
  os << "wait " << *cmp.mean_window_wait_optimal_s << " > " << *cmp.mean_window_wait_actual_s
     << " s; rate " << *cmp.mean_transfer_crime_rate_optimal << " > "
     << *cmp.mean_transfer_crime_rate_actual;
  detail = os.str();
}

// C9: occupancy buckets partition the active fleet at every snapshot.
void check_occupancy_partition(std::string& detail) {
  require(occupancy_bucket(20) == OccupancyBucket::kLow, "20 must be LOW");
  require(occupancy_bucket(21) == OccupancyBucket::kMid, "21 must be MID");
  require(occupancy_bucket(60) == OccupancyBucket::kMid, "60 must be MID");
  require(occupancy_bucket(61) == OccupancyBucket::kHigh, "61 must be HIGH");

  std::int64_t rows_checked = 0;
  auto check_run = [&rows_checked](const Scenario& s, Variant v, std::uint64_t seed) {
    SimulationReport report = run_simulation(s, {v, seed});
    OccupancyHistogram hist = occupancy_histogram(report.log);
    std::size_t row = 0;
    for (const auto& e : report.log.events) {
      if (e.kind != EventKind::kSnapshot) continue;
      int active = e.payload.empty() ? 0 : static_cast<int>(split(e.payload, ';').size());
      require(hist.rows.at(row).total() == active, "buckets do not partition the fleet");
      ++row;
      ++rows_checked;
    }
    require(row == hist.rows.size(), "snapshot rows mismatch");
  };

  Scenario funnel = make_funnel_scenario();
  check_run(funnel, Variant::kActual, 5);
  check_run(funnel, Variant::kOptimal, 5);
  SyntheticParams params = large_params();
  params.n_passengers = 500;
  check_run(generate_synthetic(params, 3), Variant::kActual, 9);
  std::ostringstream os;
  os << rows_checked << " snapshots partitioned";
  detail = os.str();
}

// C10: load(write(x)) == x for scenarios and reports.
void check_round_trip(std::string& detail) {
  SyntheticParams params;
  params.n_stops = 50;
  params.n_lines = 5;
  params.stops_per_line = 7;
  params.n_vehicles = 8;
  params.trips_per_vehicle = 3;
  params.n_passengers = 80;
  params.n_crimes = 400;
  int scenarios = 0, reports = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Scenario s = generate_synthetic(params, seed);
    fs::path dir = fs::temp_directory_path() / ("busim_acc_rt_" + std::to_string(seed));
    fs::remove_all(dir);
    write_scenario(s, dir);
    require(load_scenario(dir) == s, "scenario round trip not field-equal");
    ++scenarios;

    SimulationReport report = run_simulation(s, {Variant::kActual, seed});
    finalize_report(report, s, {});
    fs::path rdir = dir / "report";
    write_report(report, rdir);
    require(load_report(rdir, Variant::kActual) == report, "report round trip not field-equal");
    ++reports;
  }
  // the funnel exercises transfer-heavy reports
  Scenario funnel = make_funnel_scenario();
  fs::path fdir = fs::temp_directory_path() / "busim_acc_rt_funnel";
  fs::remove_all(fdir);
  write_scenario(funnel, fdir);
  require(load_scenario(fdir) == funnel, "funnel round trip not field-equal");
  ++scenarios;
  std::ostringstream os;
  os << scenarios << " scenarios, " << reports << " reports";
  detail = os.str();
}

}  // namespace

int main() {
  std::vector<Check> checks = {
      {"C1 capacity and conservation, 10k passengers under 10 s", check_capacity_conservation},
      {"C2 determinism: equal seeds byte-identical, seed change observable", check_determinism},
      {"C3 sampler fidelity at (mu=120, sigma=30), floor 1 s", check_sampler},
      {"C4 sigma-zero arrivals equal tick-budget arithmetic", check_sigma_zero_oracle},
      {"C5 router equals exhaustive minimum on 200 small networks", check_router_optimality},
      {"C6 spatial join equals brute force; 200/201 m boundary", check_spatial_join},
      {"C7 power-law recovery within 0.15 for alpha 1.5/2.0/2.5", check_power_law_recovery},
      {"C8 funnel: optimal strictly worse in wait and transfer risk", check_direction_of_effect},
      {"C9 occupancy buckets partition the fleet, paper boundaries", check_occupancy_partition},
      {"C10 round-trip load(write(x)) == x for scenarios and reports", check_round_trip},
  };

  int failures = 0;
  for (auto& check : checks) {
    std::string detail;
    try {
      check.run(detail);
      std::cout << "[PASS] " << check.name;
      if (!detail.empty()) std::cout << " (" << detail << ")";
      std::cout << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] " << check.name << ": " << e.what() << "\n";
    }
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
