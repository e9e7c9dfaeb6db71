#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "busim/domain.hpp"
#include "busim/engine.hpp"
#include "busim/errors.hpp"
#include "busim/metrics.hpp"
#include "busim/powerlaw.hpp"
#include "busim/report_io.hpp"
#include "busim/router.hpp"
#include "busim/scenario_io.hpp"
#include "busim/synthetic.hpp"
#include "busim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliContext {
  std::vector<std::string> args;  // argv echo for the manifest
};

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    std::uint64_t seed, const CliContext& ctx) {
  json manifest;
  manifest["tool"] = "busim";
  manifest["version"] = busim::kVersion;
  manifest["subcommand"] = subcommand;
  manifest["seed"] = seed;
  manifest["args"] = ctx.args;
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw busim::IoError("cannot write manifest in " + out_dir.string());
  out << manifest.dump(2) << "\n";
}

busim::Clock parse_clock_or_die(const std::string& text, const std::string& flag) {
  auto parsed = busim::parse_clock(text);
  if (!parsed) throw busim::InvalidParams(flag + ": cannot parse clock '" + text + "'");
  return *parsed;
}

busim::ReportWindow parse_window(const std::string& text) {
  auto dash = text.find('-');
  if (dash == std::string::npos)
    throw busim::InvalidParams("--report-window: expected HH:MM-HH:MM, got '" + text + "'");
  busim::ReportWindow window;
  window.start_s = parse_clock_or_die(text.substr(0, dash), "--report-window");
  window.end_s = parse_clock_or_die(text.substr(dash + 1), "--report-window");
  return window;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      double v = std::stod(text);
      return {v, v};
    }
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw busim::InvalidParams(flag + ": expected LO:HI, got '" + text + "'");
  }
}

int cmd_generate(const fs::path& out_dir, std::uint64_t seed, const std::string& preset,
                 const busim::SyntheticParams& params, const CliContext& ctx) {
  busim::Scenario scenario =
      preset == "funnel" ? busim::make_funnel_scenario() : busim::generate_synthetic(params, seed);
  busim::write_scenario(scenario, out_dir);
  write_manifest(out_dir, "generate", seed, ctx);
  std::cout << "scenario written to " << out_dir.string() << "\n"
            << "  stops:       " << scenario.network.stops.size() << "\n"
            << "  edges:       " << scenario.network.edges.size() << "\n"
            << "  lines:       " << scenario.lines.size() << "\n"
            << "  vehicles:    " << scenario.vehicles.size() << "\n"
            << "  itineraries: " << scenario.itineraries.size() << "\n"
            << "  crimes:      " << scenario.crimes.size() << "\n";
  return 0;
}

/// Re-routes every actual itinerary through the router; unreachable pairs
/// are dropped with a warning count (they do not fail the run).
std::vector<busim::PassengerItinerary> reroute_optimal(const busim::Scenario& scenario,
                                                       double transfer_penalty_s,
                                                       int& unroutable) {
  busim::RoutingGraph graph =
      busim::build_routing_graph(scenario.network, scenario.lines, transfer_penalty_s);
  std::vector<busim::PassengerItinerary> optimal;
  unroutable = 0;
  for (const auto& itinerary : scenario.itineraries) {
    if (itinerary.variant != busim::Variant::kActual) continue;
    auto routed =
        busim::compute_time_optimal_route(graph, itinerary.origin(), itinerary.destination());
    if (!routed) {
      ++unroutable;
      continue;
    }
    busim::PassengerItinerary opt = routed->itinerary;
    opt.passenger_id = itinerary.passenger_id;
    opt.appearance_s = itinerary.appearance_s;
    optimal.push_back(std::move(opt));
  }
  return optimal;
}

int cmd_simulate(const fs::path& scenario_dir, const fs::path& out_dir,
                 const std::string& variant, std::uint64_t seed,
                 std::optional<double> radius_m, int threshold,
                 const busim::ReportWindow& window, const std::string& end_clock,
                 double transfer_penalty_s, const CliContext& ctx) {
  busim::Scenario scenario = busim::load_scenario(scenario_dir);
  if (!end_clock.empty()) {
    scenario.config.end_clock_s = parse_clock_or_die(end_clock, "--end-clock");
  }

  busim::AnalysisParams params;
  params.radius_m = radius_m.value_or(scenario.config.crime_radius_m);
  params.threshold = threshold;
  params.window = window;

  fs::create_directories(out_dir);

  auto run_actual = [&]() {
    busim::RunOptions options{busim::Variant::kActual, busim::derive_stream(seed, "actual")};
    busim::SimulationReport report = busim::run_simulation(scenario, options);
    busim::finalize_report(report, scenario, params);
    return report;
  };
  auto run_optimal = [&](const busim::Scenario& base) {
    busim::RunOptions options{busim::Variant::kOptimal, busim::derive_stream(seed, "optimal")};
    busim::SimulationReport report = busim::run_simulation(base, options);
    busim::finalize_report(report, base, params);
    return report;
  };

  int unroutable = 0;
  busim::Scenario optimal_scenario;
  if (variant == "optimal" || variant == "both") {
    optimal_scenario = scenario;
    optimal_scenario.itineraries = reroute_optimal(scenario, transfer_penalty_s, unroutable);
    if (unroutable > 0) {
      std::cerr << "warning: " << unroutable
                << " passenger(s) have no route to their destination and were skipped\n";
    }
  }

  if (variant == "actual") {
    busim::write_report(run_actual(), out_dir);
  } else if (variant == "optimal") {
    busim::write_report(run_optimal(optimal_scenario), out_dir);
  } else {
    // Independent runs on immutable scenarios: safe to execute in parallel.
    auto actual_future = std::async(std::launch::async, run_actual);
    auto optimal_future =
        std::async(std::launch::async, [&]() { return run_optimal(optimal_scenario); });
    busim::SimulationReport actual = actual_future.get();
    busim::SimulationReport optimal = optimal_future.get();
    // Exposure compares the itineraries themselves, so the comparison
    // scenario carries both variants' itineraries.
    busim::Scenario merged = scenario;
    merged.itineraries.clear();
    for (const auto& it : scenario.itineraries) {
      if (it.variant == busim::Variant::kActual) merged.itineraries.push_back(it);
    }
    for (const auto& it : optimal_scenario.itineraries) merged.itineraries.push_back(it);
    busim::ComparisonReport comparison =
        busim::compare_scenarios(std::move(actual), std::move(optimal), merged, params);
    busim::write_comparison(comparison, out_dir);
  }
  write_manifest(out_dir, "simulate", seed, ctx);
  std::cout << "simulation output written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_analyze(const fs::path& scenario_dir, const std::string& crimes_file,
                const fs::path& out_dir, std::optional<double> radius_m, int threshold,
                const CliContext& ctx) {
  busim::Scenario scenario = busim::load_scenario(scenario_dir);
  std::vector<busim::CrimeRecord> crimes = scenario.crimes;
  if (!crimes_file.empty()) {
    crimes = busim::load_crimes_file(crimes_file);
  }
  double radius = radius_m.value_or(scenario.config.crime_radius_m);

  fs::create_directories(out_dir);
  auto per_stop = busim::crimes_per_stop(scenario.network, crimes, radius);
  {
    std::ofstream out(out_dir / "crimes_per_stop.csv", std::ios::binary);
    out << "stop_id,crime_count\n";
    for (const auto& [stop, count] : per_stop) out << stop << "," << count << "\n";
  }

  std::vector<double> counts;
  for (const auto& [stop, count] : per_stop) {
    if (count > 0) counts.push_back(static_cast<double>(count));
  }
  auto fit = busim::fit_power_law(counts);
  {
    std::ofstream out(out_dir / "powerlaw.csv", std::ios::binary);
    out << "alpha,x_min,ks_distance,n_tail,status\n";
    if (fit) {
      out << fit->alpha << "," << fit->x_min << "," << fit->ks_distance << ","
          << fit->n_tail << ",ok\n";
    } else {
      out << ",,,,insufficient-data\n";
    }
  }

  {
    std::ofstream out(out_dir / "exposure.csv", std::ios::binary);
    out << "variant,transfers,over_threshold,fraction\n";
    for (busim::Variant v : {busim::Variant::kActual, busim::Variant::kOptimal}) {
      auto exposure = busim::transfer_crime_exposure(scenario.itineraries, v,
                                                     scenario.network, crimes, radius,
                                                     threshold);
      out << busim::variant_name(v) << "," << exposure.transfers << ","
          << exposure.over_threshold << "," << exposure.fraction << "\n";
    }
  }
  write_manifest(out_dir, "analyze", 0, ctx);
  std::cout << "analysis written to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"busim: bus-network simulator for route choice and crime exposure"};
  app.require_subcommand(1);

  CliContext ctx;
  for (int i = 0; i < argc; ++i) ctx.args.emplace_back(argv[i]);

  // generate
  auto* generate = app.add_subcommand("generate", "write a synthetic scenario directory");
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  std::string preset = "default";
  busim::SyntheticParams params;
  std::string mean_range, cv_range, window_text;
  generate->add_option("--out", gen_out, "output directory")->required();
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--preset", preset, "default|funnel")
      ->check(CLI::IsMember({"default", "funnel"}));
  generate->add_option("--stops", params.n_stops, "number of stops");
  generate->add_option("--lines", params.n_lines, "number of lines");
  generate->add_option("--stops-per-line", params.stops_per_line, "stops per line");
  generate->add_option("--vehicles", params.n_vehicles, "number of vehicles");
  generate->add_option("--trips-per-vehicle", params.trips_per_vehicle, "trips per vehicle");
  generate->add_option("--passengers", params.n_passengers, "number of passengers");
  generate->add_option("--crimes", params.n_crimes, "number of crime records");
  generate->add_option("--hotspots", params.crime_hotspot_count, "crime hotspot count");
  generate->add_option("--mean-edge-s", mean_range, "edge mean seconds, LO:HI");
  generate->add_option("--cv", cv_range, "edge sigma/mu, LO:HI");
  generate->add_option("--window", window_text, "appearance window, HH:MM-HH:MM");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a scenario and write reports");
  std::string sim_scenario, sim_out, sim_variant = "actual", sim_window = "05:00-08:00";
  std::string end_clock;
  std::uint64_t sim_seed = 0;
  double sim_radius = -1.0;
  int sim_threshold = 10;
  double transfer_penalty = 0.0;
  simulate->add_option("--scenario", sim_scenario, "scenario directory")->required();
  simulate->add_option("--out", sim_out, "output directory")->required();
  simulate->add_option("--variant", sim_variant, "actual|optimal|both")
      ->check(CLI::IsMember({"actual", "optimal", "both"}));
  simulate->add_option("--seed", sim_seed, "simulation seed");
  simulate->add_option("--radius-m", sim_radius, "crime vicinity radius in meters");
  simulate->add_option("--threshold", sim_threshold, "crime-count exposure threshold");
  simulate->add_option("--report-window", sim_window, "reporting window HH:MM-HH:MM");
  simulate->add_option("--end-clock", end_clock, "simulation end, HH:MM or HH:MM+1d");
  simulate->add_option("--transfer-penalty-s", transfer_penalty,
                       "router transfer penalty in seconds");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "crime analysis over a scenario");
  std::string ana_scenario, ana_crimes, ana_out;
  double ana_radius = -1.0;
  int ana_threshold = 10;
  analyze->add_option("--scenario", ana_scenario, "scenario directory")->required();
  analyze->add_option("--crimes", ana_crimes, "crimes.csv override file");
  analyze->add_option("--out", ana_out, "output directory")->required();
  analyze->add_option("--radius-m", ana_radius, "crime vicinity radius in meters");
  analyze->add_option("--threshold", ana_threshold, "crime-count exposure threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      if (!mean_range.empty()) {
        auto [lo, hi] = parse_range(mean_range, "--mean-edge-s");
        params.mean_edge_s_lo = lo;
        params.mean_edge_s_hi = hi;
      }
      if (!cv_range.empty()) {
        auto [lo, hi] = parse_range(cv_range, "--cv");
        params.cv_lo = lo;
        params.cv_hi = hi;
      }
      if (!window_text.empty()) {
        auto window = parse_window(window_text);
        params.appearance_window_lo = window.start_s;
        params.appearance_window_hi = window.end_s;
      }
      return cmd_generate(gen_out, gen_seed, preset, params, ctx);
    }
    if (simulate->parsed()) {
      std::optional<double> radius;
      if (sim_radius > 0) radius = sim_radius;
      return cmd_simulate(sim_scenario, sim_out, sim_variant, sim_seed, radius,
                          sim_threshold, parse_window(sim_window), end_clock,
                          transfer_penalty, ctx);
    }
    if (analyze->parsed()) {
      std::optional<double> radius;
      if (ana_radius > 0) radius = ana_radius;
      return cmd_analyze(ana_scenario, ana_crimes, ana_out, radius, ana_threshold, ctx);
    }
  } catch (const busim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
