#include "busim/report_io.hpp"

#include "busim/errors.hpp"
#include "csv.hpp"

namespace busim {

namespace fs = std::filesystem;
using csv::Reader;
using csv::Writer;

namespace {

const std::vector<std::string> kEventsHeader = {"clock_s", "kind", "subject", "payload"};
const std::vector<std::string> kPassengersHeader = {"passenger_id", "phase", "leg_cursor",
                                                    "stranded"};
const std::vector<std::string> kWaitingHeader = {"hour_of_day", "board_clock_s",
                                                 "passenger_id", "leg_index", "wait_s"};
const std::vector<std::string> kOccupancyHeader = {"clock_s", "low", "mid", "high"};
const std::vector<std::string> kTransferCrimeHeader = {
    "stop_id", "transfer_events", "users_on_site", "crime_count", "rate"};
const std::vector<std::string> kSummaryHeader = {"key", "value"};
const std::vector<std::string> kPowerLawHeader = {"alpha", "x_min", "ks_distance",
                                                  "n_tail", "status"};
const std::vector<std::string> kComparisonHeader = {"key", "value"};

std::string suffixed(const std::string& base, Variant v) {
  return base + "_" + variant_name(v) + ".csv";
}

std::string opt_str(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : "";
}

}  // namespace

void write_report(const SimulationReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  const Variant v = report.variant;

  {
    Writer w(dir / suffixed("events", v), kEventsHeader);
    for (const Event& e : report.log.events) {
      w.row({std::to_string(e.clock_s), event_kind_name(e.kind), e.subject, e.payload});
    }
    w.close();
  }
  {
    Writer w(dir / suffixed("passengers", v), kPassengersHeader);
    for (const auto& p : report.passengers) {
      w.row({p.passenger_id, passenger_phase_name(p.phase), std::to_string(p.leg_cursor),
             p.stranded ? "1" : "0"});
    }
    w.close();
  }
  {
    Writer w(dir / suffixed("waiting", v), kWaitingHeader);
    for (const auto& s : report.waiting.samples) {
      w.row({std::to_string(hour_of_day(s.board_clock_s)), std::to_string(s.board_clock_s),
             s.passenger_id, std::to_string(s.leg_index), std::to_string(s.wait_s)});
    }
    w.close();
  }
  {
    Writer w(dir / suffixed("occupancy", v), kOccupancyHeader);
    for (const auto& row : report.occupancy.rows) {
      w.row({std::to_string(row.clock_s), std::to_string(row.low), std::to_string(row.mid),
             std::to_string(row.high)});
    }
    w.close();
  }
  {
    Writer w(dir / suffixed("transfer_crime", v), kTransferCrimeHeader);
    for (const auto& p : report.transfer_crime) {
      w.row({p.stop_id, std::to_string(p.transfer_events), std::to_string(p.users_on_site),
             std::to_string(p.crime_count), opt_str(p.rate)});
    }
    w.close();
  }
  {
    Writer w(dir / suffixed("summary", v), kSummaryHeader);
    w.row({"variant", variant_name(v)});
    w.row({"seed", std::to_string(report.seed)});
    w.row({"ticks", std::to_string(report.ticks)});
    w.row({"served", std::to_string(report.waiting.served)});
    w.row({"unserved", std::to_string(report.waiting.unserved)});
    w.row({"finalized", report.finalized ? "1" : "0"});
    w.row({"start_clock_s", std::to_string(report.config.start_clock_s)});
    w.row({"end_clock_s", std::to_string(report.config.end_clock_s)});
    w.row({"tick_s", std::to_string(report.config.tick_s)});
    w.row({"crime_radius_m", csv::format_double(report.config.crime_radius_m)});
    w.row({"rng_seed", std::to_string(report.config.rng_seed)});
    w.close();
  }
}

SimulationReport load_report(const fs::path& dir, Variant variant) {
  SimulationReport report;
  report.variant = variant;

  {
    Reader r(dir / suffixed("events", variant), "events", kEventsHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      auto kind = parse_event_kind(f[1]);
      if (!kind) r.fail("unknown event kind '" + f[1] + "'");
      report.log.events.push_back({r.as_int(f[0], "clock_s"), *kind, f[2], f[3]});
    }
  }
  {
    Reader r(dir / suffixed("passengers", variant), "passengers", kPassengersHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      auto phase = parse_passenger_phase(f[1]);
      if (!phase) r.fail("unknown phase '" + f[1] + "'");
      report.passengers.push_back({f[0], *phase,
                                   static_cast<int>(r.as_int(f[2], "leg_cursor")),
                                   f[3] == "1"});
    }
  }
  {
    Reader r(dir / suffixed("waiting", variant), "waiting", kWaitingHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      report.waiting.samples.push_back({r.as_int(f[1], "board_clock_s"), f[2],
                                        static_cast<int>(r.as_int(f[3], "leg_index")),
                                        r.as_int(f[4], "wait_s")});
    }
  }
  {
    Reader r(dir / suffixed("occupancy", variant), "occupancy", kOccupancyHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      report.occupancy.rows.push_back({r.as_int(f[0], "clock_s"),
                                       static_cast<int>(r.as_int(f[1], "low")),
                                       static_cast<int>(r.as_int(f[2], "mid")),
                                       static_cast<int>(r.as_int(f[3], "high"))});
    }
  }
  {
    Reader r(dir / suffixed("transfer_crime", variant), "transfer_crime",
             kTransferCrimeHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      StopCrimeProfile p;
      p.stop_id = f[0];
      p.transfer_events = r.as_int(f[1], "transfer_events");
      p.users_on_site = r.as_int(f[2], "users_on_site");
      p.crime_count = r.as_int(f[3], "crime_count");
      if (!f[4].empty()) p.rate = r.as_double(f[4], "rate");
      report.transfer_crime.push_back(std::move(p));
    }
  }
  {
    Reader r(dir / suffixed("summary", variant), "summary", kSummaryHeader);
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f[0] == "variant") {
        auto v = parse_variant(f[1]);
        if (!v || *v != variant) r.fail("variant mismatch in summary");
      } else if (f[0] == "seed") report.seed = r.as_uint(f[1], f[0]);
      else if (f[0] == "ticks") report.ticks = r.as_int(f[1], f[0]);
      else if (f[0] == "served") report.waiting.served = r.as_int(f[1], f[0]);
      else if (f[0] == "unserved") report.waiting.unserved = r.as_int(f[1], f[0]);
      else if (f[0] == "finalized") report.finalized = (f[1] == "1");
      else if (f[0] == "start_clock_s") report.config.start_clock_s = r.as_int(f[1], f[0]);
      else if (f[0] == "end_clock_s") report.config.end_clock_s = r.as_int(f[1], f[0]);
      else if (f[0] == "tick_s") report.config.tick_s = r.as_int(f[1], f[0]);
      else if (f[0] == "crime_radius_m") report.config.crime_radius_m = r.as_double(f[1], f[0]);
      else if (f[0] == "rng_seed") report.config.rng_seed = r.as_uint(f[1], f[0]);
      else r.fail("unknown summary key '" + f[0] + "'");
    }
  }
  return report;
}

void write_comparison(const ComparisonReport& comparison, const fs::path& dir) {
  write_report(comparison.actual, dir);
  write_report(comparison.optimal, dir);

  {
    Writer w(dir / "powerlaw.csv", kPowerLawHeader);
    if (comparison.crime_power_law) {
      const auto& fit = *comparison.crime_power_law;
      w.row({csv::format_double(fit.alpha), csv::format_double(fit.x_min),
             csv::format_double(fit.ks_distance), std::to_string(fit.n_tail), "ok"});
    } else {
      w.row({"", "", "", "", "insufficient-data"});
    }
    w.close();
  }
  {
    Writer w(dir / "comparison.csv", kComparisonHeader);
    w.row({"radius_m", csv::format_double(comparison.params.radius_m)});
    w.row({"threshold", std::to_string(comparison.params.threshold)});
    w.row({"window_start_s", std::to_string(comparison.params.window.start_s)});
    w.row({"window_end_s", std::to_string(comparison.params.window.end_s)});
    w.row({"transfers_actual", std::to_string(comparison.exposure_actual.transfers)});
    w.row({"transfers_over_threshold_actual",
           std::to_string(comparison.exposure_actual.over_threshold)});
    w.row({"exposure_fraction_actual",
           csv::format_double(comparison.exposure_actual.fraction)});
    w.row({"transfers_optimal", std::to_string(comparison.exposure_optimal.transfers)});
    w.row({"transfers_over_threshold_optimal",
           std::to_string(comparison.exposure_optimal.over_threshold)});
    w.row({"exposure_fraction_optimal",
           csv::format_double(comparison.exposure_optimal.fraction)});
    w.row({"mean_window_wait_actual_s", opt_str(comparison.mean_window_wait_actual_s)});
    w.row({"mean_window_wait_optimal_s", opt_str(comparison.mean_window_wait_optimal_s)});
    w.row({"mean_transfer_crime_rate_actual",
           opt_str(comparison.mean_transfer_crime_rate_actual)});
    w.row({"mean_transfer_crime_rate_optimal",
           opt_str(comparison.mean_transfer_crime_rate_optimal)});
    w.close();
  }
}

}  // namespace busim
