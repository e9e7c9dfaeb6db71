#include <doctest.h>

#include <cmath>

#include "busim/engine.hpp"
#include "busim/errors.hpp"
#include "busim/geo.hpp"
#include "busim/metrics.hpp"
#include "busim/synthetic.hpp"
#include "support/oracles.hpp"

using namespace busim;

TEST_CASE("waiting time arithmetic from the log") {
  SimulationReport report;
  report.passengers = {{"p1", PassengerPhase::kArrived, 0, false},
                       {"p2", PassengerPhase::kWaiting, 0, false}};
  // appear 07:00:00 (25200), board 07:12:00 (25920) -> 720 s
  report.log.append(25920, EventKind::kBoard, "p1", "v1:S1:0:25200");
  // board at the appearance tick -> 0 s
  report.log.append(25920, EventKind::kBoard, "p1", "v1:T:1:25920");

  WaitingTimes w = waiting_times(report);
  REQUIRE(w.samples.size() == 2);
  CHECK(w.samples[0].wait_s == 720);
  CHECK(w.samples[1].wait_s == 0);
  CHECK(w.served == 1);
  CHECK(w.unserved == 1);  // p2 never boards

  auto grouped = w.by_hour();
  REQUIRE(grouped.count(7) == 1);
  CHECK(grouped.at(7).size() == 2);
  CHECK(w.mean_in_window(7 * 3600, 8 * 3600) == doctest::Approx(360.0));
  CHECK_FALSE(w.mean_in_window(9 * 3600, 10 * 3600).has_value());
}

TEST_CASE("occupancy buckets and partition") {
  CHECK(occupancy_bucket(0) == OccupancyBucket::kLow);
  CHECK(occupancy_bucket(20) == OccupancyBucket::kLow);
  CHECK(occupancy_bucket(21) == OccupancyBucket::kMid);
  CHECK(occupancy_bucket(60) == OccupancyBucket::kMid);
  CHECK(occupancy_bucket(61) == OccupancyBucket::kHigh);
  CHECK(occupancy_bucket(80) == OccupancyBucket::kHigh);

  EventLog log;
  log.append(18000, EventKind::kSnapshot, "fleet", "a:0;b:21;c:61;d:20");
  log.append(18060, EventKind::kSnapshot, "fleet", "");
  OccupancyHistogram hist = occupancy_histogram(log);
  REQUIRE(hist.rows.size() == 2);
  CHECK(hist.rows[0].low == 2);
  CHECK(hist.rows[0].mid == 1);
  CHECK(hist.rows[0].high == 1);
  CHECK(hist.rows[0].total() == 4);  // partition: buckets sum to fleet size
  CHECK(hist.rows[1].total() == 0);
}

TEST_CASE("crimes near a stop: degenerate and boundary distances") {
  Stop stop{"S", -3.80, -38.60};
  std::vector<CrimeRecord> crimes;
  crimes.push_back({stop.lat, stop.lon, CrimeType::kTheft, "t"});  // distance 0

  // 201 m due north: just outside a 200 m radius
  double lat_201 = stop.lat + (201.0 / kEarthRadiusM) * (180.0 / 3.14159265358979323846);
  crimes.push_back({lat_201, stop.lon, CrimeType::kTheft, "t"});
  double lat_199 = stop.lat + (199.0 / kEarthRadiusM) * (180.0 / 3.14159265358979323846);
  crimes.push_back({lat_199, stop.lon, CrimeType::kTheft, "t"});

  CHECK(crimes_near_stop(stop, crimes, 200.0) == 2);
  CHECK(haversine_m(stop.lat, stop.lon, lat_201, stop.lon) == doctest::Approx(201.0).epsilon(1e-6));
}

TEST_CASE("spatial join agrees with the naive double loop") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CrimeRecord> crimes;
    auto n = rng.uniform_int(0, 1000);
    for (std::int64_t i = 0; i < n; ++i) {
      crimes.push_back({rng.uniform(-3.9, -3.6), rng.uniform(-38.7, -38.3),
                        CrimeType::kTheft, "t"});
    }
    CrimeIndex index(crimes);
    for (int q = 0; q < 20; ++q) {
      double lat = rng.uniform(-3.9, -3.6);
      double lon = rng.uniform(-38.7, -38.3);
      double radius = rng.uniform(50.0, 3000.0);
      CHECK(index.count_near(lat, lon, radius) ==
            oracle::naive_crimes_near(lat, lon, crimes, radius));
    }
  }
}

TEST_CASE("rate of crime definition") {
  CHECK(crime_rate_at_stop(10, 100) == doctest::Approx(0.1));
  CHECK(crime_rate_at_stop(0, 42) == doctest::Approx(0.0));
  CHECK_FALSE(crime_rate_at_stop(5, 0).has_value());  // UNDEFINED, not a failure

  Stop stop{"S", -3.80, -38.60};
  std::vector<CrimeRecord> crimes(10, {-3.80, -38.60, CrimeType::kTheft, "t"});
  CHECK(crime_rate_at_stop(stop, crimes, 100, 200.0) == doctest::Approx(0.1));
  CHECK_FALSE(crime_rate_at_stop(stop, crimes, 0, 200.0).has_value());
}

TEST_CASE("transfer crime exposure: counting and monotonicity") {
  TransitNetwork network;
  network.stops = {{"A", -3.80, -38.60}, {"Thot", -3.80, -38.59},
                   {"Tcold", -3.80, -38.58}, {"B", -3.80, -38.57}};
  std::vector<CrimeRecord> crimes;
  for (int i = 0; i < 15; ++i) {
    crimes.push_back({-3.80, -38.59, CrimeType::kRobbery, "t"});  // hotspot at Thot
  }
  std::vector<PassengerItinerary> itineraries = {
      {"p1", Variant::kActual, 0, {{"L1", "A", "Thot"}, {"L2", "Thot", "B"}}},
      {"p2", Variant::kActual, 0, {{"L1", "A", "Tcold"}, {"L2", "Tcold", "B"}}},
      {"p3", Variant::kOptimal, 0, {{"L1", "A", "B"}}},
  };

  auto result = transfer_crime_exposure(itineraries, Variant::kActual, network, crimes,
                                        200.0, 10);
  CHECK(result.transfers == 2);
  CHECK(result.over_threshold == 1);
  CHECK(result.fraction == doctest::Approx(0.5));

  // zero crimes anywhere -> 0.0 for both variants
  auto clean = transfer_crime_exposure(itineraries, Variant::kActual, network, {}, 200.0, 10);
  CHECK(clean.fraction == doctest::Approx(0.0));
  auto optimal = transfer_crime_exposure(itineraries, Variant::kOptimal, network, {}, 200.0, 10);
  CHECK(optimal.transfers == 0);
  CHECK(optimal.fraction == doctest::Approx(0.0));

  // monotone: non-increasing in threshold, non-decreasing in radius
  double prev = 1.0;
  for (int threshold : {0, 5, 14, 15, 100}) {
    auto r = transfer_crime_exposure(itineraries, Variant::kActual, network, crimes, 200.0,
                                     threshold);
    CHECK(r.fraction <= prev);
    prev = r.fraction;
  }
  prev = 0.0;
  for (double radius : {1.0, 100.0, 1200.0, 5000.0}) {
    auto r = transfer_crime_exposure(itineraries, Variant::kActual, network, crimes, radius, 10);
    CHECK(r.fraction >= prev);
    prev = r.fraction;
  }
}

TEST_CASE("comparison requires matching variants and reports zero deltas on equal runs") {
  // Scenario whose actual and optimal itineraries are identical: every
  // comparison indicator must come out equal on both sides.
  Scenario s = oracle::minimal_scenario();
  PassengerItinerary optimal = s.itineraries[0];
  optimal.variant = Variant::kOptimal;
  s.itineraries.push_back(optimal);

  SimulationReport actual = run_simulation(s, {Variant::kActual, 4});
  SimulationReport opt = run_simulation(s, {Variant::kOptimal, 4});

  CHECK_THROWS_AS(compare_scenarios(opt, actual, s, {}), VariantMismatch);

  AnalysisParams params;
  ComparisonReport cmp = compare_scenarios(actual, opt, s, params);
  CHECK(cmp.actual.waiting.samples.size() == cmp.optimal.waiting.samples.size());
  CHECK(cmp.exposure_actual.fraction == cmp.exposure_optimal.fraction);
  CHECK(cmp.mean_window_wait_actual_s == cmp.mean_window_wait_optimal_s);
  CHECK(cmp.mean_transfer_crime_rate_actual == cmp.mean_transfer_crime_rate_optimal);
  CHECK(cmp.actual.occupancy.rows.size() == cmp.optimal.occupancy.rows.size());
}

TEST_CASE("funnel scenario reproduces the qualitative direction of effect") {
  Scenario funnel = make_funnel_scenario();
  REQUIRE(validate_scenario(funnel).ok());

  SimulationReport actual = run_simulation(funnel, {Variant::kActual, 8});
  SimulationReport optimal = run_simulation(funnel, {Variant::kOptimal, 8});
  AnalysisParams params;  // peak window, 200 m, threshold 10
  ComparisonReport cmp = compare_scenarios(std::move(actual), std::move(optimal), funnel, params);

  REQUIRE(cmp.mean_window_wait_actual_s.has_value());
  REQUIRE(cmp.mean_window_wait_optimal_s.has_value());
  CHECK(*cmp.mean_window_wait_optimal_s > *cmp.mean_window_wait_actual_s);

  REQUIRE(cmp.mean_transfer_crime_rate_actual.has_value());
  REQUIRE(cmp.mean_transfer_crime_rate_optimal.has_value());
  CHECK(*cmp.mean_transfer_crime_rate_optimal > *cmp.mean_transfer_crime_rate_actual);

  CHECK(cmp.exposure_optimal.fraction > cmp.exposure_actual.fraction);
  CHECK(cmp.exposure_optimal.fraction == doctest::Approx(1.0));
}

TEST_CASE("waiting-time samples are non-negative and partition the passengers") {
  Scenario funnel = make_funnel_scenario();
  for (Variant v : {Variant::kActual, Variant::kOptimal}) {
    SimulationReport report = run_simulation(funnel, {v, 13});
    WaitingTimes w = waiting_times(report);
    for (const auto& s : w.samples) CHECK(s.wait_s >= 0);
    CHECK(w.served + w.unserved == static_cast<std::int64_t>(report.passengers.size()));
  }
}

TEST_CASE("transfer crime profiles honor the reporting window") {
  Scenario funnel = make_funnel_scenario();
  SimulationReport report = run_simulation(funnel, {Variant::kOptimal, 8});

  AnalysisParams peak;  // 05:00-08:00
  auto profiles = transfer_crime_profiles(report, funnel, peak);
  REQUIRE(profiles.size() == 2);  // the two hubs
  for (const auto& p : profiles) {
    CHECK(p.stop_id.starts_with("H"));
    CHECK(p.crime_count == 60);
    CHECK(p.users_on_site > 0);
    REQUIRE(p.rate.has_value());
    CHECK(*p.rate == doctest::Approx(60.0 / static_cast<double>(p.users_on_site)));
  }

  AnalysisParams night;
  night.window = {0, 3600};  // nobody transfers then
  CHECK(transfer_crime_profiles(report, funnel, night).empty());
}
