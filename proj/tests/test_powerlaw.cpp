#include <doctest.h>

#include <cmath>

#include "busim/powerlaw.hpp"
#include "busim/rng.hpp"
#include "support/oracles.hpp"

using namespace busim;

TEST_CASE("MLE recovers generating exponents within 0.15 at n = 1e4") {
  std::uint64_t seed = 5000;
  for (double alpha : {1.5, 2.0, 2.5}) {
    auto samples = oracle::power_law_samples(alpha, 1.0, 10000, seed++);
    auto fit = fit_power_law(samples);
    REQUIRE(fit.has_value());
    CHECK(std::abs(fit->alpha - alpha) <= 0.15);
    CHECK(fit->x_min >= 1.0);
    CHECK(fit->n_tail >= 10);
  }
}

TEST_CASE("all-equal samples are insufficient data") {
  std::vector<double> same(100, 7.0);
  CHECK_FALSE(fit_power_law(same).has_value());
}

TEST_CASE("fewer than ten distinct values are insufficient data") {
  std::vector<double> few;
  for (int i = 0; i < 90; ++i) few.push_back(static_cast<double>(1 + i % 9));
  CHECK_FALSE(fit_power_law(few).has_value());
  CHECK_FALSE(fit_power_law({}).has_value());
}

TEST_CASE("non-positive samples are ignored") {
  auto samples = oracle::power_law_samples(2.0, 1.0, 5000, 99);
  auto clean = fit_power_law(samples);
  samples.push_back(0.0);
  samples.push_back(-3.0);
  auto dirty = fit_power_law(samples);
  REQUIRE(clean.has_value());
  REQUIRE(dirty.has_value());
  CHECK(clean->alpha == dirty->alpha);
}

TEST_CASE("KS distance separates power-law from exponential samples") {
  const int n = 4000;
  auto pl = oracle::power_law_samples(2.0, 1.0, n, 1234);

  SplitMix64 rng(4321);
  std::vector<double> expo;
  expo.reserve(n);
  for (int i = 0; i < n; ++i) {
    expo.push_back(1.0 - std::log(rng.next_unit_pos()));  // shifted exponential
  }

  auto fit_pl = fit_power_law(pl);
  auto fit_expo = fit_power_law(expo);
  REQUIRE(fit_pl.has_value());
  REQUIRE(fit_expo.has_value());
  // the power-law fit should be markedly better on its own data
  CHECK(fit_pl->ks_distance * 3.0 < fit_expo->ks_distance);
}

TEST_CASE("ks distance is zero-ish for a perfect synthetic tail") {
  // CDF-inverted grid points: the empirical CDF tracks the model closely.
  std::vector<double> grid;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    double u = (static_cast<double>(i) + 0.5) / n;
    grid.push_back(std::pow(1.0 - u, -1.0));  // alpha = 2, x_min = 1
  }
  std::sort(grid.begin(), grid.end());
  double ks = power_law_ks_distance(grid, 2.0, 1.0);
  CHECK(ks < 0.01);
}
