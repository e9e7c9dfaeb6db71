#pragma once

#include <optional>
#include <vector>

#include "busim/indicators.hpp"

namespace busim {

/// Continuous maximum-likelihood power-law fit (Clauset-Shalizi-Newman
/// style): alpha = 1 + n / sum(ln(x_i / x_min)) over the tail x_i >= x_min,
/// with x_min chosen among the observed values to minimize the
/// Kolmogorov-Smirnov distance between the tail and the fitted law.
///
/// Requires at least 10 distinct positive values; returns nullopt
/// (insufficient data) otherwise. Non-positive samples are ignored.
std::optional<PowerLawFit> fit_power_law(const std::vector<double>& samples);

/// KS distance between the empirical tail distribution and a power law
/// with the given exponent and cutoff. Exposed for fit diagnostics.
double power_law_ks_distance(const std::vector<double>& sorted_tail, double alpha,
                             double x_min);

}  // namespace busim
