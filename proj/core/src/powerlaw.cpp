#include "busim/powerlaw.hpp"

#include <algorithm>
#include <cmath>

namespace busim {

namespace {
// Tails smaller than this give estimates too noisy to rank by KS distance.
constexpr std::int64_t kMinTailSize = 10;
constexpr std::size_t kMinDistinctValues = 10;
}  // namespace

double power_law_ks_distance(const std::vector<double>& sorted_tail, double alpha,
                             double x_min) {
  const auto n = static_cast<double>(sorted_tail.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted_tail.size(); ++i) {
    double model = 1.0 - std::pow(sorted_tail[i] / x_min, 1.0 - alpha);
    double above = static_cast<double>(i + 1) / n - model;
    double below = model - static_cast<double>(i) / n;
    worst = std::max({worst, above, below});
  }
  return worst;
}

std::optional<PowerLawFit> fit_power_law(const std::vector<double>& samples) {
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (double v : samples) {
    if (std::isfinite(v) && v > 0.0) xs.push_back(v);
  }
  std::sort(xs.begin(), xs.end());

  std::vector<double> distinct(xs);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < kMinDistinctValues) return std::nullopt;

  std::optional<PowerLawFit> best;
  for (double x_min : distinct) {
    auto tail_begin = std::lower_bound(xs.begin(), xs.end(), x_min);
    std::vector<double> tail(tail_begin, xs.end());
    if (static_cast<std::int64_t>(tail.size()) < kMinTailSize) break;  // tails only shrink

    double sum_log = 0.0;
    for (double v : tail) sum_log += std::log(v / x_min);
    if (sum_log <= 0.0) continue;  // degenerate: the whole tail sits at x_min

    double alpha = 1.0 + static_cast<double>(tail.size()) / sum_log;
    double ks = power_law_ks_distance(tail, alpha, x_min);
    if (!best || ks < best->ks_distance) {
      best = PowerLawFit{alpha, x_min, ks, static_cast<std::int64_t>(tail.size())};
    }
  }
  return best;
}

}  // namespace busim
