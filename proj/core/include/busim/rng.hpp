#pragma once

#include <cstdint>
#include <string_view>

namespace busim {

/// SplitMix64 (Steele, Lea & Flood 2014; public-domain reference sequence).
/// Chosen over std::mt19937_64 because the std distributions are not
/// pinned by the standard; this generator plus the samplers below produce
/// the same stream on every platform, which the reproducibility contract
/// relies on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; never zero, safe under log().
  double next_unit_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller. Always consumes exactly two raw
  /// draws, so stream positions do not depend on sampled values.
  double next_normal();

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Uniform integer in [lo, hi]. Modulo reduction: the bias at 64 bits is
  /// far below anything observable here.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_u64() %
                                          static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a over the tag bytes, used to key substreams.
std::uint64_t fnv1a64(std::string_view text);

/// Derives an independent substream seed from a master seed and a stable
/// tag (e.g. a vehicle id). Different tags give statistically independent
/// streams regardless of how draws interleave between them.
std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view tag);

}  // namespace busim
