#include "busim/rng.hpp"

#include <cmath>
#include <numbers>

namespace busim {

double SplitMix64::next_normal() {
  // Both uniforms are always drawn; see the header contract.
  double u1 = next_unit_pos();
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view tag) {
  // One extra SplitMix64 step decorrelates master_seed ^ hash collisions
  // between adjacent seeds.
  SplitMix64 mixer(master_seed ^ fnv1a64(tag));
  return mixer.next_u64();
}

}  // namespace busim
