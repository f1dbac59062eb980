#pragma once

#include <cstdint>
#include <utility>

namespace sgsim {

/// Counter-based generator: draw i of stream s under seed k is
/// splitmix64(splitmix64(k ^ splitmix64(s)) + i), using the SplitMix64
/// finalizer (Steele, Lea, Flood 2014). Any draw can be computed
/// independently of the others, so ensembles can be split across threads
/// and reproduce on every platform.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept { return mix(key_ + counter); }

  /// Uniform on (0, 1], 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  /// Two independent standard normals (Box-Muller) from counters 2i and 2i+1.
  std::pair<double, double> normal_pair(std::uint64_t i) const noexcept;

 private:
  std::uint64_t key_;
};

}  // namespace sgsim
