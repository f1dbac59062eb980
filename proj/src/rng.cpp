#include "sgsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace sgsim {

std::pair<double, double> CounterRng::normal_pair(std::uint64_t i) const noexcept {
  const double u1 = uniform(2 * i);
  const double u2 = uniform(2 * i + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace sgsim
