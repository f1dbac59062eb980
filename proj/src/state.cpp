#include "sgsim/state.hpp"

#include <stdexcept>

namespace sgsim {

void validate(const ElectronState& state, const Constants& k) {
  if (!is_finite(state.position) || !is_finite(state.velocity)) {
    throw std::invalid_argument("electron state has non-finite components");
  }
  if (!(norm(state.velocity) < k.speed_of_light)) {
    throw std::invalid_argument("electron speed must be below the speed of light");
  }
  if (state.spin != Spin::up && state.spin != Spin::down) {
    throw std::invalid_argument("spin must be +1 or -1");
  }
}

}  // namespace sgsim
