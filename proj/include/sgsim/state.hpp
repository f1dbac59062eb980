#pragma once

#include "sgsim/constants.hpp"
#include "sgsim/vec3.hpp"

namespace sgsim {

/// Projection of the electron's magnetic moment on z. Only two values exist.
enum class Spin : int { up = 1, down = -1 };

constexpr double sign(Spin s) noexcept { return static_cast<double>(static_cast<int>(s)); }
constexpr Spin flipped(Spin s) noexcept { return s == Spin::up ? Spin::down : Spin::up; }

struct ElectronState {
  Vec3 position;  // m
  Vec3 velocity;  // m/s
  Spin spin = Spin::up;

  friend bool operator==(const ElectronState&, const ElectronState&) = default;
};

/// Throws std::invalid_argument for non-finite components or |v| >= c.
void validate(const ElectronState& state, const Constants& k = constants());

}  // namespace sgsim
