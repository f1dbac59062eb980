#pragma once

#include <numbers>

namespace sgsim {

/// Which set of constant values to use. `paper` keeps the rounded electron
/// mass and Bohr magneton used by the reference gun table and deflection formula;
/// `codata` swaps in full-precision values for convergence studies.
enum class Precision { paper, codata };

/// Physical constants in SI units.
struct Constants {
  double electron_charge_magnitude;  // C
  double electron_mass;              // kg
  double bohr_magneton;              // A m^2 (= J/T)
  double speed_of_light;             // m/s
  double planck_constant;            // J s
  double vacuum_permeability;        // T m / A
};

inline constexpr Constants paper_constants{
    1.602176634e-19,
    9.11e-31,
    0.927e-23,  // 9.274e-24 rounded to three digits
    299792458.0,
    6.62607015e-34,
    4.0e-7 * std::numbers::pi,
};

inline constexpr Constants codata_constants{
    1.602176634e-19, 9.1093837015e-31, 9.2740100783e-24,
    299792458.0,     6.62607015e-34,   1.25663706212e-6,
};

constexpr Constants constants(Precision precision = Precision::paper) noexcept {
  return precision == Precision::paper ? paper_constants : codata_constants;
}

/// Order of magnitude of the accelerating field inside the gun (V/m).
inline constexpr double typical_gun_field = 1.0e5;

}  // namespace sgsim
