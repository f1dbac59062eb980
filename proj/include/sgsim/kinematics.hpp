#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sgsim/constants.hpp"

namespace sgsim {

/// One row of the gun table: everything follows from the accelerating voltage.
struct KinematicsRow {
  double voltage;     // V
  double velocity;    // m/s
  double mass;        // kg (rest mass)
  double energy;      // J, kinetic
  double momentum;    // kg m/s
  double wavelength;  // m, de Broglie
};

/// Non-relativistic gun: v = sqrt(2 e V / m). Throws std::domain_error for
/// voltage <= 0.
KinematicsRow accelerate_classical(double voltage, const Constants& k = constants());

/// gamma = 1 + eV/(mc^2), p = gamma m v. Throws std::domain_error for voltage <= 0.
KinematicsRow accelerate_relativistic(double voltage, const Constants& k = constants());

/// Lorentz factor; throws std::domain_error unless 0 <= v < c.
double gamma_factor(double velocity, const Constants& k = constants());

/// The 25 tabulated voltages, 5-30 kV with 11 kV missing as in the original table.
std::span<const double> table_1_voltages() noexcept;

std::vector<KinematicsRow> table_1(const Constants& k = constants());

/// CSV with header
/// voltage_kV,velocity_m_per_s,mass_kg,energy_J,momentum_N_s,wavelength_m
/// and every value in scientific notation with three significant digits.
void write_table_csv(std::ostream& out, std::span<const KinematicsRow> rows);

}  // namespace sgsim
