#include "sgsim/kinematics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sgsim {
namespace {

void require_positive_voltage(double voltage) {
  if (!(voltage > 0.0) || !std::isfinite(voltage)) {
    throw std::domain_error("accelerating voltage must be positive and finite, got " +
                            std::to_string(voltage));
  }
}

constexpr std::array<double, 25> kTableVoltages{
    5e3,  6e3,  7e3,  8e3,  9e3,  10e3, 12e3, 13e3, 14e3, 15e3, 16e3, 17e3, 18e3,
    19e3, 20e3, 21e3, 22e3, 23e3, 24e3, 25e3, 26e3, 27e3, 28e3, 29e3, 30e3,
};

std::string sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

}  // namespace

KinematicsRow accelerate_classical(double voltage, const Constants& k) {
  require_positive_voltage(voltage);
  const double energy = k.electron_charge_magnitude * voltage;
  const double velocity = std::sqrt(2.0 * energy / k.electron_mass);
  const double momentum = k.electron_mass * velocity;
  return {voltage, velocity, k.electron_mass, energy, momentum, k.planck_constant / momentum};
}

KinematicsRow accelerate_relativistic(double voltage, const Constants& k) {
  require_positive_voltage(voltage);
  const double energy = k.electron_charge_magnitude * voltage;
  const double rest = k.electron_mass * k.speed_of_light * k.speed_of_light;
  const double gamma = 1.0 + energy / rest;
  // 1 - 1/gamma^2 written to avoid cancellation at low voltage
  const double x = energy / rest;
  const double beta = std::sqrt(x * (2.0 + x)) / gamma;
  const double velocity = k.speed_of_light * beta;
  const double momentum = gamma * k.electron_mass * velocity;
  return {voltage, velocity, k.electron_mass, energy, momentum, k.planck_constant / momentum};
}

double gamma_factor(double velocity, const Constants& k) {
  if (!(velocity >= 0.0) || !(velocity < k.speed_of_light)) {
    throw std::domain_error("gamma_factor requires 0 <= v < c, got " + std::to_string(velocity));
  }
  const double beta = velocity / k.speed_of_light;
  return 1.0 / std::sqrt(1.0 - beta * beta);
}

std::span<const double> table_1_voltages() noexcept { return kTableVoltages; }

std::vector<KinematicsRow> table_1(const Constants& k) {
  std::vector<KinematicsRow> rows;
  rows.reserve(kTableVoltages.size());
  for (double v : kTableVoltages) rows.push_back(accelerate_classical(v, k));
  return rows;
}

void write_table_csv(std::ostream& out, std::span<const KinematicsRow> rows) {
  out << "voltage_kV,velocity_m_per_s,mass_kg,energy_J,momentum_N_s,wavelength_m\n";
  for (const auto& r : rows) {
    out << sci3(r.voltage / 1e3) << ',' << sci3(r.velocity) << ',' << sci3(r.mass) << ','
        << sci3(r.energy) << ',' << sci3(r.momentum) << ',' << sci3(r.wavelength) << '\n';
  }
}

}  // namespace sgsim
