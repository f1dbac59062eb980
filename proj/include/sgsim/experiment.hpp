#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgsim/dynamics.hpp"
#include "sgsim/state.hpp"

namespace sgsim {

/// Electron gun output.
struct BeamSpec {
  double voltage = 10e3;            // V
  double sigma_transverse = 1e-6;   // m, Gaussian width in y and z
  std::size_t count = 10000;
  std::uint64_t seed = 1;
  double spin_mix = 0.5;            // fraction with Spin::up

  void validate() const;
  friend bool operator==(const BeamSpec&, const BeamSpec&) = default;
};

/// Positions along the beam axis. The force model acts only between
/// magnet_entry_x and magnet_exit_x; the rest is field-free drift.
struct Geometry {
  double gun_exit_x = 0.0;
  double magnet_entry_x = 0.05;
  double magnet_exit_x = 0.10;
  double screen_x = 0.25;

  double interaction_length() const noexcept { return magnet_exit_x - magnet_entry_x; }
  double drift_length() const noexcept { return screen_x - magnet_exit_x; }
  void validate() const;
  friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Histogram layout at the screen; the window is centred on the beam centroid.
struct ScreenSpec {
  double bin_size = 0.5e-6;  // m
  std::size_t bins_y = 256;
  std::size_t bins_z = 256;

  void validate() const;
  friend bool operator==(const ScreenSpec&, const ScreenSpec&) = default;
};

struct ScreenHit {
  double y = 0.0;
  double z = 0.0;
  Spin spin = Spin::up;
};

struct ScreenImage {
  std::size_t bins_y = 0;
  std::size_t bins_z = 0;
  double bin_size = 0.0;
  double origin_y = 0.0;  // lower edge of bin 0
  double origin_z = 0.0;
  std::vector<std::uint64_t> counts;  // z-major: counts[iz * bins_y + iy]
  std::uint64_t overflow = 0;         // hits outside the window
  std::vector<ScreenHit> hits;        // every electron that reached the screen, beam order

  std::uint64_t count(std::size_t iy, std::size_t iz) const { return counts[iz * bins_y + iy]; }
  std::uint64_t total() const noexcept;
};

/// Spin populations are compared by their z centroids.
struct SplitReport {
  double centroid_up_z = 0.0;
  double centroid_down_z = 0.0;
  double splitting = 0.0;           // |up - down| at the screen
  double exit_splitting = 0.0;      // |up - down| at the magnet exit plane
  double lorentz_deflection = 0.0;  // |mean (y,z) shift| vs field-free flight
  double standard_error = 0.0;      // pooled standard error of the centroid difference
  bool resolved = false;            // splitting > 2 * standard_error
  std::size_t up_hits = 0;
  std::size_t down_hits = 0;
  std::size_t lost = 0;
};

struct ScenarioResult {
  ScreenImage image;
  SplitReport report;
};

/// Scenario failure: too many electrons lost, or an annotated sweep failure.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  ScreenSpec screen;
  unsigned threads = 1;  // 0 = hardware concurrency
};

/// Electrons at x = gun_exit_x moving along +x at the classical gun speed.
///
/// Spins are stratified: electron i is spin-up when
/// floor((i+1) n_up / N) > floor(i n_up / N), n_up = round(spin_mix N).
/// Transverse positions use common random numbers: the k-th spin-up and the
/// k-th spin-down electron share Gaussian draw k, so the two populations
/// sample the same transverse distribution and any centroid difference is
/// produced by the forces, not by sampling noise.
std::vector<ElectronState> generate_beam(const BeamSpec& spec, double gun_exit_x = 0.0);

/// Propagates every electron to the screen and measures the spin split and
/// the Lorentz deflection. Throws ScenarioError if more than 1% are lost.
/// Results do not depend on options.threads.
ScenarioResult run_scenario(const BeamSpec& spec, const Geometry& geometry,
                            const ForceModel& model, const IntegratorConfig& integrator,
                            const RunOptions& options = {});

/// Replaces the gradient of an ideal-gradient base model (a ZeroField base
/// counts as b0 = 0) and runs one scenario per value.
std::vector<SplitReport> gradient_sweep(const BeamSpec& spec, const Geometry& geometry,
                                        const ForceModel& base_model,
                                        std::span<const double> gradients,
                                        const IntegratorConfig& integrator,
                                        const RunOptions& options = {});

/// One scenario per gun voltage. The integrator is taken as configured for
/// spec.voltage; its time step is rescaled with the speed so every voltage
/// gets the same number of steps through the magnet.
std::vector<SplitReport> voltage_sweep(const BeamSpec& spec, std::span<const double> voltages,
                                       const Geometry& geometry, const ForceModel& model,
                                       const IntegratorConfig& integrator,
                                       const RunOptions& options = {});

}  // namespace sgsim
