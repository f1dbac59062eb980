#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>

#include "sgsim/constants.hpp"
#include "sgsim/field.hpp"
#include "sgsim/state.hpp"

namespace sgsim {

/// Which magnetic field enters the v x B term.
///  - full_field: B at the electron position.
///  - on_axis: B at (x, 0, 0), the paraxial approximation. For an ideal
///    gradient this is the uniform part b0 only; the gradient part of a
///    1e6 T/m field acts as a magnetic quadrupole and is unstable over a
///    few centimetres.
///  - off: no Lorentz force.
enum class LorentzCoupling { full_field, on_axis, off };

/// Forces acting inside the magnet. The electron charge is -e everywhere.
struct ForceModel {
  Vec3 electric_field{};  // V/m
  FieldConfig field = ZeroField{};
  bool include_spin_force = true;
  LorentzCoupling lorentz = LorentzCoupling::full_field;
  Constants physics = paper_constants;
};

enum class Scheme { rk4, semi_implicit };

struct IntegratorConfig {
  double time_step = 1e-12;  // s
  std::size_t max_steps = 1'000'000;
  Scheme scheme = Scheme::rk4;

  void validate() const;
};

/// dt = length / (speed * steps_per_transit), max_steps with 50% headroom.
IntegratorConfig integrator_for_transit(double length, double speed,
                                        std::size_t steps_per_transit = 1000,
                                        Scheme scheme = Scheme::rk4);

/// Inputs of the closed-form deflection, t = L/v.
struct DeflectionInput {
  double gradient = 0.0;            // T/m
  double interaction_length = 0.0;  // m
  double speed = 0.0;               // m/s
  bool include_vt_term = false;     // adds v t; off because it is not a transverse term
};

/// The step that failed and where.
class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, ElectronState state)
      : std::runtime_error(what), state_(state) {}
  const ElectronState& state() const noexcept { return state_; }

 private:
  ElectronState state_;
};

/// max_steps ran out before the exit plane; carries the last state reached.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, ElectronState state)
      : std::runtime_error(what), state_(state) {}
  const ElectronState& state() const noexcept { return state_; }

 private:
  ElectronState state_;
};

/// -e (v x B) - e E.
Vec3 lorentz_force(const ElectronState& state, const ForceModel& model);

/// s mu (0, dBz/dy, dBz/dz), from U = -s mu Bz. Zero when the model disables it.
Vec3 spin_force(const ElectronState& state, const ForceModel& model);

Vec3 total_force(const ElectronState& state, const ForceModel& model);

/// 1/2 (mu/m) g (L/v)^2, plus v t when requested.
double analytic_deflection(const DeflectionInput& input, const Constants& k = constants());

/// Gradient for which the two spin populations separate by target_split
/// (twice the single-population deflection). Inverse of analytic_deflection.
double required_gradient(double target_split, double interaction_length, double speed,
                         const Constants& k = constants());

/// One step. RK4, or for semi_implicit a time-centred Boris push with the
/// non-magnetic forces as half kicks. Throws StepError on a field singularity.
ElectronState step(const ElectronState& state, const ForceModel& model, double dt,
                   Scheme scheme = Scheme::rk4);

using TrajectoryObserver = std::function<void(double t, const ElectronState&)>;

/// Integrate until x crosses exit_plane_x; the final step is linearly
/// interpolated onto the plane. Throws std::invalid_argument if the electron
/// starts at or past the plane or moves backwards, TruncationError if
/// max_steps is exhausted.
ElectronState propagate(const ElectronState& state, const ForceModel& model,
                        const IntegratorConfig& cfg, double exit_plane_x,
                        const TrajectoryObserver& observer = {});

/// CSV rows t,x,y,z,vx,vy,vz,spin_sign for every stride-th step plus the exit.
void write_trajectory_csv(std::ostream& out, const ElectronState& state, const ForceModel& model,
                          const IntegratorConfig& cfg, double exit_plane_x, std::size_t stride,
                          bool header = true);

}  // namespace sgsim
