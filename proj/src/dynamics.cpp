#include "sgsim/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "sgsim/format.hpp"

namespace sgsim {
namespace {

Vec3 lorentz_b(const ElectronState& s, const ForceModel& m) {
  switch (m.lorentz) {
    case LorentzCoupling::full_field:
      return sample(m.field, s.position, m.physics).b;
    case LorentzCoupling::on_axis:
      return sample(m.field, Vec3{s.position.x, 0.0, 0.0}, m.physics).b;
    case LorentzCoupling::off:
      break;
  }
  return {};
}

// Forces other than v x B: the electric term and the spin force.
Vec3 non_magnetic_force(const ElectronState& s, const ForceModel& m) {
  const double q = -m.physics.electron_charge_magnitude;
  Vec3 f = q * m.electric_field;
  if (m.lorentz == LorentzCoupling::off) f = Vec3{};
  return f + spin_force(s, m);
}

struct Derivative {
  Vec3 dx;
  Vec3 dv;
};

Derivative rate(const ElectronState& s, const ForceModel& m) {
  return {s.velocity, total_force(s, m) / m.physics.electron_mass};
}

ElectronState offset(const ElectronState& s, const Derivative& d, double h) {
  return {s.position + h * d.dx, s.velocity + h * d.dv, s.spin};
}

ElectronState rk4(const ElectronState& s, const ForceModel& m, double dt) {
  const auto k1 = rate(s, m);
  const auto k2 = rate(offset(s, k1, 0.5 * dt), m);
  const auto k3 = rate(offset(s, k2, 0.5 * dt), m);
  const auto k4 = rate(offset(s, k3, dt), m);
  const double w = dt / 6.0;
  return {s.position + w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          s.velocity + w * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv), s.spin};
}

ElectronState boris(const ElectronState& s, const ForceModel& m, double dt) {
  ElectronState mid{s.position + 0.5 * dt * s.velocity, s.velocity, s.spin};
  const double qm = -m.physics.electron_charge_magnitude / m.physics.electron_mass;
  const Vec3 kick = (0.5 * dt / m.physics.electron_mass) * non_magnetic_force(mid, m);
  const Vec3 v_minus = s.velocity + kick;
  const Vec3 t = (0.5 * qm * dt) * lorentz_b(mid, m);
  const Vec3 v_prime = v_minus + cross(v_minus, t);
  const Vec3 sv = (2.0 / (1.0 + dot(t, t))) * t;
  const Vec3 v_new = v_minus + cross(v_prime, sv) + kick;
  return {mid.position + 0.5 * dt * v_new, v_new, s.spin};
}

std::string describe(const Vec3& p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ", " << p.z << ")";
  return os.str();
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(time_step > 0.0) || !std::isfinite(time_step)) {
    throw std::invalid_argument("integrator time step must be positive");
  }
  if (max_steps < 1) throw std::invalid_argument("integrator max_steps must be >= 1");
}

IntegratorConfig integrator_for_transit(double length, double speed,
                                        std::size_t steps_per_transit, Scheme scheme) {
  if (!(length > 0.0) || !(speed > 0.0) || steps_per_transit == 0) {
    throw std::invalid_argument("transit length, speed and step count must be positive");
  }
  IntegratorConfig cfg;
  cfg.time_step = length / (speed * static_cast<double>(steps_per_transit));
  cfg.max_steps = steps_per_transit + steps_per_transit / 2 + 16;
  cfg.scheme = scheme;
  return cfg;
}

Vec3 lorentz_force(const ElectronState& state, const ForceModel& model) {
  if (model.lorentz == LorentzCoupling::off) return {};
  const double q = -model.physics.electron_charge_magnitude;
  return q * (cross(state.velocity, lorentz_b(state, model)) + model.electric_field);
}

Vec3 spin_force(const ElectronState& state, const ForceModel& model) {
  if (!model.include_spin_force) return {};
  const auto s = sample(model.field, state.position, model.physics);
  const double mu = sign(state.spin) * model.physics.bohr_magneton;
  return {0.0, mu * s.dbz_dy, mu * s.dbz_dz};
}

Vec3 total_force(const ElectronState& state, const ForceModel& model) {
  return lorentz_force(state, model) + spin_force(state, model);
}

double analytic_deflection(const DeflectionInput& in, const Constants& k) {
  if (!(in.speed > 0.0) || !(in.interaction_length > 0.0)) {
    throw std::invalid_argument("deflection needs positive speed and interaction length");
  }
  const double t = in.interaction_length / in.speed;
  double dz = 0.5 * (k.bohr_magneton / k.electron_mass) * in.gradient * t * t;
  if (in.include_vt_term) dz += in.speed * t;
  return dz;
}

double required_gradient(double target_split, double interaction_length, double speed,
                         const Constants& k) {
  if (!(target_split > 0.0) || !(interaction_length > 0.0) || !(speed > 0.0)) {
    throw std::invalid_argument("required_gradient inputs must be positive");
  }
  const double t = interaction_length / speed;
  // 2 * (1/2) (mu/m) g t^2 = target
  return target_split / ((k.bohr_magneton / k.electron_mass) * t * t);
}

ElectronState step(const ElectronState& state, const ForceModel& model, double dt,
                   Scheme scheme) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  try {
    return scheme == Scheme::rk4 ? rk4(state, model, dt) : boris(state, model, dt);
  } catch (const SingularityError& e) {
    throw StepError(std::string("step failed at ") + describe(state.position) + ": " + e.what(),
                    state);
  }
}

ElectronState propagate(const ElectronState& state, const ForceModel& model,
                        const IntegratorConfig& cfg, double exit_plane_x,
                        const TrajectoryObserver& observer) {
  cfg.validate();
  if (!(state.position.x < exit_plane_x)) {
    throw std::invalid_argument("electron already at or beyond the exit plane");
  }
  if (!(state.velocity.x > 0.0)) {
    throw std::invalid_argument("electron must move towards the exit plane (vx > 0)");
  }
  ElectronState current = state;
  double t = 0.0;
  if (observer) observer(t, current);
  for (std::size_t n = 0; n < cfg.max_steps; ++n) {
    const ElectronState next = step(current, model, cfg.time_step, cfg.scheme);
    if (next.position.x >= exit_plane_x) {
      const double f = (exit_plane_x - current.position.x) / (next.position.x - current.position.x);
      ElectronState out{current.position + f * (next.position - current.position),
                        current.velocity + f * (next.velocity - current.velocity), current.spin};
      out.position.x = exit_plane_x;
      if (observer) observer(t + f * cfg.time_step, out);
      return out;
    }
    current = next;
    t += cfg.time_step;
    if (observer) observer(t, current);
  }
  throw TruncationError("max_steps exhausted before reaching x=" + format_double(exit_plane_x),
                        current);
}

void write_trajectory_csv(std::ostream& out, const ElectronState& state, const ForceModel& model,
                          const IntegratorConfig& cfg, double exit_plane_x, std::size_t stride,
                          bool header) {
  if (stride == 0) stride = 1;
  if (header) out << "t,x,y,z,vx,vy,vz,spin_sign\n";
  std::size_t n = 0;
  auto row = [&](double t, const ElectronState& s) {
    out << format_double(t) << ',' << format_double(s.position.x) << ','
        << format_double(s.position.y) << ',' << format_double(s.position.z) << ','
        << format_double(s.velocity.x) << ',' << format_double(s.velocity.y) << ','
        << format_double(s.velocity.z) << ',' << static_cast<int>(s.spin) << '\n';
  };
  ElectronState last = state;
  double last_t = 0.0;
  bool last_written = false;
  propagate(state, model, cfg, exit_plane_x, [&](double t, const ElectronState& s) {
    last = s;
    last_t = t;
    last_written = (n % stride == 0);
    if (last_written) row(t, s);
    ++n;
  });
  if (!last_written) row(last_t, last);
}

}  // namespace sgsim
