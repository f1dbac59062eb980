#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sgsim/config.hpp"
#include "sgsim/dynamics.hpp"
#include "sgsim/experiment.hpp"
#include "sgsim/field.hpp"
#include "sgsim/kinematics.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sgsim;

namespace {

void bind_core(py::module_& m) {
  py::enum_<Precision>(m, "Precision").value("paper", Precision::paper).value("codata", Precision::codata);

  py::class_<Constants>(m, "Constants")
      .def_readonly("electron_charge_magnitude", &Constants::electron_charge_magnitude)
      .def_readonly("electron_mass", &Constants::electron_mass)
      .def_readonly("bohr_magneton", &Constants::bohr_magneton)
      .def_readonly("speed_of_light", &Constants::speed_of_light)
      .def_readonly("planck_constant", &Constants::planck_constant)
      .def_readonly("vacuum_permeability", &Constants::vacuum_permeability);
  m.def("constants", &constants, "precision"_a = Precision::paper);

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }), "x"_a, "y"_a, "z"_a)
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("__repr__", [](const Vec3& v) {
        std::ostringstream os;
        os << "Vec3(" << v.x << ", " << v.y << ", " << v.z << ")";
        return os.str();
      });

  py::enum_<Spin>(m, "Spin").value("up", Spin::up).value("down", Spin::down);

  py::class_<ElectronState>(m, "ElectronState")
      .def(py::init([](Vec3 p, Vec3 v, Spin s) { return ElectronState{p, v, s}; }), "position"_a,
           "velocity"_a, "spin"_a = Spin::up)
      .def_readwrite("position", &ElectronState::position)
      .def_readwrite("velocity", &ElectronState::velocity)
      .def_readwrite("spin", &ElectronState::spin);
}

void bind_kinematics(py::module_& m) {
  py::class_<KinematicsRow>(m, "KinematicsRow")
      .def_readonly("voltage", &KinematicsRow::voltage)
      .def_readonly("velocity", &KinematicsRow::velocity)
      .def_readonly("mass", &KinematicsRow::mass)
      .def_readonly("energy", &KinematicsRow::energy)
      .def_readonly("momentum", &KinematicsRow::momentum)
      .def_readonly("wavelength", &KinematicsRow::wavelength);
  m.def("accelerate_classical", [](double v) { return accelerate_classical(v); }, "voltage"_a);
  m.def("accelerate_relativistic", [](double v) { return accelerate_relativistic(v); }, "voltage"_a);
  m.def("gamma_factor", [](double v) { return gamma_factor(v); }, "velocity"_a);
  m.def("table_1", [] { return table_1(); });
}

void bind_field(py::module_& m) {
  py::class_<TwoWireConfig>(m, "TwoWireConfig")
      .def(py::init([](double current, double a, std::optional<double> z0) {
             auto c = TwoWireConfig::with_default_offset(current, a);
             if (z0) c.z_offset = *z0;
             return c;
           }),
           "current"_a, "half_separation"_a, "z_offset"_a = py::none())
      .def_readwrite("current", &TwoWireConfig::current)
      .def_readwrite("half_separation", &TwoWireConfig::half_separation)
      .def_readwrite("z_offset", &TwoWireConfig::z_offset);
  py::class_<ZeroField>(m, "ZeroField").def(py::init<>());
  py::class_<UniformField>(m, "UniformField")
      .def(py::init([](Vec3 b) { return UniformField{b}; }), "b"_a)
      .def_readwrite("b", &UniformField::b);
  py::class_<IdealGradientField>(m, "IdealGradientField")
      .def(py::init([](double b0, double g) { return IdealGradientField{b0, g}; }), "b0"_a, "gradient"_a)
      .def_readwrite("b0", &IdealGradientField::b0)
      .def_readwrite("gradient", &IdealGradientField::gradient);
  py::class_<SharpTipField>(m, "SharpTipField")
      .def(py::init([](double b, double r) { return SharpTipField{b, r}; }), "b_surface"_a, "tip_radius"_a)
      .def_readwrite("b_surface", &SharpTipField::b_surface)
      .def_readwrite("tip_radius", &SharpTipField::tip_radius);
  py::class_<FieldSample>(m, "FieldSample")
      .def_readonly("b", &FieldSample::b)
      .def_readonly("dbz_dz", &FieldSample::dbz_dz)
      .def_readonly("dby_dy", &FieldSample::dby_dy)
      .def_readonly("dbz_dy", &FieldSample::dbz_dy);
  py::class_<InhomogeneityPlane>(m, "InhomogeneityPlane")
      .def_readonly("z0", &InhomogeneityPlane::z0)
      .def_readonly("z1", &InhomogeneityPlane::z1)
      .def_readonly("epsilon", &InhomogeneityPlane::epsilon);

  m.def("sample", [](const FieldConfig& f, const Vec3& p) { return sample(f, p); }, "field"_a, "point"_a);
  m.def("two_wire_field", &two_wire_field, "cfg"_a, "point"_a);
  m.def("two_wire_magnitude", &two_wire_magnitude, "cfg"_a, "y"_a, "z"_a);
  m.def("two_wire_gradient", &two_wire_gradient, "cfg"_a, "y"_a, "z"_a);
  m.def("constant_inhomogeneity_plane", &constant_inhomogeneity_plane, "half_separation"_a);
  m.def("epsilon_profile", &epsilon_profile, "cfg"_a, "y"_a, "z"_a);
  m.def("sharp_tip_gradient", &sharp_tip_gradient, "b_surface"_a, "tip_radius"_a);
  m.def(
      "inhomogeneity_map",
      [](const TwoWireConfig& cfg, std::pair<double, double> y, std::pair<double, double> z,
         std::size_t ny, std::size_t nz) {
        const auto map = inhomogeneity_map(cfg, {y.first, y.second}, {z.first, z.second}, ny, nz);
        py::dict out;
        std::vector<double> ys, zs, h, b, dbdz, eps;
        for (const auto& p : map.points) {
          ys.push_back(p.y);
          zs.push_back(p.z);
          h.push_back(p.h);
          b.push_back(p.b);
          dbdz.push_back(p.dbdz);
          eps.push_back(p.epsilon);
        }
        out["y"] = ys;
        out["z"] = zs;
        out["H"] = h;
        out["B"] = b;
        out["dBdz"] = dbdz;
        out["epsilon"] = eps;
        out["shape"] = py::make_tuple(map.nz, map.ny);
        return out;
      },
      "cfg"_a, "y_range"_a, "z_range"_a, "ny"_a, "nz"_a);
}

void bind_dynamics(py::module_& m) {
  py::enum_<LorentzCoupling>(m, "LorentzCoupling")
      .value("full_field", LorentzCoupling::full_field)
      .value("on_axis", LorentzCoupling::on_axis)
      .value("off", LorentzCoupling::off);
  py::enum_<Scheme>(m, "Scheme").value("rk4", Scheme::rk4).value("semi_implicit", Scheme::semi_implicit);

  py::class_<ForceModel>(m, "ForceModel")
      .def(py::init([](FieldConfig field, Vec3 e, bool spin, LorentzCoupling lorentz) {
             ForceModel fm;
             fm.field = std::move(field);
             fm.electric_field = e;
             fm.include_spin_force = spin;
             fm.lorentz = lorentz;
             return fm;
           }),
           "field"_a = FieldConfig{ZeroField{}}, "electric_field"_a = Vec3{},
           "include_spin_force"_a = true, "lorentz"_a = LorentzCoupling::full_field)
      .def_readwrite("field", &ForceModel::field)
      .def_readwrite("electric_field", &ForceModel::electric_field)
      .def_readwrite("include_spin_force", &ForceModel::include_spin_force)
      .def_readwrite("lorentz", &ForceModel::lorentz);

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init([](double dt, std::size_t max_steps, Scheme s) { return IntegratorConfig{dt, max_steps, s}; }),
           "time_step"_a, "max_steps"_a, "scheme"_a = Scheme::rk4)
      .def_readwrite("time_step", &IntegratorConfig::time_step)
      .def_readwrite("max_steps", &IntegratorConfig::max_steps)
      .def_readwrite("scheme", &IntegratorConfig::scheme);
  m.def("integrator_for_transit", &integrator_for_transit, "length"_a, "speed"_a,
        "steps_per_transit"_a = 1000, "scheme"_a = Scheme::rk4);

  m.def("lorentz_force", &lorentz_force, "state"_a, "model"_a);
  m.def("spin_force", &spin_force, "state"_a, "model"_a);
  m.def(
      "analytic_deflection",
      [](double g, double length, double speed, bool vt) {
        return analytic_deflection({g, length, speed, vt});
      },
      "gradient"_a, "interaction_length"_a, "speed"_a, "include_vt_term"_a = false);
  m.def("required_gradient", [](double s, double l, double v) { return required_gradient(s, l, v); },
        "target_split"_a, "interaction_length"_a, "speed"_a);
  m.def("step", &step, "state"_a, "model"_a, "dt"_a, "scheme"_a = Scheme::rk4);
  m.def("propagate", [](const ElectronState& s, const ForceModel& fm, const IntegratorConfig& cfg,
                        double x) { return propagate(s, fm, cfg, x); },
        "state"_a, "model"_a, "integrator"_a, "exit_plane_x"_a);
}

void bind_experiment(py::module_& m) {
  py::class_<BeamSpec>(m, "BeamSpec")
      .def(py::init([](double v, double sigma, std::size_t n, std::uint64_t seed, double mix) {
             return BeamSpec{v, sigma, n, seed, mix};
           }),
           "voltage"_a = 10e3, "sigma_transverse"_a = 1e-6, "count"_a = 10000, "seed"_a = 1,
           "spin_mix"_a = 0.5)
      .def_readwrite("voltage", &BeamSpec::voltage)
      .def_readwrite("sigma_transverse", &BeamSpec::sigma_transverse)
      .def_readwrite("count", &BeamSpec::count)
      .def_readwrite("seed", &BeamSpec::seed)
      .def_readwrite("spin_mix", &BeamSpec::spin_mix);
  py::class_<Geometry>(m, "Geometry")
      .def(py::init([](double g, double a, double b, double s) { return Geometry{g, a, b, s}; }),
           "gun_exit_x"_a = 0.0, "magnet_entry_x"_a = 0.05, "magnet_exit_x"_a = 0.10, "screen_x"_a = 0.25)
      .def_readwrite("gun_exit_x", &Geometry::gun_exit_x)
      .def_readwrite("magnet_entry_x", &Geometry::magnet_entry_x)
      .def_readwrite("magnet_exit_x", &Geometry::magnet_exit_x)
      .def_readwrite("screen_x", &Geometry::screen_x)
      .def_property_readonly("interaction_length", &Geometry::interaction_length);
  py::class_<SplitReport>(m, "SplitReport")
      .def_readonly("centroid_up_z", &SplitReport::centroid_up_z)
      .def_readonly("centroid_down_z", &SplitReport::centroid_down_z)
      .def_readonly("splitting", &SplitReport::splitting)
      .def_readonly("exit_splitting", &SplitReport::exit_splitting)
      .def_readonly("lorentz_deflection", &SplitReport::lorentz_deflection)
      .def_readonly("standard_error", &SplitReport::standard_error)
      .def_readonly("resolved", &SplitReport::resolved)
      .def_readonly("up_hits", &SplitReport::up_hits)
      .def_readonly("down_hits", &SplitReport::down_hits)
      .def_readonly("lost", &SplitReport::lost);

  m.def("generate_beam", &generate_beam, "spec"_a, "gun_exit_x"_a = 0.0);
  m.def(
      "run_scenario",
      [](const BeamSpec& spec, const Geometry& g, const ForceModel& fm, const IntegratorConfig& cfg,
         unsigned threads) {
        RunOptions opts;
        opts.threads = threads;
        py::gil_scoped_release release;
        return run_scenario(spec, g, fm, cfg, opts).report;
      },
      "spec"_a, "geometry"_a, "model"_a, "integrator"_a, "threads"_a = 1,
      "Run one scenario and return its SplitReport");
  m.def(
      "gradient_sweep",
      [](const BeamSpec& spec, const Geometry& g, const ForceModel& fm, std::vector<double> grads,
         const IntegratorConfig& cfg) { return gradient_sweep(spec, g, fm, grads, cfg); },
      "spec"_a, "geometry"_a, "base_model"_a, "gradients"_a, "integrator"_a);
  m.def(
      "voltage_sweep",
      [](const BeamSpec& spec, std::vector<double> volts, const Geometry& g, const ForceModel& fm,
         const IntegratorConfig& cfg) { return voltage_sweep(spec, volts, g, fm, cfg); },
      "spec"_a, "voltages"_a, "geometry"_a, "model"_a, "integrator"_a);
}

void bind_cli(py::module_& m) {
  m.def(
      "run",
      [](const std::string& command, const std::string& out_dir, std::vector<std::string> overrides,
         std::optional<std::string> config_path) {
        const auto c = parse_command(command);
        if (!c) throw py::value_error("unknown command '" + command + "'");
        RunConfig cfg;
        cfg.command = *c;
        cfg.output_dir = out_dir;
        cfg.overrides = std::move(overrides);
        cfg.input_path = std::move(config_path);
        std::ostringstream out, err;
        const int status = run(cfg, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      "command"_a, "out_dir"_a, "overrides"_a = std::vector<std::string>{}, "config"_a = py::none(),
      "Run one CLI command; returns (status, stdout, stderr)");
  m.def("default_config", [] { return render(Params{}); });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free-electron Stern-Gerlach simulator";
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<StepError>(m, "StepError", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  bind_core(m);
  bind_kinematics(m);
  bind_field(m);
  bind_dynamics(m);
  bind_experiment(m);
  bind_cli(m);
  m.attr("__version__") = "0.1.0";
}
