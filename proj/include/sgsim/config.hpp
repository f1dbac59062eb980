#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgsim/dynamics.hpp"
#include "sgsim/experiment.hpp"
#include "sgsim/field.hpp"

namespace sgsim {

enum class Command { table1, fieldmap, scenario, gradient_sweep, voltage_sweep, required_gradient };

enum class FieldKind { zero, uniform, ideal_gradient, two_wire, sharp_tip };

/// Every tunable of a run, in SI units. Unset optionals mean "derive it".
struct Params {
  BeamSpec beam;
  Geometry geometry;

  FieldKind field = FieldKind::ideal_gradient;
  double b0 = 0.0;                  // ideal-gradient base field, T
  std::optional<double> gradient;   // T/m; unset: required_gradient(target_split)
  Vec3 uniform_b{};                 // T
  double wire_current = 1000.0;     // A
  double half_separation = 1e-3;    // m
  std::optional<double> z_offset;   // m; unset: sqrt(5/3) a
  double tip_field = 1.0;           // T
  double tip_radius = 1e-6;         // m
  Vec3 electric_field{};            // V/m
  bool spin_force = true;
  LorentzCoupling lorentz = LorentzCoupling::on_axis;

  Scheme scheme = Scheme::rk4;
  std::optional<double> time_step;  // s; unset: from steps_per_transit
  std::size_t steps_per_transit = 1000;
  std::optional<std::size_t> max_steps;

  ScreenSpec screen;
  std::size_t map_ny = 65;
  std::size_t map_nz = 65;
  std::optional<double> map_y_min, map_y_max;  // unset: radiation window
  std::optional<double> map_z_min, map_z_max;  // unset: [-a/2, a/2]

  double target_split = 20e-6;  // m
  std::vector<double> gradients{0.0, 1e6, 2e6, 4e6};
  std::vector<double> voltages{5e3, 10e3, 15e3, 20e3, 25e3};

  unsigned threads = 1;
  std::size_t trajectory_count = 0;
  std::size_t trajectory_stride = 100;

  friend bool operator==(const Params&, const Params&) = default;
};

/// Parse failure; line() is 1-based, 0 for whole-configuration checks.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Flat `key = value` text, `#` starts a comment. Numbers take an optional
/// unit suffix matching the key's dimension:
///   length m mm um nm | voltage V kV | field T mT | gradient T_per_m |
///   time s ns ps | current A | electric field V_per_m.
/// Lists are comma separated; a unit on the last item applies to bare items.
/// Starts from `base`, so overrides can be layered. Unknown keys, unit
/// mismatches and out-of-range values are errors naming the line.
Params parse_config(std::string_view text, const Params& base = {});

/// Inverse of parse_config: every key, SI values in shortest round-trip form.
std::string render(const Params& params);

/// Cross-field checks (geometry order, field parameters, ...). Throws ConfigError.
void validate(const Params& params);

FieldConfig make_field(const Params& params);
ForceModel make_force_model(const Params& params);
IntegratorConfig make_integrator(const Params& params);
double resolved_gradient(const Params& params);
TwoWireConfig make_two_wire(const Params& params);

std::string_view command_name(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

/// One CLI invocation.
struct RunConfig {
  Command command = Command::scenario;
  std::optional<std::string> input_path;
  std::string output_dir = ".";
  std::vector<std::string> overrides;  // "key=value"
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

/// Config file, then overrides, then --seed/--threads.
Params resolve(const RunConfig& config);

/// Executes the command and writes its outputs plus manifest.txt into
/// output_dir. Returns 0 on success; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sgsim
