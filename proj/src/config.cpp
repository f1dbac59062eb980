#include "sgsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>

#include "sgsim/format.hpp"
#include "sgsim/kinematics.hpp"

namespace sgsim {
namespace {

enum class Dim { length, voltage, field, gradient, time, current, efield, none };

struct Unit {
  std::string_view name;
  double scale;
};

std::span<const Unit> units_for(Dim d) {
  static constexpr std::array<Unit, 4> length{{{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}};
  static constexpr std::array<Unit, 2> voltage{{{"V", 1.0}, {"kV", 1e3}}};
  static constexpr std::array<Unit, 2> field{{{"T", 1.0}, {"mT", 1e-3}}};
  static constexpr std::array<Unit, 1> gradient{{{"T_per_m", 1.0}}};
  static constexpr std::array<Unit, 3> time{{{"s", 1.0}, {"ns", 1e-9}, {"ps", 1e-12}}};
  static constexpr std::array<Unit, 1> current{{{"A", 1.0}}};
  static constexpr std::array<Unit, 1> efield{{{"V_per_m", 1.0}}};
  switch (d) {
    case Dim::length: return length;
    case Dim::voltage: return voltage;
    case Dim::field: return field;
    case Dim::gradient: return gradient;
    case Dim::time: return time;
    case Dim::current: return current;
    case Dim::efield: return efield;
    case Dim::none: break;
  }
  return {};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) { throw ConfigError(line, what); }

struct NumberToken {
  double value;
  std::string_view unit;
};

NumberToken split_number(std::string_view text, std::size_t line) {
  text = trim(text);
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr == begin) fail(line, "expected a number, got '" + std::string(text) + "'");
  if (!std::isfinite(v)) fail(line, "value must be finite");
  return {v, trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)))};
}

double apply_unit(NumberToken t, Dim dim, std::size_t line) {
  if (t.unit.empty()) return t.value;
  for (const auto& u : units_for(dim)) {
    if (u.name == t.unit) return t.value * u.scale;
  }
  std::string allowed;
  for (const auto& u : units_for(dim)) allowed += (allowed.empty() ? "" : ", ") + std::string(u.name);
  fail(line, "unit '" + std::string(t.unit) + "' does not fit this key" +
                 (allowed.empty() ? std::string(" (dimensionless)") : " (allowed: " + allowed + ")"));
}

double parse_quantity(std::string_view text, Dim dim, std::size_t line) {
  return apply_unit(split_number(text, line), dim, line);
}

std::vector<double> parse_list(std::string_view text, Dim dim, std::size_t line) {
  std::vector<NumberToken> tokens;
  text = trim(text);
  if (text.empty()) return {};
  while (true) {
    const auto comma = text.find(',');
    tokens.push_back(split_number(text.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  const std::string_view shared = tokens.back().unit;
  std::vector<double> out;
  out.reserve(tokens.size());
  for (auto t : tokens) {
    if (t.unit.empty()) t.unit = shared;
    out.push_back(apply_unit(t, dim, line));
  }
  return out;
}

template <class Int>
Int parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  unsigned long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(line, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  if (v > static_cast<unsigned long long>(std::numeric_limits<Int>::max())) fail(line, "integer too large");
  return static_cast<Int>(v);
}

bool parse_bool(std::string_view text, std::size_t line) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  fail(line, "expected true or false, got '" + std::string(text) + "'");
}

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::pair<std::string_view, E>, N>& names,
             std::size_t line) {
  text = trim(text);
  for (const auto& [n, e] : names) {
    if (n == text) return e;
  }
  std::string allowed;
  for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(n);
  fail(line, "unknown value '" + std::string(text) + "' (expected one of: " + allowed + ")");
}

template <class E, std::size_t N>
std::string_view enum_name(E value, const std::array<std::pair<std::string_view, E>, N>& names) {
  for (const auto& [n, e] : names) {
    if (e == value) return n;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, FieldKind>, 5> kFieldNames{{
    {"zero", FieldKind::zero},
    {"uniform", FieldKind::uniform},
    {"ideal_gradient", FieldKind::ideal_gradient},
    {"two_wire", FieldKind::two_wire},
    {"sharp_tip", FieldKind::sharp_tip},
}};

constexpr std::array<std::pair<std::string_view, LorentzCoupling>, 3> kLorentzNames{{
    {"full_field", LorentzCoupling::full_field},
    {"on_axis", LorentzCoupling::on_axis},
    {"off", LorentzCoupling::off},
}};

constexpr std::array<std::pair<std::string_view, Scheme>, 2> kSchemeNames{{
    {"rk4", Scheme::rk4},
    {"semi_implicit", Scheme::semi_implicit},
}};

constexpr std::array<std::pair<std::string_view, Command>, 6> kCommandNames{{
    {"table1", Command::table1},
    {"fieldmap", Command::fieldmap},
    {"scenario", Command::scenario},
    {"gradient-sweep", Command::gradient_sweep},
    {"voltage-sweep", Command::voltage_sweep},
    {"required-gradient", Command::required_gradient},
}};

using Check = std::function<void(double, std::size_t)>;

Check any() {
  return [](double, std::size_t) {};
}
Check positive(std::string what) {
  return [what](double v, std::size_t line) {
    if (!(v > 0.0)) fail(line, what + " must be > 0");
  };
}
Check non_negative(std::string what) {
  return [what](double v, std::size_t line) {
    if (!(v >= 0.0)) fail(line, what + " must be >= 0");
  };
}

struct KeyDef {
  std::string_view name;
  std::function<void(Params&, std::string_view, std::size_t)> set;
  std::function<std::string(const Params&)> get;
};

template <class Ref>
KeyDef real(std::string_view name, Dim dim, Ref ref, Check check = any()) {
  return {name,
          [=](Params& p, std::string_view v, std::size_t line) {
            const double x = parse_quantity(v, dim, line);
            check(x, line);
            ref(p) = x;
          },
          [=](const Params& p) { return format_double(ref(p)); }};
}

template <class Ref>
KeyDef optional_real(std::string_view name, Dim dim, Ref ref, Check check = any()) {
  return {name,
          [=](Params& p, std::string_view v, std::size_t line) {
            if (trim(v) == "auto") {
              ref(p).reset();
              return;
            }
            const double x = parse_quantity(v, dim, line);
            check(x, line);
            ref(p) = x;
          },
          [=](const Params& p) { return ref(p) ? format_double(*ref(p)) : std::string("auto"); }};
}

template <class Ref>
KeyDef integer(std::string_view name, Ref ref, std::size_t minimum = 0) {
  return {name,
          [=](Params& p, std::string_view v, std::size_t line) {
            using Int = std::remove_reference_t<decltype(ref(p))>;
            const Int x = parse_integer<Int>(v, line);
            if (x < minimum) fail(line, std::string(name) + " must be >= " + std::to_string(minimum));
            ref(p) = x;
          },
          [=](const Params& p) { return std::to_string(ref(p)); }};
}

template <class Ref>
KeyDef list(std::string_view name, Dim dim, Ref ref, Check check = any()) {
  return {name,
          [=](Params& p, std::string_view v, std::size_t line) {
            auto values = parse_list(v, dim, line);
            for (double x : values) check(x, line);
            ref(p) = std::move(values);
          },
          [=](const Params& p) {
            std::string s;
            for (double x : ref(p)) s += (s.empty() ? "" : ", ") + format_double(x);
            return s;
          }};
}

template <class Ref, class Names>
KeyDef choice(std::string_view name, Ref ref, const Names& names) {
  return {name,
          [=](Params& p, std::string_view v, std::size_t line) { ref(p) = parse_enum(v, names, line); },
          [=](const Params& p) { return std::string(enum_name(ref(p), names)); }};
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> keys = [] {
    std::vector<KeyDef> k;
    k.push_back(real("voltage", Dim::voltage, [](auto& p) -> auto& { return p.beam.voltage; },
                     positive("voltage (the gun accelerates electrons only for V > 0)")));
    k.push_back(real("sigma", Dim::length, [](auto& p) -> auto& { return p.beam.sigma_transverse; },
                     non_negative("sigma")));
    k.push_back(integer("count", [](auto& p) -> auto& { return p.beam.count; }, 1));
    k.push_back(integer("seed", [](auto& p) -> auto& { return p.beam.seed; }));
    k.push_back(real("spin_mix", Dim::none, [](auto& p) -> auto& { return p.beam.spin_mix; },
                     [](double v, std::size_t line) {
                       if (!(v >= 0.0 && v <= 1.0)) fail(line, "spin_mix must lie in [0, 1]");
                     }));
    k.push_back(real("gun_exit_x", Dim::length, [](auto& p) -> auto& { return p.geometry.gun_exit_x; }));
    k.push_back(real("magnet_entry_x", Dim::length, [](auto& p) -> auto& { return p.geometry.magnet_entry_x; }));
    k.push_back(real("magnet_exit_x", Dim::length, [](auto& p) -> auto& { return p.geometry.magnet_exit_x; }));
    k.push_back(real("screen_x", Dim::length, [](auto& p) -> auto& { return p.geometry.screen_x; }));
    k.push_back(choice("field", [](auto& p) -> auto& { return p.field; }, kFieldNames));
    k.push_back(real("b0", Dim::field, [](auto& p) -> auto& { return p.b0; }));
    k.push_back(optional_real("gradient", Dim::gradient, [](auto& p) -> auto& { return p.gradient; }));
    k.push_back(real("uniform_bx", Dim::field, [](auto& p) -> auto& { return p.uniform_b.x; }));
    k.push_back(real("uniform_by", Dim::field, [](auto& p) -> auto& { return p.uniform_b.y; }));
    k.push_back(real("uniform_bz", Dim::field, [](auto& p) -> auto& { return p.uniform_b.z; }));
    k.push_back(real("wire_current", Dim::current, [](auto& p) -> auto& { return p.wire_current; },
                     [](double v, std::size_t line) {
                       if (v == 0.0) fail(line, "wire_current must be non-zero");
                     }));
    k.push_back(real("half_separation", Dim::length, [](auto& p) -> auto& { return p.half_separation; },
                     positive("half_separation")));
    k.push_back(optional_real("z_offset", Dim::length, [](auto& p) -> auto& { return p.z_offset; },
                              positive("z_offset")));
    k.push_back(real("tip_field", Dim::field, [](auto& p) -> auto& { return p.tip_field; },
                     non_negative("tip_field")));
    k.push_back(real("tip_radius", Dim::length, [](auto& p) -> auto& { return p.tip_radius; },
                     positive("tip_radius")));
    k.push_back(real("e_field_x", Dim::efield, [](auto& p) -> auto& { return p.electric_field.x; }));
    k.push_back(real("e_field_y", Dim::efield, [](auto& p) -> auto& { return p.electric_field.y; }));
    k.push_back(real("e_field_z", Dim::efield, [](auto& p) -> auto& { return p.electric_field.z; }));
    k.push_back({"spin_force",
                 [](Params& p, std::string_view v, std::size_t line) { p.spin_force = parse_bool(v, line); },
                 [](const Params& p) { return std::string(p.spin_force ? "true" : "false"); }});
    k.push_back(choice("lorentz", [](auto& p) -> auto& { return p.lorentz; }, kLorentzNames));
    k.push_back(choice("scheme", [](auto& p) -> auto& { return p.scheme; }, kSchemeNames));
    k.push_back(optional_real("time_step", Dim::time, [](auto& p) -> auto& { return p.time_step; },
                              positive("time_step")));
    k.push_back(integer("steps_per_transit", [](auto& p) -> auto& { return p.steps_per_transit; }, 1));
    k.push_back({"max_steps",
                 [](Params& p, std::string_view v, std::size_t line) {
                   if (trim(v) == "auto") {
                     p.max_steps.reset();
                     return;
                   }
                   const auto n = parse_integer<std::size_t>(v, line);
                   if (n < 1) fail(line, "max_steps must be >= 1");
                   p.max_steps = n;
                 },
                 [](const Params& p) {
                   return p.max_steps ? std::to_string(*p.max_steps) : std::string("auto");
                 }});
    k.push_back(real("bin_size", Dim::length, [](auto& p) -> auto& { return p.screen.bin_size; },
                     positive("bin_size")));
    k.push_back(integer("bins_y", [](auto& p) -> auto& { return p.screen.bins_y; }, 1));
    k.push_back(integer("bins_z", [](auto& p) -> auto& { return p.screen.bins_z; }, 1));
    k.push_back(integer("map_ny", [](auto& p) -> auto& { return p.map_ny; }, 1));
    k.push_back(integer("map_nz", [](auto& p) -> auto& { return p.map_nz; }, 1));
    k.push_back(optional_real("map_y_min", Dim::length, [](auto& p) -> auto& { return p.map_y_min; }));
    k.push_back(optional_real("map_y_max", Dim::length, [](auto& p) -> auto& { return p.map_y_max; }));
    k.push_back(optional_real("map_z_min", Dim::length, [](auto& p) -> auto& { return p.map_z_min; }));
    k.push_back(optional_real("map_z_max", Dim::length, [](auto& p) -> auto& { return p.map_z_max; }));
    k.push_back(real("target_split", Dim::length, [](auto& p) -> auto& { return p.target_split; },
                     positive("target_split")));
    k.push_back(list("gradients", Dim::gradient, [](auto& p) -> auto& { return p.gradients; }));
    k.push_back(list("voltages", Dim::voltage, [](auto& p) -> auto& { return p.voltages; },
                     positive("every voltage (the gun accelerates electrons only for V > 0)")));
    k.push_back(integer("threads", [](auto& p) -> auto& { return p.threads; }));
    k.push_back(integer("trajectory_count", [](auto& p) -> auto& { return p.trajectory_count; }));
    k.push_back(integer("trajectory_stride", [](auto& p) -> auto& { return p.trajectory_stride; }, 1));
    return k;
  }();
  return keys;
}

const KeyDef* find_key(std::string_view name) {
  const auto& keys = key_table();
  const auto it = std::find_if(keys.begin(), keys.end(), [&](const KeyDef& k) { return k.name == name; });
  return it == keys.end() ? nullptr : &*it;
}

void apply_line(Params& p, std::string_view raw, std::size_t line, std::set<std::string>* seen) {
  std::string_view text = raw;
  if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
  text = trim(text);
  if (text.empty()) return;
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
  const auto key = trim(text.substr(0, eq));
  const auto value = trim(text.substr(eq + 1));
  const KeyDef* def = find_key(key);
  if (!def) fail(line, "unknown key '" + std::string(key) + "'");
  if (seen && !seen->insert(std::string(key)).second) {
    fail(line, "duplicate key '" + std::string(key) + "'");
  }
  def->set(p, value, line);
}

void apply_text(Params& p, std::string_view text) {
  std::set<std::string> seen;
  std::size_t line = 0;
  while (!text.empty() || line == 0) {
    ++line;
    const auto nl = text.find('\n');
    apply_line(p, text.substr(0, nl), line, &seen);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                              : "configuration: " + what),
      line_(line) {}

Params parse_config(std::string_view text, const Params& base) {
  Params p = base;
  apply_text(p, text);
  validate(p);
  return p;
}

std::string render(const Params& params) {
  std::string out;
  for (const auto& k : key_table()) {
    out += k.name;
    out += " = ";
    out += k.get(params);
    out += '\n';
  }
  return out;
}

TwoWireConfig make_two_wire(const Params& p) {
  auto cfg = TwoWireConfig::with_default_offset(p.wire_current, p.half_separation);
  if (p.z_offset) cfg.z_offset = *p.z_offset;
  return cfg;
}

double resolved_gradient(const Params& p) {
  if (p.gradient) return *p.gradient;
  const double speed = accelerate_classical(p.beam.voltage).velocity;
  return required_gradient(p.target_split, p.geometry.interaction_length(), speed);
}

FieldConfig make_field(const Params& p) {
  switch (p.field) {
    case FieldKind::zero: return ZeroField{};
    case FieldKind::uniform: return UniformField{p.uniform_b};
    case FieldKind::ideal_gradient: return IdealGradientField{p.b0, resolved_gradient(p)};
    case FieldKind::two_wire: return make_two_wire(p);
    case FieldKind::sharp_tip: return SharpTipField{p.tip_field, p.tip_radius};
  }
  return ZeroField{};
}

ForceModel make_force_model(const Params& p) {
  ForceModel m;
  m.electric_field = p.electric_field;
  m.field = make_field(p);
  m.include_spin_force = p.spin_force;
  m.lorentz = p.lorentz;
  return m;
}

IntegratorConfig make_integrator(const Params& p) {
  const double speed = accelerate_classical(p.beam.voltage).velocity;
  IntegratorConfig cfg =
      integrator_for_transit(p.geometry.interaction_length(), speed, p.steps_per_transit, p.scheme);
  if (p.time_step) {
    cfg.time_step = *p.time_step;
    const double steps = p.geometry.interaction_length() / (speed * *p.time_step);
    cfg.max_steps = static_cast<std::size_t>(std::ceil(1.5 * steps)) + 16;
  }
  if (p.max_steps) cfg.max_steps = *p.max_steps;
  return cfg;
}

void validate(const Params& p) {
  auto wrap = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(0, e.what());
    }
  };
  wrap([&] { p.beam.validate(); });
  wrap([&] { p.geometry.validate(); });
  wrap([&] { p.screen.validate(); });
  wrap([&] { validate(make_field(p)); });
  wrap([&] { make_integrator(p).validate(); });
  if (p.map_y_min && p.map_y_max && !(*p.map_y_min <= *p.map_y_max)) {
    throw ConfigError(0, "map_y_min must not exceed map_y_max");
  }
  if (p.map_z_min && p.map_z_max && !(*p.map_z_min <= *p.map_z_max)) {
    throw ConfigError(0, "map_z_min must not exceed map_z_max");
  }
}

std::string_view command_name(Command c) noexcept { return enum_name(c, kCommandNames); }

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const auto& [n, c] : kCommandNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

Params resolve(const RunConfig& config) {
  Params p;
  if (config.input_path) {
    std::ifstream in(*config.input_path);
    if (!in) throw ConfigError(0, "cannot read config file '" + *config.input_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    apply_text(p, text.str());
  }
  for (const auto& o : config.overrides) {
    try {
      apply_line(p, o, 1, nullptr);
    } catch (const ConfigError& e) {
      throw ConfigError(0, "--set " + o + ": " + e.what());
    }
  }
  if (config.seed) p.beam.seed = *config.seed;
  if (config.threads) p.threads = *config.threads;
  validate(p);
  return p;
}

}  // namespace sgsim
