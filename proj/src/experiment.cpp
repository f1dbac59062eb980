#include "sgsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

#include "sgsim/format.hpp"
#include "sgsim/kinematics.hpp"
#include "sgsim/rng.hpp"

namespace sgsim {
namespace {

struct Outcome {
  ElectronState exit;  // at the magnet exit plane
  Vec3 screen;         // hit position
  Vec3 baseline;       // field-free hit position
};

ElectronState drift_to(const ElectronState& s, double x) {
  ElectronState out = s;
  out.position += s.velocity * ((x - s.position.x) / s.velocity.x);
  out.position.x = x;
  return out;
}

std::optional<Outcome> fly(const ElectronState& start, const Geometry& g, const ForceModel& model,
                           const IntegratorConfig& integrator) {
  Outcome o;
  o.baseline = drift_to(start, g.screen_x).position;
  try {
    const ElectronState entry = drift_to(start, g.magnet_entry_x);
    o.exit = propagate(entry, model, integrator, g.magnet_exit_x);
  } catch (const TruncationError&) {
    return std::nullopt;
  } catch (const StepError&) {
    return std::nullopt;
  }
  if (!(o.exit.velocity.x > 0.0) || !is_finite(o.exit.position)) return std::nullopt;
  o.screen = drift_to(o.exit, g.screen_x).position;
  return o;
}

struct Moments {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = sum / static_cast<double>(n);
    return std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
  }
};

unsigned worker_count(unsigned requested, std::size_t work) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

}  // namespace

void BeamSpec::validate() const {
  if (!(voltage > 0.0) || !std::isfinite(voltage)) {
    throw std::invalid_argument("beam voltage must be positive");
  }
  if (!(sigma_transverse >= 0.0) || !std::isfinite(sigma_transverse)) {
    throw std::invalid_argument("beam sigma must be >= 0");
  }
  if (count < 1) throw std::invalid_argument("beam count must be >= 1");
  if (!(spin_mix >= 0.0 && spin_mix <= 1.0)) {
    throw std::invalid_argument("spin_mix must lie in [0, 1]");
  }
}

void Geometry::validate() const {
  if (!(gun_exit_x < magnet_entry_x && magnet_entry_x < magnet_exit_x &&
        magnet_exit_x < screen_x)) {
    throw std::invalid_argument(
        "geometry must satisfy gun_exit_x < magnet_entry_x < magnet_exit_x < screen_x");
  }
}

void ScreenSpec::validate() const {
  if (!(bin_size > 0.0) || bins_y == 0 || bins_z == 0) {
    throw std::invalid_argument("screen needs a positive bin size and at least one bin");
  }
}

std::uint64_t ScreenImage::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) + overflow;
}

std::vector<ElectronState> generate_beam(const BeamSpec& spec, double gun_exit_x) {
  spec.validate();
  const auto k = constants();
  const double speed = accelerate_classical(spec.voltage, k).velocity;
  const std::size_t n = spec.count;
  const auto n_up = static_cast<std::size_t>(std::llround(spec.spin_mix * static_cast<double>(n)));
  const CounterRng rng(spec.seed);

  std::vector<ElectronState> beam;
  beam.reserve(n);
  std::size_t up_index = 0;
  std::size_t down_index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool up = ((i + 1) * n_up) / n > (i * n_up) / n;
    const std::size_t slot = up ? up_index++ : down_index++;
    const auto [gy, gz] = rng.normal_pair(slot);
    ElectronState e;
    e.position = Vec3{gun_exit_x, spec.sigma_transverse * gy, spec.sigma_transverse * gz};
    e.velocity = Vec3{speed, 0.0, 0.0};
    e.spin = up ? Spin::up : Spin::down;
    beam.push_back(e);
  }
  return beam;
}

ScenarioResult run_scenario(const BeamSpec& spec, const Geometry& geometry,
                            const ForceModel& model, const IntegratorConfig& integrator,
                            const RunOptions& options) {
  geometry.validate();
  integrator.validate();
  options.screen.validate();
  validate(model.field);
  const auto beam = generate_beam(spec, geometry.gun_exit_x);

  std::vector<std::optional<Outcome>> outcomes(beam.size());
  const unsigned workers = worker_count(options.threads, beam.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) outcomes[i] = fly(beam[i], geometry, model, integrator);
  };
  if (workers == 1) {
    work(0, beam.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (beam.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(beam.size(), w * chunk);
      const std::size_t end = std::min(beam.size(), begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }

  // Fixed-order reduction from here on.
  ScenarioResult result;
  SplitReport& rep = result.report;
  Moments up_z, down_z, up_exit, down_exit, all_y, all_z, base_y, base_z;
  for (std::size_t i = 0; i < beam.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o) {
      ++rep.lost;
      continue;
    }
    const bool up = beam[i].spin == Spin::up;
    (up ? up_z : down_z).add(o->screen.z);
    (up ? up_exit : down_exit).add(o->exit.position.z);
    all_y.add(o->screen.y);
    all_z.add(o->screen.z);
    base_y.add(o->baseline.y);
    base_z.add(o->baseline.z);
    result.image.hits.push_back({o->screen.y, o->screen.z, beam[i].spin});
  }
  if (rep.lost * 100 > beam.size()) {
    throw ScenarioError(std::to_string(rep.lost) + " of " + std::to_string(beam.size()) +
                        " electrons were lost before the screen (limit 1%)");
  }

  rep.up_hits = up_z.n;
  rep.down_hits = down_z.n;
  rep.centroid_up_z = up_z.mean();
  rep.centroid_down_z = down_z.mean();
  if (up_z.n > 0 && down_z.n > 0) {
    rep.splitting = std::abs(up_z.mean() - down_z.mean());
    rep.exit_splitting = std::abs(up_exit.mean() - down_exit.mean());
    rep.standard_error = std::sqrt(up_z.variance() / static_cast<double>(up_z.n) +
                                   down_z.variance() / static_cast<double>(down_z.n));
    rep.resolved = rep.splitting > 2.0 * rep.standard_error;
  }
  if (all_y.n > 0) {
    rep.lorentz_deflection = std::hypot(all_y.mean() - base_y.mean(), all_z.mean() - base_z.mean());
  }

  ScreenImage& img = result.image;
  const ScreenSpec& scr = options.screen;
  img.bins_y = scr.bins_y;
  img.bins_z = scr.bins_z;
  img.bin_size = scr.bin_size;
  img.counts.assign(scr.bins_y * scr.bins_z, 0);
  const double cy = all_y.n ? all_y.mean() : 0.0;
  const double cz = all_z.n ? all_z.mean() : 0.0;
  img.origin_y = cy - 0.5 * static_cast<double>(scr.bins_y) * scr.bin_size;
  img.origin_z = cz - 0.5 * static_cast<double>(scr.bins_z) * scr.bin_size;
  for (const auto& h : img.hits) {
    const double fy = std::floor((h.y - img.origin_y) / scr.bin_size);
    const double fz = std::floor((h.z - img.origin_z) / scr.bin_size);
    if (fy < 0.0 || fz < 0.0 || fy >= static_cast<double>(scr.bins_y) ||
        fz >= static_cast<double>(scr.bins_z)) {
      ++img.overflow;
      continue;
    }
    ++img.counts[static_cast<std::size_t>(fz) * scr.bins_y + static_cast<std::size_t>(fy)];
  }
  return result;
}

std::vector<SplitReport> gradient_sweep(const BeamSpec& spec, const Geometry& geometry,
                                        const ForceModel& base_model,
                                        std::span<const double> gradients,
                                        const IntegratorConfig& integrator,
                                        const RunOptions& options) {
  double b0 = 0.0;
  if (const auto* ig = std::get_if<IdealGradientField>(&base_model.field)) {
    b0 = ig->b0;
  } else if (!std::holds_alternative<ZeroField>(base_model.field)) {
    throw std::invalid_argument("gradient_sweep needs an ideal-gradient (or zero) base field");
  }
  std::vector<SplitReport> reports;
  reports.reserve(gradients.size());
  for (double g : gradients) {
    ForceModel model = base_model;
    model.field = IdealGradientField{b0, g};
    try {
      reports.push_back(run_scenario(spec, geometry, model, integrator, options).report);
    } catch (const std::exception& e) {
      throw ScenarioError("gradient " + format_double(g) + " T/m: " + e.what());
    }
  }
  return reports;
}

std::vector<SplitReport> voltage_sweep(const BeamSpec& spec, std::span<const double> voltages,
                                       const Geometry& geometry, const ForceModel& model,
                                       const IntegratorConfig& integrator,
                                       const RunOptions& options) {
  const double v_ref = accelerate_classical(spec.voltage).velocity;
  std::vector<SplitReport> reports;
  reports.reserve(voltages.size());
  for (double voltage : voltages) {
    BeamSpec s = spec;
    s.voltage = voltage;
    try {
      const double ratio = v_ref / accelerate_classical(voltage).velocity;
      IntegratorConfig cfg = integrator;
      cfg.time_step = integrator.time_step * ratio;
      reports.push_back(run_scenario(s, geometry, model, cfg, options).report);
    } catch (const std::exception& e) {
      throw ScenarioError("voltage " + format_double(voltage) + " V: " + e.what());
    }
  }
  return reports;
}

}  // namespace sgsim
