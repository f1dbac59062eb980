#include "sgsim/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sgsim {
namespace {

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct WireDistances {
  double d;    // z + z0
  double r1s;  // squared distance to the +a wire
  double r2s;  // squared distance to the -a wire
};

WireDistances distances(const TwoWireConfig& cfg, double y, double z) {
  const double a = cfg.half_separation;
  const double d = z + cfg.z_offset;
  const WireDistances w{d, (a - y) * (a - y) + d * d, (a + y) * (a + y) + d * d};
  constexpr double guard2 = singularity_guard * singularity_guard;
  if (w.r1s < guard2 || w.r2s < guard2) {
    throw SingularityError("two-wire field evaluated on a wire at y=" + std::to_string(y) +
                               " z=" + std::to_string(z),
                           Vec3{0.0, y, z});
  }
  return w;
}

// H of one line current along +x through (yw, zw), with its (y,z) derivatives.
struct LineField {
  double hy, hz, dhz_dz, dhy_dy, dhz_dy;
};

LineField line_field(double current, double dy, double dz) {
  const double rho2 = dy * dy + dz * dz;
  const double c = current / (2.0 * pi * rho2);
  const double c2 = current / (pi * rho2 * rho2);
  return {-c * dz, c * dy, -c2 * dy * dz, c2 * dy * dz, 0.5 * c2 * (dz * dz - dy * dy)};
}

FieldSample two_wire_sample(const TwoWireConfig& cfg, const Vec3& p, const Constants& k) {
  distances(cfg, p.y, p.z);
  const double a = cfg.half_separation;
  const double dz = p.z + cfg.z_offset;
  const auto w1 = line_field(cfg.current, p.y - a, dz);
  const auto w2 = line_field(-cfg.current, p.y + a, dz);
  const double mu0 = k.vacuum_permeability;
  FieldSample s;
  s.b = Vec3{0.0, mu0 * (w1.hy + w2.hy), mu0 * (w1.hz + w2.hz)};
  s.dbz_dz = mu0 * (w1.dhz_dz + w2.dhz_dz);
  s.dby_dy = mu0 * (w1.dhy_dy + w2.dhy_dy);
  s.dbz_dy = mu0 * (w1.dhz_dy + w2.dhz_dy);
  return s;
}

FieldSample ideal_gradient_sample(double b0, double g, const Vec3& p) {
  FieldSample s;
  s.b = Vec3{0.0, -g * p.y, b0 + g * p.z};
  s.dbz_dz = g;
  s.dby_dy = -g;
  s.dbz_dy = 0.0;
  return s;
}

FieldSample sharp_tip_sample(const SharpTipField& tip, const Vec3& p) {
  const double r = tip.tip_radius;
  const double g = sharp_tip_gradient(tip.b_surface, r);
  const double rho = std::hypot(p.y, p.z);
  const double cutoff = 10.0 * r;
  if (rho >= cutoff) return {};
  FieldSample s = ideal_gradient_sample(tip.b_surface, g, p);
  if (rho <= r) return s;

  const double phase = pi * (rho - r) / (cutoff - r);
  const double w = 0.5 * (1.0 + std::cos(phase));
  const double dw = -0.5 * pi / (cutoff - r) * std::sin(phase);
  const double by = s.b.y;
  const double bz = s.b.z;
  const double ry = p.y / rho;
  const double rz = p.z / rho;
  s.b = Vec3{0.0, w * by, w * bz};
  s.dbz_dz = w * g + dw * rz * bz;
  s.dbz_dy = dw * ry * bz;
  s.dby_dy = -w * g + dw * ry * by;
  return s;
}

}  // namespace

TwoWireConfig TwoWireConfig::with_default_offset(double current, double half_separation) {
  return {current, half_separation, std::sqrt(5.0 / 3.0) * half_separation};
}

void TwoWireConfig::validate() const {
  if (!(current != 0.0) || !std::isfinite(current)) {
    throw std::invalid_argument("two-wire current must be non-zero and finite");
  }
  if (!(half_separation > 0.0) || !std::isfinite(half_separation)) {
    throw std::invalid_argument("two-wire half separation must be positive");
  }
  if (!(z_offset > 0.0) || !std::isfinite(z_offset)) {
    throw std::invalid_argument("two-wire z offset must be positive");
  }
}

void validate(const FieldConfig& cfg) {
  std::visit(overloaded{
                 [](const ZeroField&) {},
                 [](const UniformField& f) {
                   if (!is_finite(f.b)) throw std::invalid_argument("uniform field must be finite");
                 },
                 [](const IdealGradientField& f) {
                   if (!std::isfinite(f.b0) || !std::isfinite(f.gradient)) {
                     throw std::invalid_argument("ideal-gradient parameters must be finite");
                   }
                 },
                 [](const TwoWireConfig& f) { f.validate(); },
                 [](const SharpTipField& f) {
                   if (!(f.tip_radius > 0.0) || !std::isfinite(f.tip_radius)) {
                     throw std::invalid_argument("sharp-tip radius must be positive");
                   }
                   if (!(f.b_surface >= 0.0) || !std::isfinite(f.b_surface)) {
                     throw std::invalid_argument("sharp-tip surface field must be >= 0");
                   }
                 },
             },
             cfg);
}

Vec3 two_wire_field(const TwoWireConfig& cfg, const Vec3& point) {
  distances(cfg, point.y, point.z);
  const double a = cfg.half_separation;
  const double dz = point.z + cfg.z_offset;
  const auto w1 = line_field(cfg.current, point.y - a, dz);
  const auto w2 = line_field(-cfg.current, point.y + a, dz);
  return {0.0, w1.hy + w2.hy, w1.hz + w2.hz};
}

double two_wire_magnitude(const TwoWireConfig& cfg, double y, double z) {
  const auto w = distances(cfg, y, z);
  return std::abs(cfg.current) / pi * cfg.half_separation / std::sqrt(w.r1s * w.r2s);
}

double two_wire_gradient(const TwoWireConfig& cfg, double y, double z) {
  const auto w = distances(cfg, y, z);
  const double h = two_wire_magnitude(cfg, y, z);
  return -h * w.d * (1.0 / w.r1s + 1.0 / w.r2s);
}

double two_wire_gradient_y(const TwoWireConfig& cfg, double y, double z) {
  const auto w = distances(cfg, y, z);
  const double a = cfg.half_separation;
  const double h = two_wire_magnitude(cfg, y, z);
  return h * ((a - y) / w.r1s - (a + y) / w.r2s);
}

InhomogeneityPlane constant_inhomogeneity_plane(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("half separation must be positive");
  }
  const double root53 = std::sqrt(5.0 / 3.0);
  return {root53 * a, (std::numbers::sqrt2 - root53) * a, 2.0 * root53 / (1.0 + 5.0 / 3.0)};
}

double epsilon_profile(const TwoWireConfig& cfg, double y, double z) {
  const double h = two_wire_magnitude(cfg, y, z);
  if (h == 0.0) throw std::domain_error("field magnitude vanishes; epsilon undefined");
  return std::abs(two_wire_gradient(cfg, y, z)) * cfg.half_separation / h;
}

GridRange radiation_window(double a) { return {-2.0 * a / 3.0, 2.0 * a / 3.0}; }

InhomogeneityMap inhomogeneity_map(const TwoWireConfig& cfg, GridRange y, GridRange z,
                                   std::size_t ny, std::size_t nz, const Constants& k) {
  cfg.validate();
  if (ny == 0 || nz == 0) throw std::invalid_argument("map resolution must be at least 1x1");
  auto coord = [](GridRange r, std::size_t i, std::size_t n) {
    if (n == 1) return 0.5 * (r.min + r.max);
    return r.min + (r.max - r.min) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  const double mu0 = k.vacuum_permeability;
  InhomogeneityMap map;
  map.ny = ny;
  map.nz = nz;
  map.points.reserve(ny * nz);
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      MapPoint p;
      p.y = coord(y, iy, ny);
      p.z = coord(z, iz, nz);
      p.h = two_wire_magnitude(cfg, p.y, p.z);
      const double dhdz = two_wire_gradient(cfg, p.y, p.z);
      const double dhdy = two_wire_gradient_y(cfg, p.y, p.z);
      p.b = mu0 * p.h;
      p.dbdz = mu0 * dhdz;
      p.grad_b = mu0 * std::hypot(dhdy, dhdz);
      p.epsilon = std::abs(dhdz) * cfg.half_separation / p.h;
      p.sample = two_wire_sample(cfg, Vec3{0.0, p.y, p.z}, k);
      map.points.push_back(p);
    }
  }
  return map;
}

double sharp_tip_gradient(double b_surface, double tip_radius) {
  if (!(tip_radius > 0.0)) throw std::domain_error("tip radius must be positive");
  if (!(b_surface >= 0.0)) throw std::domain_error("surface field must be non-negative");
  return b_surface / tip_radius;
}

FieldSample sample(const FieldConfig& cfg, const Vec3& point, const Constants& k) {
  return std::visit(
      overloaded{
          [](const ZeroField&) { return FieldSample{}; },
          [](const UniformField& f) { return FieldSample{f.b, 0.0, 0.0, 0.0}; },
          [&](const IdealGradientField& f) { return ideal_gradient_sample(f.b0, f.gradient, point); },
          [&](const TwoWireConfig& f) { return two_wire_sample(f, point, k); },
          [&](const SharpTipField& f) { return sharp_tip_sample(f, point); },
      },
      cfg);
}

}  // namespace sgsim
