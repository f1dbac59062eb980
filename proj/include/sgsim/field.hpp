#pragma once

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sgsim/constants.hpp"
#include "sgsim/vec3.hpp"

namespace sgsim {

/// Closest approach to a wire line before evaluation is refused (m).
inline constexpr double singularity_guard = 1e-9;

/// Raised when a field is evaluated on (or within singularity_guard of) a
/// line current.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, Vec3 point)
      : std::runtime_error(what), point_(point) {}
  const Vec3& point() const noexcept { return point_; }

 private:
  Vec3 point_;
};

/// Two anti-parallel line currents along x at y = +-a, z = -z_offset.
/// The pole pieces of a Stern-Gerlach magnet sit on equipotentials of this
/// system; the working plane is z = 0.
struct TwoWireConfig {
  double current = 1.0;          // A, +I in the wire at y = +a, -I at y = -a
  double half_separation = 1.0;  // a, m
  double z_offset = 0.0;         // z0, m

  /// z0 = sqrt(5/3) a, the plane where the gradient-to-field ratio is 0.968.
  static TwoWireConfig with_default_offset(double current, double half_separation);
  void validate() const;

  friend bool operator==(const TwoWireConfig&, const TwoWireConfig&) = default;
};

struct ZeroField {
  friend bool operator==(const ZeroField&, const ZeroField&) = default;
};

struct UniformField {
  Vec3 b;  // T
  friend bool operator==(const UniformField&, const UniformField&) = default;
};

/// Bz = b0 + g z, By = -g y. The By term is the divergence-free completion.
struct IdealGradientField {
  double b0 = 0.0;        // T
  double gradient = 0.0;  // T/m
  friend bool operator==(const IdealGradientField&, const IdealGradientField&) = default;
};

/// Pointed pole piece. Inside tip_radius of the beam axis the field is an
/// ideal gradient with b0 = b_surface and g = b_surface / tip_radius; it is
/// tapered to zero with a cosine ramp between tip_radius and 10 tip_radius.
struct SharpTipField {
  double b_surface = 0.0;   // T
  double tip_radius = 1.0;  // m
  friend bool operator==(const SharpTipField&, const SharpTipField&) = default;
};

using FieldConfig =
    std::variant<ZeroField, UniformField, IdealGradientField, TwoWireConfig, SharpTipField>;

void validate(const FieldConfig& cfg);

/// Magnetic induction and the derivatives the spin force needs.
struct FieldSample {
  Vec3 b;               // T
  double dbz_dz = 0.0;  // T/m
  double dby_dy = 0.0;  // T/m
  double dbz_dy = 0.0;  // T/m (= dBy/dz for curl-free fields)
};

// --- two-wire system, H in A/m --------------------------------------------

/// Vector superposition of both wire fields. No x component.
Vec3 two_wire_field(const TwoWireConfig& cfg, const Vec3& point);

/// |H| = (|I|/pi) a / (r1 r2).
double two_wire_magnitude(const TwoWireConfig& cfg, double y, double z);

/// Signed d|H|/dz. Negative in the working region: the field weakens away
/// from the wires.
double two_wire_gradient(const TwoWireConfig& cfg, double y, double z);

/// Signed d|H|/dy.
double two_wire_gradient_y(const TwoWireConfig& cfg, double y, double z);

struct InhomogeneityPlane {
  double z0;       // wire-plane offset, sqrt(5/3) a
  double z1;       // flattest-gradient plane above z = 0, (sqrt 2 - sqrt(5/3)) a
  double epsilon;  // |dH/dz| a / H at y = z = 0
};

/// Throws std::domain_error for a <= 0.
InhomogeneityPlane constant_inhomogeneity_plane(double half_separation);

/// |dH/dz| a / H. Throws SingularityError near a wire, std::domain_error if H = 0.
double epsilon_profile(const TwoWireConfig& cfg, double y, double z);

struct GridRange {
  double min = 0.0;
  double max = 0.0;
};

/// y-extent of the radiation window, 4/3 a centred on y = 0.
GridRange radiation_window(double half_separation);

struct MapPoint {
  double y = 0.0;
  double z = 0.0;
  double h = 0.0;        // |H|, A/m
  double b = 0.0;        // |B| = mu0 |H|, T
  double dbdz = 0.0;     // d|B|/dz, T/m
  double grad_b = 0.0;   // |grad |B||, T/m
  double epsilon = 0.0;  // |dH/dz| a / H
  FieldSample sample;
};

struct InhomogeneityMap {
  std::size_t ny = 0;
  std::size_t nz = 0;
  std::vector<MapPoint> points;  // row-major, z index outer

  const MapPoint& at(std::size_t iy, std::size_t iz) const { return points[iz * ny + iy]; }
};

/// Rectangular grid. Coordinate i of n is min + (max - min) * i / (n - 1);
/// n = 1 samples the range midpoint. Going from n to 2n - 1 points reproduces
/// every old point exactly.
InhomogeneityMap inhomogeneity_map(const TwoWireConfig& cfg, GridRange y, GridRange z,
                                   std::size_t ny, std::size_t nz,
                                   const Constants& k = constants());

/// dB/dz = B/a. Throws std::domain_error for tip_radius <= 0 or b_surface < 0.
double sharp_tip_gradient(double b_surface, double tip_radius);

/// Evaluate any field model at a point. The two-wire branch converts H to B
/// with B = mu0 H; this is the only place that conversion happens.
FieldSample sample(const FieldConfig& cfg, const Vec3& point, const Constants& k = constants());

}  // namespace sgsim
