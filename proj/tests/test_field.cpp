#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sgsim/field.hpp"
#include "sgsim/rng.hpp"

using namespace sgsim;
using std::numbers::pi;

namespace {

const TwoWireConfig unit = TwoWireConfig::with_default_offset(1.0, 1.0);

// H of one infinite wire along +x through (0, yw, zw) by Simpson quadrature
// of the Biot-Savart integral, with x = rho tan(theta).
Vec3 biot_savart_wire(double current, double yw, double zw, const Vec3& p) {
  const int n = 2000;
  const double rho = std::hypot(p.y - yw, p.z - zw);
  const double h = pi / n;
  Vec3 sum{};
  for (int i = 0; i <= n; ++i) {
    const double theta = -pi / 2 + i * h;
    if (i == 0 || i == n) continue;  // integrand vanishes at the ends
    const double x = p.x + rho * std::tan(theta);
    const double dxdtheta = rho / (std::cos(theta) * std::cos(theta));
    const Vec3 r = p - Vec3{x, yw, zw};
    const double r3 = std::pow(norm(r), 3);
    const Vec3 dl{1.0, 0.0, 0.0};
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    sum += w * (cross(dl, r) / r3) * dxdtheta;
  }
  return current / (4 * pi) * (h / 3.0) * sum;
}

double fd_z(double (*f)(const TwoWireConfig&, double, double), const TwoWireConfig& c, double y,
            double z, double h) {
  return (f(c, y, z + h) - f(c, y, z - h)) / (2 * h);
}

double fd_y(double (*f)(const TwoWireConfig&, double, double), const TwoWireConfig& c, double y,
            double z, double h) {
  return (f(c, y + h, z) - f(c, y - h, z)) / (2 * h);
}

}  // namespace

TEST_CASE("two-wire superposition matches a Biot-Savart quadrature") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(250.0, 2e-3);
  const double a = cfg.half_separation;
  for (const Vec3 p : {Vec3{0, 0, 0}, Vec3{0.3, 0.4e-3, 0.2e-3}, Vec3{0, -1.1e-3, -0.5e-3},
                       Vec3{0, 3e-3, 1e-3}}) {
    const Vec3 ref = biot_savart_wire(cfg.current, a, -cfg.z_offset, p) +
                     biot_savart_wire(-cfg.current, -a, -cfg.z_offset, p);
    const Vec3 h = two_wire_field(cfg, p);
    CHECK(h.x == 0.0);
    CHECK(h.y == doctest::Approx(ref.y).epsilon(1e-9));
    CHECK(h.z == doctest::Approx(ref.z).epsilon(1e-9));
    CHECK(two_wire_magnitude(cfg, p.y, p.z) == doctest::Approx(norm(ref)).epsilon(1e-9));
  }
}

TEST_CASE("two-wire oracles at the origin") {
  CHECK(two_wire_magnitude(unit, 0, 0) == doctest::Approx(0.119366207318921502).epsilon(1e-14));
  CHECK(two_wire_gradient(unit, 0, 0) == doctest::Approx(-0.115575833261531214).epsilon(1e-14));
  CHECK(two_wire_gradient_y(unit, 0, 0) == 0.0);
}

TEST_CASE("analytic gradients agree with central differences") {
  const CounterRng rng(21);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double a = 1e-3 * (0.5 + rng.uniform(4 * i));
    const TwoWireConfig cfg = TwoWireConfig::with_default_offset(100.0 * rng.uniform(4 * i + 1), a);
    const double y = (rng.uniform(4 * i + 2) - 0.5) * 4.0 / 3.0 * a;
    const double z = (rng.uniform(4 * i + 3) - 0.5) * a;
    const double h = a * 1e-6;
    CAPTURE(y);
    CAPTURE(z);
    CHECK(two_wire_gradient(cfg, y, z) ==
          doctest::Approx(fd_z(two_wire_magnitude, cfg, y, z, h)).epsilon(1e-6));
    const double gy = two_wire_gradient_y(cfg, y, z);
    const double gy_fd = fd_y(two_wire_magnitude, cfg, y, z, h);
    CHECK(std::abs(gy - gy_fd) < 1e-6 * std::abs(two_wire_gradient(cfg, y, z)) + 1e-6 * std::abs(gy));
  }
}

TEST_CASE("sampled B derivatives agree with differences of B") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(1000.0, 1e-3);
  const IdealGradientField ideal{0.2, 3e5};
  const SharpTipField tip{0.8, 1e-6};
  struct Case {
    FieldConfig f;
    Vec3 p;
    double h;
  };
  const std::vector<Case> cases{
      {cfg, {0, 0, 0}, 1e-9},           {cfg, {0, 3e-4, -2e-4}, 1e-9},
      {cfg, {0, -6e-4, 4e-4}, 1e-9},    {ideal, {0, 1e-4, -3e-4}, 1e-7},
      {tip, {0, 0.3e-6, 0.2e-6}, 1e-12}, {tip, {0, 2e-6, 3e-6}, 1e-12},
      {tip, {0, -5e-6, 1e-6}, 1e-12},
  };
  for (const auto& c : cases) {
    CAPTURE(c.p.y);
    CAPTURE(c.p.z);
    const auto s = sample(c.f, c.p);
    const auto bz = [&](double dy, double dz) { return sample(c.f, c.p + Vec3{0, dy, dz}).b.z; };
    const auto by = [&](double dy, double dz) { return sample(c.f, c.p + Vec3{0, dy, dz}).b.y; };
    const double scale = std::abs(s.dbz_dz) + std::abs(s.dbz_dy) + std::abs(s.dby_dy);
    CHECK(std::abs(s.dbz_dz - (bz(0, c.h) - bz(0, -c.h)) / (2 * c.h)) < 1e-6 * scale);
    CHECK(std::abs(s.dbz_dy - (bz(c.h, 0) - bz(-c.h, 0)) / (2 * c.h)) < 1e-6 * scale);
    CHECK(std::abs(s.dby_dy - (by(c.h, 0) - by(-c.h, 0)) / (2 * c.h)) < 1e-6 * scale);
  }
}

TEST_CASE("two-wire field is divergence- and curl-free") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(1000.0, 1e-3);
  const CounterRng rng(4);
  const double h = 1e-9;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Vec3 p{0, (rng.uniform(2 * i) - 0.5) * 1.5e-3, (rng.uniform(2 * i + 1) - 0.5) * 1e-3};
    const auto s = sample(cfg, p);
    const double scale = std::abs(s.dbz_dz) + std::abs(s.dbz_dy);
    CHECK(std::abs(s.dbz_dz + s.dby_dy) < 1e-12 * scale);
    const double dby_dz =
        (sample(cfg, p + Vec3{0, 0, h}).b.y - sample(cfg, p - Vec3{0, 0, h}).b.y) / (2 * h);
    CHECK(std::abs(dby_dz - s.dbz_dy) < 1e-6 * scale);
  }
}

TEST_CASE("ideal gradient field") {
  const auto s = sample(IdealGradientField{0.1, 1e3}, Vec3{0, 0, 1e-3});
  CHECK(s.b.z == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(s.b.y == 0.0);
  CHECK(s.dbz_dz == 1e3);
  CHECK(s.dby_dy == -1e3);
  const auto off = sample(IdealGradientField{0.0, 2e6}, Vec3{0.5, 1e-6, -2e-6});
  CHECK(off.b.y == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(off.b.z == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(off.dbz_dz + off.dby_dy == 0.0);
}

TEST_CASE("zero and uniform fields have no gradient") {
  const auto z = sample(ZeroField{}, Vec3{1, 2, 3});
  CHECK(z.b == Vec3{});
  const auto u = sample(UniformField{{0, 0, 1e-2}}, Vec3{1, 2, 3});
  CHECK(u.b == Vec3{0, 0, 1e-2});
  CHECK(u.dbz_dz == 0.0);
  CHECK(u.dbz_dy == 0.0);
}

TEST_CASE("sample converts H to B with mu0") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(1000.0, 1e-3);
  const Vec3 p{0, 2e-4, 1e-4};
  const Vec3 h = two_wire_field(cfg, p);
  const auto s = sample(cfg, p);
  const double mu0 = constants().vacuum_permeability;
  CHECK(s.b.y == doctest::Approx(mu0 * h.y).epsilon(1e-14));
  CHECK(s.b.z == doctest::Approx(mu0 * h.z).epsilon(1e-14));
}

TEST_CASE("constant inhomogeneity plane") {
  for (double a : {1.0, 1e-3, 2.5e-2}) {
    const auto p = constant_inhomogeneity_plane(a);
    CHECK(p.z0 / a == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(p.z1 / a == doctest::Approx(0.12321911364).epsilon(1e-10));
    CHECK(p.epsilon == doctest::Approx(0.968245836551854221).epsilon(1e-14));
    CHECK(std::abs((p.z0 + p.z1) - std::sqrt(2.0) * a) <= 1e-12 * std::sqrt(2.0) * a);
  }
  CHECK_THROWS_AS(constant_inhomogeneity_plane(0.0), std::domain_error);
  CHECK_THROWS_AS(constant_inhomogeneity_plane(-1.0), std::domain_error);
}

TEST_CASE("epsilon at the origin equals the closed form") {
  CHECK(epsilon_profile(unit, 0, 0) == doctest::Approx(0.968245836551854221).epsilon(1e-13));
}

TEST_CASE("epsilon is independent of current and scale") {
  const CounterRng rng(12);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const double a = std::pow(10.0, -4 + 3 * rng.uniform(3 * i));
    const double current = (rng.uniform(3 * i + 1) - 0.5) * 2e3;
    const TwoWireConfig cfg = TwoWireConfig::with_default_offset(current, a);
    const double t = rng.uniform(3 * i + 2) - 0.5;
    CHECK(epsilon_profile(cfg, t * a, 0.3 * t * a) ==
          doctest::Approx(epsilon_profile(unit, t, 0.3 * t)).epsilon(1e-12));
  }
}

TEST_CASE("epsilon across the radiation window") {
  const double e0 = epsilon_profile(unit, 0, 0);
  // frozen from a high-precision evaluation
  CHECK((epsilon_profile(unit, 0.1, 0) - e0) / e0 == doctest::Approx(1.857428701e-3).epsilon(1e-8));
  CHECK(epsilon_profile(unit, 0.1, 0) > e0);
  CHECK(epsilon_profile(unit, 0.1, 0) == epsilon_profile(unit, -0.1, 0));
}

TEST_CASE("y^2 coefficient of epsilon changes sign at (sqrt 3 - sqrt(5/3)) a") {
  const double zc = (std::sqrt(3.0) - std::sqrt(5.0 / 3.0));
  const double y = 0.01;
  CHECK(epsilon_profile(unit, y, zc - 0.05) > epsilon_profile(unit, 0, zc - 0.05));
  CHECK(epsilon_profile(unit, y, zc + 0.05) < epsilon_profile(unit, 0, zc + 0.05));
  CHECK(epsilon_profile(unit, y, zc - 0.05) - epsilon_profile(unit, 0, zc - 0.05) ==
        doctest::Approx(1.022100930528e-6).epsilon(1e-6));
}

TEST_CASE("gradient flatness over the radiation window") {
  const double g0 = two_wire_gradient(unit, 0, 0);
  auto change = [&](double y) { return two_wire_gradient(unit, y, 0) / g0 - 1.0; };
  CHECK(change(0.1) == doctest::Approx(9.12481639128674e-4).epsilon(1e-9));
  CHECK(change(1.0 / 3.0) == doctest::Approx(7.37124494030051e-3).epsilon(1e-9));
  CHECK(change(2.0 / 3.0) == doctest::Approx(-3.88253704696051e-3).epsilon(1e-9));
  const auto w = radiation_window(1.0);
  CHECK(w.min == doctest::Approx(-2.0 / 3.0));
  CHECK(w.max == doctest::Approx(2.0 / 3.0));
  double worst = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double y = w.min + (w.max - w.min) * i / 600.0;
    worst = std::max(worst, std::abs(change(y)));
  }
  CHECK(worst == doctest::Approx(9.03273033254e-3).epsilon(1e-6));
  CHECK(worst <= 0.05);
}

TEST_CASE("magnitude is even in y and decreases away from the wires") {
  const CounterRng rng(31);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const double y = rng.uniform(2 * i) - 0.5;
    const double z = rng.uniform(2 * i + 1) - 0.5;
    CHECK(two_wire_magnitude(unit, y, z) == doctest::Approx(two_wire_magnitude(unit, -y, z)));
    CHECK(two_wire_gradient_y(unit, y, z) == doctest::Approx(-two_wire_gradient_y(unit, -y, z)));
    CHECK(two_wire_gradient(unit, y, z) < 0.0);
  }
}

TEST_CASE("evaluation on a wire is refused") {
  const double z = -unit.z_offset;
  CHECK_THROWS_AS(two_wire_magnitude(unit, 1.0, z), SingularityError);
  CHECK_THROWS_AS(two_wire_gradient(unit, -1.0, z), SingularityError);
  CHECK_THROWS_AS(sample(unit, Vec3{0, 1.0, z + 1e-10}), SingularityError);
  CHECK_THROWS_AS(epsilon_profile(unit, -1.0, z), SingularityError);
  CHECK_NOTHROW(two_wire_magnitude(unit, 1.0, z + 1e-6));
  try {
    two_wire_field(unit, Vec3{0, 1.0, z});
    FAIL("expected SingularityError");
  } catch (const SingularityError& e) {
    CHECK(e.point().y == 1.0);
  }
}

TEST_CASE("field validation") {
  CHECK_NOTHROW(validate(FieldConfig{unit}));
  CHECK_THROWS_AS(validate(FieldConfig{TwoWireConfig{0.0, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FieldConfig{TwoWireConfig{1.0, -1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FieldConfig{TwoWireConfig{1.0, 1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FieldConfig{SharpTipField{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FieldConfig{SharpTipField{-1.0, 1e-6}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FieldConfig{IdealGradientField{0.0, std::nan("")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(FieldConfig{UniformField{{0, std::nan(""), 0}}}), std::invalid_argument);
}

TEST_CASE("inhomogeneity map") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(1000.0, 1e-3);
  const auto wy = radiation_window(1e-3);
  const GridRange wz{-0.5e-3, 0.5e-3};
  const auto map = inhomogeneity_map(cfg, wy, wz, 9, 5);
  REQUIRE(map.points.size() == 45);
  CHECK(map.at(0, 0).y == wy.min);
  CHECK(map.at(8, 0).y == wy.max);
  CHECK(map.at(0, 4).z == wz.max);
  CHECK(map.at(4, 2).y == 0.0);
  CHECK(map.at(4, 2).z == 0.0);
  const double mu0 = constants().vacuum_permeability;
  for (const auto& p : map.points) {
    CHECK(p.b == doctest::Approx(mu0 * p.h).epsilon(1e-15));
    CHECK(p.h == doctest::Approx(two_wire_magnitude(cfg, p.y, p.z)).epsilon(1e-15));
    CHECK(p.epsilon == doctest::Approx(epsilon_profile(cfg, p.y, p.z)).epsilon(1e-14));
    CHECK(p.grad_b >= std::abs(p.dbdz));
    CHECK(norm(p.sample.b) == doctest::Approx(p.b).epsilon(1e-12));
  }
  for (std::size_t iz = 0; iz < 5; ++iz) {
    for (std::size_t iy = 0; iy < 9; ++iy) {
      CHECK(map.at(iy, iz).h == doctest::Approx(map.at(8 - iy, iz).h).epsilon(1e-14));
    }
  }
}

TEST_CASE("map refinement reproduces the coarse grid exactly") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(1000.0, 1e-3);
  const GridRange gy{-0.6e-3, 0.7e-3}, gz{-0.3e-3, 0.45e-3};
  for (std::size_t n : {2u, 3u, 5u, 17u}) {
    const auto coarse = inhomogeneity_map(cfg, gy, gz, n, n);
    const auto fine = inhomogeneity_map(cfg, gy, gz, 2 * n - 1, 2 * n - 1);
    for (std::size_t iz = 0; iz < n; ++iz) {
      for (std::size_t iy = 0; iy < n; ++iy) {
        const auto& c = coarse.at(iy, iz);
        const auto& f = fine.at(2 * iy, 2 * iz);
        CHECK(c.y == doctest::Approx(f.y).epsilon(1e-15));
        CHECK(c.z == doctest::Approx(f.z).epsilon(1e-15));
        CHECK(c.h == doctest::Approx(f.h).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("single-point map samples the midpoint") {
  const TwoWireConfig cfg = TwoWireConfig::with_default_offset(1.0, 1.0);
  const auto map = inhomogeneity_map(cfg, {-0.5, 0.5}, {-0.2, 0.4}, 1, 1);
  REQUIRE(map.points.size() == 1);
  CHECK(map.points[0].y == 0.0);
  CHECK(map.points[0].z == doctest::Approx(0.1));
  CHECK_THROWS_AS(inhomogeneity_map(cfg, {-1, 1}, {-1, 1}, 0, 3), std::invalid_argument);
}

TEST_CASE("sharp tip") {
  CHECK(sharp_tip_gradient(1.0, 1e-6) == doctest::Approx(1e6));
  CHECK(sharp_tip_gradient(0.5, 2e-3) == doctest::Approx(250.0));
  CHECK_THROWS_AS(sharp_tip_gradient(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(sharp_tip_gradient(-1.0, 1e-6), std::domain_error);

  const SharpTipField tip{1.0, 1e-6};
  const Vec3 core{0, 0.3e-6, -0.4e-6};
  const auto s = sample(tip, core);
  const auto ideal = sample(IdealGradientField{1.0, 1e6}, core);
  CHECK(s.b == ideal.b);
  CHECK(s.dbz_dz == ideal.dbz_dz);

  const auto far = sample(tip, Vec3{0, 10e-6, 0});
  CHECK(far.b == Vec3{});
  CHECK(far.dbz_dz == 0.0);

  // continuous across both edges of the taper
  for (double rho : {1e-6, 10e-6}) {
    const double eps = 1e-15;
    const auto in = sample(tip, Vec3{0, 0, rho - eps});
    const auto out = sample(tip, Vec3{0, 0, rho + eps});
    CHECK(std::abs(in.b.z - out.b.z) < 1e-6);
  }
  // monotone taper along +y at z = 0: |Bz| decreases
  double prev = sample(tip, Vec3{0, 1e-6, 0}).b.z;
  for (int i = 1; i <= 90; ++i) {
    const double bz = sample(tip, Vec3{0, 1e-6 + i * 1e-7, 0}).b.z;
    CHECK(bz <= prev + 1e-15);
    prev = bz;
  }
}
