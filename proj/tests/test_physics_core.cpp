#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgsim/constants.hpp"
#include "sgsim/format.hpp"
#include "sgsim/rng.hpp"
#include "sgsim/state.hpp"
#include "sgsim/vec3.hpp"

using namespace sgsim;

TEST_CASE("paper constants carry the rounded values") {
  const auto k = constants();
  CHECK(k.electron_mass == 9.11e-31);
  CHECK(k.bohr_magneton == 0.927e-23);
  CHECK(k.electron_charge_magnitude == 1.602176634e-19);
  CHECK(k.speed_of_light == 299792458.0);
  CHECK(k.vacuum_permeability == doctest::Approx(1.2566370614359173e-6).epsilon(1e-15));
  // mu/m, the coefficient of the deflection law
  CHECK(k.bohr_magneton / k.electron_mass == doctest::Approx(10175631.1745).epsilon(1e-10));
}

TEST_CASE("codata constants differ only in the rounded entries") {
  const auto p = constants(Precision::paper);
  const auto c = constants(Precision::codata);
  CHECK(c.electron_charge_magnitude == p.electron_charge_magnitude);
  CHECK(c.speed_of_light == p.speed_of_light);
  CHECK(c.electron_mass == doctest::Approx(p.electron_mass).epsilon(1e-3));
  CHECK(c.bohr_magneton == doctest::Approx(p.bohr_magneton).epsilon(1e-3));
  CHECK(c.vacuum_permeability == doctest::Approx(p.vacuum_permeability).epsilon(1e-9));
}

TEST_CASE("vec3 algebra") {
  constexpr Vec3 a{1, 2, 3};
  constexpr Vec3 b{-4, 0.5, 2};
  static_assert(dot(a, b) == -4 + 1 + 6);
  static_assert(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}) == Vec3{0, 0, 1});
  CHECK(a + b == Vec3{-3, 2.5, 5});
  CHECK(a - b == Vec3{5, 1.5, 1});
  CHECK(-a == Vec3{-1, -2, -3});
  CHECK(2.0 * a == a * 2.0);
  CHECK(a / 2.0 == Vec3{0.5, 1, 1.5});
  CHECK(norm(Vec3{3, 4, 0}) == 5.0);
  CHECK(is_finite(a));
  CHECK_FALSE(is_finite(Vec3{0, std::numeric_limits<double>::quiet_NaN(), 0}));
  CHECK_FALSE(is_finite(Vec3{std::numeric_limits<double>::infinity(), 0, 0}));
}

TEST_CASE("cross product properties over random vectors") {
  const CounterRng rng(7);
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Vec3 a{rng.uniform(6 * i) - 0.5, rng.uniform(6 * i + 1) - 0.5, rng.uniform(6 * i + 2) - 0.5};
    const Vec3 b{rng.uniform(6 * i + 3) - 0.5, rng.uniform(6 * i + 4) - 0.5,
                 rng.uniform(6 * i + 5) - 0.5};
    const Vec3 c = cross(a, b);
    CHECK(std::abs(dot(c, a)) < 1e-15);
    CHECK(std::abs(dot(c, b)) < 1e-15);
    CHECK(cross(b, a) == -c);
    const double lhs = dot(c, c);
    const double rhs = dot(a, a) * dot(b, b) - dot(a, b) * dot(a, b);
    CHECK(std::abs(lhs - rhs) < 1e-15);
  }
}

TEST_CASE("spin sign and flip") {
  static_assert(sign(Spin::up) == 1.0);
  static_assert(sign(Spin::down) == -1.0);
  static_assert(flipped(Spin::up) == Spin::down);
  static_assert(flipped(flipped(Spin::down)) == Spin::down);
}

TEST_CASE("electron state validation") {
  ElectronState e{{0, 0, 0}, {5.93e7, 0, 0}, Spin::up};
  CHECK_NOTHROW(validate(e));

  SUBCASE("speed of light is rejected") {
    e.velocity = {constants().speed_of_light, 0, 0};
    CHECK_THROWS_AS(validate(e), std::invalid_argument);
  }
  SUBCASE("superluminal velocity split across axes is rejected") {
    e.velocity = {2.2e8, 2.2e8, 0};
    CHECK_THROWS_AS(validate(e), std::invalid_argument);
  }
  SUBCASE("non-finite position is rejected") {
    e.position.z = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate(e), std::invalid_argument);
  }
  SUBCASE("spin outside +-1 is rejected") {
    e.spin = static_cast<Spin>(0);
    CHECK_THROWS_AS(validate(e), std::invalid_argument);
  }
}

TEST_CASE("splitmix64 finalizer matches the reference sequence") {
  // First two outputs of the reference SplitMix64 seeded with 0.
  CHECK(CounterRng::mix(0) == 0xe220a8397b1dcdafULL);
  CHECK(CounterRng::mix(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
  const CounterRng rng(42);
  CHECK(rng.bits(0) == 0xb46ec5e8f3ece91fULL);
  CHECK(rng.bits(1) == 0x2f6b730c67e8736bULL);
}

TEST_CASE("counter rng is a pure function of seed, stream and counter") {
  const CounterRng a(3, 1), b(3, 1), c(3, 2), d(4, 1);
  int same_stream = 0, other_stream = 0, other_seed = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    same_stream += a.bits(i) == b.bits(i);
    other_stream += a.bits(i) == c.bits(i);
    other_seed += a.bits(i) == d.bits(i);
  }
  CHECK(same_stream == 1000);
  CHECK(other_stream == 0);
  CHECK(other_seed == 0);
}

TEST_CASE("uniform draws stay in (0, 1]") {
  const CounterRng rng(11);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i));
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal pairs have unit variance and no correlation") {
  const CounterRng rng(5);
  const int n = 100000;
  double s1 = 0, s2 = 0, q1 = 0, q2 = 0, c12 = 0;
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = rng.normal_pair(static_cast<std::uint64_t>(i));
    s1 += a;
    s2 += b;
    q1 += a * a;
    q2 += b * b;
    c12 += a * b;
  }
  CHECK(std::abs(s1 / n) < 0.02);
  CHECK(std::abs(s2 / n) < 0.02);
  CHECK(q1 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(q2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(c12 / n) < 0.02);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(20e-6) == "2e-05");
  CHECK(format_double(0.0) == "0");
  const CounterRng rng(9);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double x = (rng.uniform(i) - 0.5) * std::pow(10.0, static_cast<int>(i % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
}
