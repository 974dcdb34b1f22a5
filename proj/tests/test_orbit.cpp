#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "choreo/orbit.hpp"
#include "doctest.h"

using namespace choreo;

namespace {
constexpr double kPi = std::numbers::pi;
const double kR3 = std::pow(3.0, -1.0 / 6.0);

FourierOrbit random_orbit(RotationAxis axis, std::mt19937_64& rng, int n = 3, int k_max = 12) {
  std::normal_distribution<double> g(0.0, 0.1);
  FourierOrbit o(axis, std::uniform_real_distribution<double>(0.05, 0.95)(rng), n, k_max);
  o.x_sin[1] = 1.0 + g(rng);
  o.y_sin[2] = 0.4 + g(rng);
  for (Series s : o.present_series()) {
    auto& arr = o.series(s);
    for (int k = 1; k <= k_max; ++k) {
      if (o.coefficient_active(s, k)) arr[k] += g(rng) * std::pow(0.5, k);
    }
  }
  return apply_momentum_mask(o);
}
}  // namespace

TEST_CASE("generating curve of the empty series is at rest") {
  FourierOrbit o(RotationAxis::X, 0.3, 3, 8);
  auto [pos, vel] = generating_curve(o, 1.234);
  CHECK(pos.x == 0.0);
  CHECK(pos.y == 0.0);
  CHECK(pos.z == 0.0);
  CHECK(norm(vel) == 0.0);
}

TEST_CASE("generating curve at t = 0 starts at the origin with cosine velocities") {
  FourierOrbit o(RotationAxis::X, 0.0, 3, 8);
  o.x_sin[1] = 1.0;
  o.y_sin[2] = 0.5;
  auto [pos, vel] = generating_curve(o, 0.0);
  CHECK(norm(pos) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(vel.x == doctest::Approx(1.0));
  CHECK(vel.y == doctest::Approx(1.0));
  CHECK(vel.z == 0.0);
}

TEST_CASE("generating curve reproduces the circular configuration sample") {
  FourierOrbit o(RotationAxis::X, 1.0, 3, 8);
  o.y_sin[2] = kR3;
  o.z_cos[2] = kR3;
  auto [pos, vel] = generating_curve(o, kPi / 4.0);
  CHECK(pos.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pos.y == doctest::Approx(kR3).epsilon(1e-14));
  CHECK(pos.z == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vel.y == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vel.z == doctest::Approx(-2.0 * kR3).epsilon(1e-14));
}

TEST_CASE("body 0 equals the generating curve and out-of-range bodies throw") {
  std::mt19937_64 rng(7);
  FourierOrbit o = random_orbit(RotationAxis::X, rng);
  auto [pos, vel] = generating_curve(o, 0.77);
  BodyTrajectorySample s = body_trajectory(o, 0, 0.77);
  CHECK(norm(s.position - pos) == 0.0);
  CHECK(norm(s.velocity - vel) == 0.0);
  CHECK_THROWS_AS(body_trajectory(o, 3, 0.0), std::out_of_range);
  CHECK_THROWS_AS(body_trajectory(o, -1, 0.0), std::out_of_range);
}

TEST_CASE("choreography property: bodies are time shifts of the curve") {
  std::mt19937_64 rng(11);
  FourierOrbit o = random_orbit(RotationAxis::Y, rng, 5, 14);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = ut(rng);
    const int j = trial % 5;
    const BodyTrajectorySample a = body_trajectory(o, j, t);
    const BodyTrajectorySample b = body_trajectory(o, 0, t + 2.0 * kPi * j / 5.0);
    CHECK(norm(a.position - b.position) < 1e-14);
    CHECK(norm(a.velocity - b.velocity) < 1e-14);
  }
}

TEST_CASE("masked orbits keep the center of mass pinned at the origin") {
  std::mt19937_64 rng(13);
  for (RotationAxis axis : {RotationAxis::X, RotationAxis::Y, RotationAxis::Z}) {
    FourierOrbit o = random_orbit(axis, rng);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 100; ++trial) {
      const double t = ut(rng);
      Vec3 com_pos, com_vel;
      for (int j = 0; j < o.n_bodies; ++j) {
        const BodyTrajectorySample s = body_trajectory(o, j, t);
        com_pos += s.position;
        com_vel += s.velocity;
      }
      CHECK(norm(com_pos) < 1e-13);
      CHECK(norm(com_vel) < 1e-13);
    }
  }
}

TEST_CASE("axis-X parity: odd x and y, even z") {
  std::mt19937_64 rng(17);
  FourierOrbit o = random_orbit(RotationAxis::X, rng);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 25; ++trial) {
    const double t = ut(rng);
    auto [p1, v1] = generating_curve(o, t);
    auto [p2, v2] = generating_curve(o, -t);
    CHECK(p2.x == doctest::Approx(-p1.x).epsilon(1e-12));
    CHECK(p2.y == doctest::Approx(-p1.y).epsilon(1e-12));
    CHECK(p2.z == doctest::Approx(p1.z).epsilon(1e-12));
  }
}

TEST_CASE("fixed frame with omega = 0 equals the rotating frame") {
  std::mt19937_64 rng(19);
  FourierOrbit o = random_orbit(RotationAxis::X, rng);
  o.omega_rot = 0.0;
  const BodyTrajectorySample rot = body_trajectory(o, 1, 0.9);
  const BodyTrajectorySample fix = to_fixed_frame(o, 1, 0.9);
  CHECK(norm(rot.position - fix.position) == 0.0);
  CHECK(norm(rot.velocity - fix.velocity) == 0.0);
}

TEST_CASE("half-turn frame rotation flips the transverse components") {
  FourierOrbit o(RotationAxis::X, 1.0, 3, 8);
  o.x_sin[1] = 0.7;
  o.y_sin[2] = 0.4;
  o.z_cos[2] = 0.3;
  const BodyTrajectorySample rot = body_trajectory(o, 0, kPi);
  const BodyTrajectorySample fix = to_fixed_frame(o, 0, kPi);
  CHECK(fix.position.x == doctest::Approx(rot.position.x).epsilon(1e-13));
  CHECK(fix.position.y == doctest::Approx(-rot.position.y).epsilon(1e-12));
  CHECK(fix.position.z == doctest::Approx(-rot.position.z).epsilon(1e-12));
}

TEST_CASE("circular orbit maps to a fixed-frame circle at unit frequency") {
  FourierOrbit o(RotationAxis::X, 1.0, 3, 8);
  o.y_sin[2] = kR3;
  o.z_cos[2] = kR3;
  for (int i = 0; i < 100; ++i) {
    const double t = 2.0 * kPi * i / 100.0;
    const BodyTrajectorySample fix = to_fixed_frame(o, 0, t);
    // (y + iz) = i r e^{-2it} in the frame; times e^{it} gives i r e^{-it}.
    CHECK(fix.position.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fix.position.y == doctest::Approx(kR3 * std::sin(t)).epsilon(1e-11));
    CHECK(fix.position.z == doctest::Approx(kR3 * std::cos(t)).epsilon(1e-11));
    CHECK(norm(fix.velocity) == doctest::Approx(kR3).epsilon(1e-11));
  }
}

TEST_CASE("frame map preserves the transverse norm") {
  std::mt19937_64 rng(23);
  for (RotationAxis axis : {RotationAxis::X, RotationAxis::Y, RotationAxis::Z}) {
    FourierOrbit o = random_orbit(axis, rng);
    const BodyTrajectorySample rot = body_trajectory(o, 2, 1.3);
    const BodyTrajectorySample fix = to_fixed_frame(o, 2, 1.3);
    CHECK(norm(rot.position) == doctest::Approx(norm(fix.position)).epsilon(1e-13));
  }
}

TEST_CASE("momentum mask zeroes harmonics that are multiples of n") {
  FourierOrbit o(RotationAxis::X, 0.5, 3, 8);
  o.x_sin[1] = 0.9;
  o.x_sin[3] = 0.2;
  o.x_sin[5] = 0.1;
  o.y_sin[2] = 1.0;
  o.y_sin[6] = 0.3;
  const FourierOrbit m = apply_momentum_mask(o);
  CHECK(m.x_sin[1] == 0.9);
  CHECK(m.x_sin[3] == 0.0);
  CHECK(m.x_sin[5] == 0.1);
  CHECK(m.y_sin[2] == 1.0);
  CHECK(m.y_sin[6] == 0.0);
}

TEST_CASE("momentum mask is idempotent") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    FourierOrbit o = random_orbit(RotationAxis::Z, rng);
    for (auto s : {Series::XSin, Series::YSin, Series::XCos, Series::YCos}) {
      o.series(s)[3] = 0.5;  // deliberately violate the mask
    }
    const FourierOrbit once = apply_momentum_mask(o);
    const FourierOrbit twice = apply_momentum_mask(once);
    for (auto s : {Series::XSin, Series::YSin, Series::XCos, Series::YCos}) {
      CHECK(once.series(s) == twice.series(s));
      CHECK(once.series(s)[3] == 0.0);
    }
  }
}

TEST_CASE("coefficient layout excludes masked and wrong-parity entries") {
  FourierOrbit o(RotationAxis::X, 0.5, 3, 8);
  const CoefficientLayout layout = CoefficientLayout::of(o);
  for (const auto& e : layout.entries) {
    CHECK(e.harmonic % 3 != 0);
    if (e.series == Series::XSin) CHECK(e.harmonic % 2 == 1);
    if (e.series == Series::YSin) CHECK(e.harmonic % 2 == 0);
    if (e.series == Series::ZCos) CHECK(e.harmonic % 2 == 0);
    CHECK(e.series != Series::XCos);
    CHECK(e.series != Series::YCos);
  }
  // x_sin: 1,5,7 ; y_sin: 2,4,8 ; z_cos: 2,4,8
  CHECK(layout.size() == 9);

  FourierOrbit oy(RotationAxis::Y, 0.5, 3, 8);
  for (const auto& e : CoefficientLayout::of(oy).entries) {
    if (e.series == Series::ZCos) CHECK(e.harmonic % 2 == 1);
  }
  FourierOrbit oz(RotationAxis::Z, 0.5, 3, 8);
  bool has_xcos = false;
  for (const auto& e : CoefficientLayout::of(oz).entries) {
    if (e.series == Series::XCos) {
      has_xcos = true;
      CHECK(e.harmonic % 2 == 0);
    }
    CHECK(e.series != Series::ZCos);
  }
  CHECK(has_xcos);
}

TEST_CASE("pack and unpack round-trip the active coefficients") {
  std::mt19937_64 rng(31);
  FourierOrbit o = random_orbit(RotationAxis::Y, rng);
  const CoefficientLayout layout = CoefficientLayout::of(o);
  const std::vector<double> v = pack_coefficients(o, layout);
  FourierOrbit o2(o.axis, o.omega_rot, o.n_bodies, o.k_max);
  unpack_coefficients(o2, layout, v);
  for (Series s : o.present_series()) CHECK(o.series(s) == o2.series(s));
}

TEST_CASE("orbit construction validates its arguments") {
  CHECK_THROWS_AS(FourierOrbit(RotationAxis::X, 0.5, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(FourierOrbit(RotationAxis::X, 0.5, 1, 8), std::invalid_argument);
  CHECK_THROWS_AS(FourierOrbit(RotationAxis::X, -0.1, 3, 8), std::invalid_argument);
  CHECK_THROWS_AS(FourierOrbit(RotationAxis::X, 0.5, 3, 0), std::invalid_argument);
}

TEST_CASE("default truncation order scales with n") {
  CHECK(default_k_max(3) == 16);
  CHECK(default_k_max(21) == 48);
  CHECK(default_k_max(7) >= 2 * 7 + 6);
}
