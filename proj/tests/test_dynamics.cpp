#include <cmath>
#include <numbers>

#include "choreo/dynamics.hpp"
#include "choreo/perturbation.hpp"
#include "choreo/solver.hpp"
#include "doctest.h"

using namespace choreo;

namespace {
constexpr double kPi = std::numbers::pi;
const double kR3 = std::pow(3.0, -1.0 / 6.0);

const FourierOrbit& lagrange() {
  static const FourierOrbit o = seed_orbit(0.0, 3, 8);
  return o;
}

const FourierOrbit& the_eight() {
  static const FourierOrbit o = [] {
    SolverConfig config;
    std::vector<double> omegas;
    for (int i = 0; i <= 10; ++i) omegas.push_back(1.0 - 0.1 * i);
    const FamilyRecord rec = continuation_sweep(RotationAxis::X, 3, omegas, config, {}, 12);
    REQUIRE(rec.all_converged());
    return rec.points.back().outcome.orbit;
  }();
  return o;
}

double state_distance(const PhaseState& a, const PhaseState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    m = std::max(m, norm(a.positions[i] - b.positions[i]));
    m = std::max(m, norm(a.velocities[i] - b.velocities[i]));
  }
  return m;
}

PhaseState run(PhaseState s, long steps, double h) {
  for (long i = 0; i < steps; ++i) s = rk4_step(s, h);
  return s;
}
}  // namespace

TEST_CASE("two-body accelerations follow the inverse square law") {
  std::vector<Vec3> pos = {{0, 0, 0}, {2, 0, 0}};
  const std::vector<Vec3> acc = accelerations(pos);
  CHECK(acc[0].x == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(acc[1].x == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(acc[0].y == 0.0);
}

TEST_CASE("equilateral configuration at the scale radius balances unit frequency") {
  std::vector<Vec3> pos;
  for (int j = 0; j < 3; ++j) {
    const double a = 2.0 * kPi * j / 3.0;
    pos.push_back({0.0, kR3 * std::cos(a), kR3 * std::sin(a)});
  }
  const std::vector<Vec3> acc = accelerations(pos);
  for (int j = 0; j < 3; ++j) {
    // Centripetal: a = -omega^2 r with omega = 1.
    CHECK(norm(acc[j] + pos[j]) < 1e-14);
  }
}

TEST_CASE("accelerations sum to zero") {
  std::vector<Vec3> pos = {{0.3, -1.2, 0.5}, {1.1, 0.2, -0.4}, {-0.9, 0.7, 0.1}};
  const std::vector<Vec3> acc = accelerations(pos);
  Vec3 sum;
  for (const Vec3& a : acc) sum += a;
  CHECK(norm(sum) < 1e-15);
}

TEST_CASE("acceleration collision carries the pair") {
  std::vector<Vec3> pos = {{0, 0, 0}, {1e-9, 0, 0}, {1, 1, 1}};
  CHECK_THROWS_AS(accelerations(pos, 2.0), CollisionError);
}

TEST_CASE("rk4 is exact for force-free drift") {
  PhaseState s;
  s.positions = {{1, 2, 3}};
  s.velocities = {{0.5, -0.25, 1.0}};
  const AccelerationFn none = [](std::span<const Vec3> p, double) {
    return std::vector<Vec3>(p.size());
  };
  for (int i = 0; i < 100; ++i) s = rk4_step(s, 0.01, none);
  CHECK(s.positions[0].x == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(s.positions[0].y == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(s.positions[0].z == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s.velocities[0].x == 0.5);
  CHECK_THROWS_AS(rk4_step(s, 0.0), std::invalid_argument);
}

TEST_CASE("one circular period closes to integrator accuracy") {
  const PhaseState s0 = initial_state_from_orbit(lagrange(), 0.0);
  const PhaseState s1 = run(s0, 4096, 2.0 * kPi / 4096);
  PhaseState ref = s0;
  ref.time = s1.time;
  CHECK(state_distance(s1, ref) < 1e-9);
}

TEST_CASE("closure error drops by about sixteen when the step halves") {
  const PhaseState s0 = initial_state_from_orbit(lagrange(), 0.0);
  PhaseState ref = s0;

  const PhaseState coarse = run(s0, 1024, 2.0 * kPi / 1024);
  ref.time = coarse.time;
  const double e1 = state_distance(coarse, ref);

  const PhaseState fine = run(s0, 2048, 2.0 * kPi / 2048);
  ref.time = fine.time;
  const double e2 = state_distance(fine, ref);

  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("initial state from an orbit carries the frame rotation") {
  FourierOrbit still = lagrange();
  still.omega_rot = 0.0;
  const PhaseState a = initial_state_from_orbit(still, 0.4);
  const BodyTrajectorySample rot = body_trajectory(still, 1, 0.4);
  CHECK(norm(a.positions[1] - rot.position) == 0.0);
  CHECK(norm(a.velocities[1] - rot.velocity) == 0.0);

  const PhaseState b = initial_state_from_orbit(lagrange(), 0.0);
  for (const Vec3& v : b.velocities) CHECK(norm(v) == doctest::Approx(kR3).epsilon(1e-13));
  Vec3 momentum;
  for (const Vec3& v : b.velocities) momentum += v;
  CHECK(norm(momentum) < 1e-12);
}

TEST_CASE("rotating-frame map inverts the fixed-frame map at any time") {
  FourierOrbit o = seed_orbit(0.05, 3, 12);
  for (double t : {0.0, 0.37, 2.1, 5.6}) {
    const PhaseState fixed = initial_state_from_orbit(o, t);
    const PhaseState rot = to_rotating_frame(fixed, o);
    for (int j = 0; j < 3; ++j) {
      const BodyTrajectorySample expect = body_trajectory(o, j, t);
      CHECK(norm(rot.positions[j] - expect.position) < 1e-13);
      CHECK(norm(rot.velocities[j] - expect.velocity) < 1e-13);
    }
  }
}

TEST_CASE("circular-orbit integration conserves energy to integrator accuracy") {
  // The equal-mass triangular equilibrium is exponentially unstable, so
  // roundoff gets amplified by roughly e^3 per period; six periods keep
  // the run on the circle and show the integrator's own drift.
  const PhaseState s0 = initial_state_from_orbit(lagrange(), 0.0);
  const IntegrationResult r = integrate(s0, 6.0, 4096);
  CHECK_FALSE(r.collided);
  CHECK(r.ledger.max_energy_drift < 1e-10);
  CHECK(r.ledger.max_momentum_drift < 1e-10);
  CHECK(r.ledger.max_com_distance < 1e-12);
  CHECK_THROWS_AS(integrate(s0, 10.0, 128), std::invalid_argument);
}

TEST_CASE("conservation drift improves at least fourth order in the step") {
  // Measured exponent on this orbit is close to five (the leading
  // energy-error term of the scheme cancels in the mean); at minimum the
  // drift must keep the nominal fourth-order gain.
  const PhaseState s0 = initial_state_from_orbit(the_eight(), 0.0);
  const double coarse = integrate(s0, 5.0, 1024).ledger.max_energy_drift;
  const double fine = integrate(s0, 5.0, 2048).ledger.max_energy_drift;
  CHECK(coarse / fine >= 12.0);
  CHECK(coarse / fine <= 100.0);
}

TEST_CASE("trajectory decimation records the requested stride") {
  const PhaseState s0 = initial_state_from_orbit(lagrange(), 0.0);
  const IntegrationResult r = integrate(s0, 1.0, 512, 64);
  CHECK(r.samples.size() == 1 + 512 / 64);
  CHECK(r.samples.front().time == 0.0);
}

TEST_CASE("states inside the collision radius terminate as collisions") {
  PhaseState s;
  s.positions = {{0, 0, 0}, {5e-7, 0, 0}, {2, 0, 0}};
  s.velocities = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  const IntegrationResult r = integrate(s, 1.0, 512);
  CHECK(r.collided);
  CHECK(r.collision_body_i == 0);
  CHECK(r.collision_body_j == 1);
}

TEST_CASE("time reversal retraces the trajectory") {
  // Run on the planar eight, whose neighborhood is regular enough that
  // reversal error reflects accumulated integrator error only.
  const PhaseState s0 = initial_state_from_orbit(the_eight(), 0.0);
  PhaseState fwd = run(s0, 10 * 4096, 2.0 * kPi / 4096);
  for (Vec3& v : fwd.velocities) v *= -1.0;
  PhaseState back = run(fwd, 10 * 4096, 2.0 * kPi / 4096);
  for (Vec3& v : back.velocities) v *= -1.0;
  back.time = s0.time;
  CHECK(state_distance(back, s0) < 1e-8);
}

TEST_CASE("unperturbed probes of an exact orbit are stable") {
  ProbeConfig config;
  config.perturbation_scale = 0.0;
  config.periods = 10.0;
  config.steps_per_period = 1024;
  const StabilityReport r = stability_probe(the_eight(), config);
  CHECK(r.classification == StabilityClass::Stable);
  // The ratio exceeds 1 because the t = 0 configuration is not at the
  // curve's extremes; it stays near the curve's own aspect.
  CHECK(r.max_excursion > 1.0);
  CHECK(r.max_excursion < 1.5);
  CHECK(r.periods_run == 10.0);
  CHECK(r.rng_seed == config.rng_seed);
}

TEST_CASE("probe rejects negative perturbation scales") {
  ProbeConfig config;
  config.perturbation_scale = -1.0;
  CHECK_THROWS_AS(stability_probe(lagrange(), config), std::invalid_argument);
}

TEST_CASE("threshold scan brackets and validates its inputs") {
  std::vector<std::pair<double, FourierOrbit>> orbits = {{1.0, lagrange()}};
  ProbeConfig config;
  config.perturbation_scale = 0.0;
  config.periods = 2.0;
  config.steps_per_period = 512;
  const ThresholdScan scan = threshold_scan(orbits, {1.0}, config);
  CHECK(scan.entries.size() == 1);
  CHECK(scan.last_stable.has_value());
  CHECK(*scan.last_stable == 1.0);
  CHECK_FALSE(scan.first_unstable.has_value());
  CHECK_THROWS_AS(threshold_scan(orbits, {0.5}, config), std::runtime_error);
}
