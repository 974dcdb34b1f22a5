#include "choreo/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace choreo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 com(const std::vector<Vec3>& v) {
  Vec3 c;
  for (const Vec3& x : v) c += x;
  return (1.0 / static_cast<double>(v.size())) * c;
}
}  // namespace

std::vector<Vec3> accelerations(std::span<const Vec3> positions, double time) {
  const int n = static_cast<int>(positions.size());
  std::vector<Vec3> acc(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec3 d = positions[j] - positions[i];
      const double r2 = norm2(d);
      const double r = std::sqrt(r2);
      if (r <= collision_epsilon) throw CollisionError(i, j, time);
      const Vec3 f = (1.0 / (r2 * r)) * d;
      acc[i] += f;   // pair forces applied antisymmetrically, so the
      acc[j] -= f;   // total momentum is conserved to roundoff
    }
  }
  return acc;
}

PhaseState rk4_step(const PhaseState& state, double h) {
  return rk4_step(state, h, [](std::span<const Vec3> p, double t) { return accelerations(p, t); });
}

PhaseState rk4_step(const PhaseState& state, double h, const AccelerationFn& accel) {
  if (h <= 0.0) throw std::invalid_argument("rk4_step requires h > 0");
  const std::size_t n = state.positions.size();
  const double t = state.time;

  const std::vector<Vec3>& x0 = state.positions;
  const std::vector<Vec3>& v0 = state.velocities;

  std::vector<Vec3> xt(n);

  const std::vector<Vec3> a1 = accel(x0, t);
  for (std::size_t i = 0; i < n; ++i) xt[i] = x0[i] + 0.5 * h * v0[i];
  const std::vector<Vec3> a2 = accel(xt, t + 0.5 * h);

  std::vector<Vec3> v2(n);
  for (std::size_t i = 0; i < n; ++i) v2[i] = v0[i] + 0.5 * h * a1[i];
  for (std::size_t i = 0; i < n; ++i) xt[i] = x0[i] + 0.5 * h * v2[i];
  const std::vector<Vec3> a3 = accel(xt, t + 0.5 * h);

  std::vector<Vec3> v3(n);
  for (std::size_t i = 0; i < n; ++i) v3[i] = v0[i] + 0.5 * h * a2[i];
  for (std::size_t i = 0; i < n; ++i) xt[i] = x0[i] + h * v3[i];
  const std::vector<Vec3> a4 = accel(xt, t + h);

  PhaseState out;
  out.time = t + h;
  out.positions.resize(n);
  out.velocities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 v4 = v0[i] + h * a3[i];
    out.positions[i] = x0[i] + (h / 6.0) * (v0[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4);
    out.velocities[i] = v0[i] + (h / 6.0) * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
  }
  return out;
}

PhaseState initial_state_from_orbit(const FourierOrbit& orbit, double t0) {
  PhaseState s;
  s.time = t0;
  s.positions.resize(orbit.n_bodies);
  s.velocities.resize(orbit.n_bodies);
  for (int j = 0; j < orbit.n_bodies; ++j) {
    const BodyTrajectorySample fixed = to_fixed_frame(orbit, j, t0);
    s.positions[j] = fixed.position;
    s.velocities[j] = fixed.velocity;
  }
  return s;
}

PhaseState to_rotating_frame(const PhaseState& state, const FourierOrbit& orbit) {
  const double angle = -orbit.omega_rot * state.time;
  const Vec3 omega_vec = orbit.omega_rot * axis_unit(orbit.axis);
  const double c = std::cos(angle), sn = std::sin(angle);

  auto rotate = [&](const Vec3& v) -> Vec3 {
    switch (orbit.axis) {
      case RotationAxis::X: return {v.x, c * v.y - sn * v.z, sn * v.y + c * v.z};
      case RotationAxis::Y: return {sn * v.z + c * v.x, v.y, c * v.z - sn * v.x};
      default: return {c * v.x - sn * v.y, sn * v.x + c * v.y, v.z};
    }
  };

  PhaseState out;
  out.time = state.time;
  out.positions.resize(state.positions.size());
  out.velocities.resize(state.velocities.size());
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    out.positions[i] = rotate(state.positions[i]);
    out.velocities[i] = rotate(state.velocities[i]) - cross(omega_vec, out.positions[i]);
  }
  return out;
}

double total_energy(const PhaseState& state) {
  return kinetic_energy(state.velocities) + potential_energy(state.positions, state.time);
}

Vec3 total_angular_momentum(const PhaseState& state) {
  Vec3 L;
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    L += cross(state.positions[i], state.velocities[i]);
  }
  return L;
}

namespace {

ConservationLedger open_ledger(const PhaseState& s) {
  ConservationLedger ledger;
  ledger.initial_energy = total_energy(s);
  ledger.initial_angular_momentum = total_angular_momentum(s);
  ledger.initial_com_position = com(s.positions);
  ledger.initial_com_momentum = com(s.velocities) * static_cast<double>(s.positions.size());
  return ledger;
}

void update_ledger(ConservationLedger& ledger, const PhaseState& s) {
  const double e = total_energy(s);
  const Vec3 l = total_angular_momentum(s);
  ledger.max_energy_drift =
      std::max(ledger.max_energy_drift,
               std::abs(e - ledger.initial_energy) / std::abs(ledger.initial_energy));
  ledger.max_momentum_drift =
      std::max(ledger.max_momentum_drift, norm(l - ledger.initial_angular_momentum) /
                                              (1.0 + norm(ledger.initial_angular_momentum)));
  ledger.max_com_distance = std::max(ledger.max_com_distance, norm(com(s.positions)));
}

}  // namespace

IntegrationResult integrate(const PhaseState& initial, double periods, int steps_per_period,
                            int sample_stride) {
  if (steps_per_period < 256) {
    throw std::invalid_argument("integrate requires steps_per_period >= 256");
  }
  if (periods <= 0.0) throw std::invalid_argument("periods must be positive");

  IntegrationResult out;
  out.final_state = initial;
  try {
    out.ledger = open_ledger(initial);
  } catch (const CollisionError& c) {
    out.collided = true;
    out.collision_body_i = c.body_i;
    out.collision_body_j = c.body_j;
    return out;
  }
  const double h = kTwoPi / steps_per_period;
  const long total_steps = static_cast<long>(std::llround(periods * steps_per_period));

  if (sample_stride > 0) out.samples.push_back({initial.time, initial.positions});
  for (long step = 1; step <= total_steps; ++step) {
    try {
      out.final_state = rk4_step(out.final_state, h);
      update_ledger(out.ledger, out.final_state);
    } catch (const CollisionError& c) {
      out.collided = true;
      out.collision_body_i = c.body_i;
      out.collision_body_j = c.body_j;
      break;
    }
    if (sample_stride > 0 && step % sample_stride == 0) {
      out.samples.push_back({out.final_state.time, out.final_state.positions});
    }
  }
  return out;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Unstable: return "unstable";
    default: return "collision-terminated";
  }
}

StabilityReport stability_probe(const FourierOrbit& orbit, const ProbeConfig& config) {
  if (config.perturbation_scale < 0.0) {
    throw std::invalid_argument("perturbation_scale must be >= 0");
  }
  PhaseState state = initial_state_from_orbit(orbit, 0.0);
  if (config.perturbation_scale > 0.0) {
    std::mt19937_64 rng(config.rng_seed);
    std::uniform_real_distribution<double> u(-config.perturbation_scale,
                                             config.perturbation_scale);
    for (Vec3& p : state.positions) {
      p.x *= 1.0 + u(rng);
      p.y *= 1.0 + u(rng);
      p.z *= 1.0 + u(rng);
    }
    for (Vec3& v : state.velocities) {
      v.x *= 1.0 + u(rng);
      v.y *= 1.0 + u(rng);
      v.z *= 1.0 + u(rng);
    }
  }

  StabilityReport report;
  report.perturbation_scale = config.perturbation_scale;
  report.rng_seed = config.rng_seed;
  report.excursion_bound = config.excursion_bound;

  double r0 = 0.0;
  for (const Vec3& p : state.positions) r0 = std::max(r0, norm(p));

  ConservationLedger ledger;
  try {
    ledger = open_ledger(state);
  } catch (const CollisionError&) {
    report.classification = StabilityClass::CollisionTerminated;
    return report;
  }
  const double h = kTwoPi / config.steps_per_period;
  const long total_steps =
      static_cast<long>(std::llround(config.periods * config.steps_per_period));

  if (config.sample_stride > 0) report.samples.push_back({state.time, state.positions});
  bool collided = false;
  long step = 0;
  for (step = 1; step <= total_steps; ++step) {
    try {
      state = rk4_step(state, h);
      update_ledger(ledger, state);
    } catch (const CollisionError&) {
      collided = true;
      break;
    }
    double rmax = 0.0;
    for (const Vec3& p : state.positions) rmax = std::max(rmax, norm(p));
    report.max_excursion = std::max(report.max_excursion, rmax / r0);
    if (config.sample_stride > 0 && step % config.sample_stride == 0) {
      report.samples.push_back({state.time, state.positions});
    }
    if (report.max_excursion > config.excursion_bound) break;
  }

  report.periods_run = std::min<double>(config.periods,
                                        static_cast<double>(step) / config.steps_per_period);
  report.energy_drift = ledger.max_energy_drift;
  report.momentum_drift = ledger.max_momentum_drift;
  if (collided) {
    report.classification = StabilityClass::CollisionTerminated;
  } else if (report.max_excursion > config.excursion_bound ||
             report.energy_drift > 1e-5) {
    report.classification = StabilityClass::Unstable;
  } else {
    report.classification = StabilityClass::Stable;
  }
  return report;
}

ThresholdScan threshold_scan(const std::vector<std::pair<double, FourierOrbit>>& orbits,
                             const std::vector<double>& omega_list, const ProbeConfig& config) {
  ThresholdScan scan;
  for (double omega : omega_list) {
    const FourierOrbit* orbit = nullptr;
    for (const auto& [w, o] : orbits) {
      if (std::abs(w - omega) < 1e-9) {
        orbit = &o;
        break;
      }
    }
    if (!orbit) {
      throw std::runtime_error("threshold_scan: no converged orbit available at omega = " +
                               std::to_string(omega));
    }
    StabilityReport report = stability_probe(*orbit, config);
    if (report.classification == StabilityClass::Stable) {
      scan.last_stable = omega;
    } else if (!scan.first_unstable.has_value()) {
      scan.first_unstable = omega;
    }
    scan.entries.emplace_back(omega, std::move(report));
  }
  return scan;
}

}  // namespace choreo
