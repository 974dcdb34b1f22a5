#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "choreo/action.hpp"
#include "choreo/orbit.hpp"

namespace choreo {

/// Inertial-frame snapshot of all n bodies.
struct PhaseState {
  double time = 0.0;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
};

/// Newtonian pairwise accelerations, G = m = 1.
std::vector<Vec3> accelerations(std::span<const Vec3> positions, double time = 0.0);

using AccelerationFn =
    std::function<std::vector<Vec3>(std::span<const Vec3>, double)>;

/// Classical fourth-order Runge-Kutta step of size h > 0.
PhaseState rk4_step(const PhaseState& state, double h);
PhaseState rk4_step(const PhaseState& state, double h, const AccelerationFn& accel);

/// All bodies of the orbit at curve time t0, mapped to the inertial
/// frame (positions rotated, frame rotation added to the velocities).
PhaseState initial_state_from_orbit(const FourierOrbit& orbit, double t0 = 0.0);

/// Inverse frame map at state.time: inertial state -> rotating frame.
PhaseState to_rotating_frame(const PhaseState& state, const FourierOrbit& orbit);

double total_energy(const PhaseState& state);
Vec3 total_angular_momentum(const PhaseState& state);

/// Running conservation metrics of one integration.
struct ConservationLedger {
  double initial_energy = 0.0;
  Vec3 initial_angular_momentum;
  Vec3 initial_com_position;
  Vec3 initial_com_momentum;
  double max_energy_drift = 0.0;    // max |E - E0| / |E0|
  double max_momentum_drift = 0.0;  // max |L - L0| / (1 + |L0|)
  double max_com_distance = 0.0;
};

struct TrajectorySample {
  double time = 0.0;
  std::vector<Vec3> positions;
};

struct IntegrationResult {
  PhaseState final_state;
  ConservationLedger ledger;
  std::vector<TrajectorySample> samples;
  bool collided = false;
  int collision_body_i = -1, collision_body_j = -1;
};

/// Fixed-step RK4 over periods * steps_per_period steps of 2*pi /
/// steps_per_period, updating the ledger every step. sample_stride > 0
/// records every stride-th state. A collision stops the run and returns
/// the partial result with `collided` set.
IntegrationResult integrate(const PhaseState& initial, double periods, int steps_per_period,
                            int sample_stride = 0);

enum class StabilityClass { Stable, Unstable, CollisionTerminated };

const char* to_string(StabilityClass c);

struct ProbeConfig {
  double perturbation_scale = 1e-3;
  double periods = 100.0;
  int steps_per_period = 4096;
  double excursion_bound = 3.0;
  unsigned long long rng_seed = 12345;
  int sample_stride = 0;
};

struct StabilityReport {
  double periods_run = 0.0;
  double energy_drift = 0.0;
  double momentum_drift = 0.0;
  /// Max over time of the largest body distance from the origin,
  /// relative to its initial value.
  double max_excursion = 1.0;
  StabilityClass classification = StabilityClass::Stable;
  double perturbation_scale = 0.0;
  unsigned long long rng_seed = 0;
  double excursion_bound = 3.0;
  std::vector<TrajectorySample> samples;
};

/// Multiplies every component of the orbit's initial state by a random
/// factor in [1-s, 1+s] (deterministic in rng_seed), integrates, and
/// classifies. Unstable when the excursion bound is crossed; a run that
/// breaches the 1e-5 conservation budget is not certified either and
/// also classifies Unstable, with the raw metrics kept in the report.
StabilityReport stability_probe(const FourierOrbit& orbit, const ProbeConfig& config);

struct ThresholdScan {
  std::vector<std::pair<double, StabilityReport>> entries;
  std::optional<double> last_stable;
  std::optional<double> first_unstable;
};

/// Runs stability_probe at each omega of omega_list; the orbits must be
/// provided (converged family members keyed by omega).
ThresholdScan threshold_scan(const std::vector<std::pair<double, FourierOrbit>>& orbits,
                             const std::vector<double>& omega_list, const ProbeConfig& config);

}  // namespace choreo
