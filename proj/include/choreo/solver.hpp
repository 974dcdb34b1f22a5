#pragma once

#include <optional>
#include <vector>

#include "choreo/action.hpp"
#include "choreo/orbit.hpp"

namespace choreo {

/// Per-block ascent/descent signs for the preconditioned gradient map.
/// -1 steps toward a minimum of the action, +1 toward a maximum.
struct SignPolicy {
  double x_sin = -1.0, y_sin = -1.0, z_cos = -1.0, x_cos = -1.0, y_cos = -1.0;

  struct Override {
    Series series;
    int harmonic;
    double sign;
  };
  std::vector<Override> overrides;

  double sign_for(Series s, int k) const;

  /// Rotation about X or Z extremizes at a minimum in every block; about
  /// Y the leading z-series coefficients sit at a maximum.
  static SignPolicy defaults_for(RotationAxis axis);
};

struct SolverConfig {
  double delta_s = 0.2;        // step parameter, useful range 0.05 - 0.5
  SignPolicy signs;
  double tol = 1e-12;          // max coefficient change declaring convergence
  long max_iters = 200000;
  int divergence_window = 10;  // consecutive gradient-norm rises
  int min_grid_points = 256;
};

enum class SolveStatus { Converged, Diverged, MaxItersReached, Collision };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxItersReached;
  FourierOrbit orbit;
  long iterations = 0;
  double final_step_norm = 0.0;
  /// Max-norm of the per-body gradient (action gradient / (n*pi)); the
  /// scale on which delta_s and the divergence test operate.
  double final_gradient_norm = 0.0;
  std::optional<ActionBreakdown> action;
};

/// One preconditioned step: each active coefficient moves by
/// sign * (delta_s / u(k)) * g(k), u(k) = k^2 + omega^2, where g is the
/// per-body gradient. The mask stays enforced by the layout.
FourierOrbit descent_step(const FourierOrbit& orbit, const GradientVector& gradient,
                          const SolverConfig& config);

/// Iterates descent_step until the largest coefficient change falls
/// below tol, the gradient norm rises through the divergence window,
/// a collision occurs, or max_iters runs out. Never throws for those
/// outcomes; they are reported in the status.
SolveOutcome solve(const FourierOrbit& initial, double omega, const SolverConfig& config);

/// Result of a short probe run under one candidate sign policy.
struct SignProbe {
  SignPolicy policy;
  bool diverged = false;
  double initial_gradient_norm = 0.0;
  double final_gradient_norm = 0.0;
  double decrease_fraction = 0.0;  // fraction of iterations with decreasing norm
  /// Max coefficient distance of the probe's end point from its start.
  /// Wrong-sign policies that happen to converge do so onto a different
  /// branch, far from the warm start.
  double drift = 0.0;
};

/// Picks the probe that decreases the gradient norm while staying on the
/// warm-start branch (smallest drift); throws std::runtime_error when
/// none of them makes progress.
std::size_t choose_best_probe(const std::vector<SignProbe>& probes);

/// Probes candidate per-block sign assignments (at most probe_iters
/// iterations each) and returns the config whose probe decreases the
/// gradient norm.
SolverConfig auto_sign_calibration(const FourierOrbit& initial, double omega,
                                   const SolverConfig& config, int probe_iters = 200);

struct FamilyPoint {
  double omega = 0.0;
  SolveOutcome outcome;
};

struct FamilyRecord {
  RotationAxis axis = RotationAxis::X;
  int n_bodies = 3;
  int k_max = 16;
  std::vector<FamilyPoint> points;

  bool all_converged() const;
  /// Index of the first non-converged point, or -1.
  int first_failure() const;
};

/// Solves along omega_list, warm-starting each point from the previous
/// converged orbit and stopping at the first failure. The seed for the
/// first point defaults to the perturbation-chart orbit when the sweep
/// starts near the Lagrange end (axis X, omega >= 0.9); otherwise an
/// explicit seed orbit is required.
///
/// Leaving an exact circular endpoint (all x_sin zero), the bifurcating
/// x_sin(1) mode is re-kicked from the chart, since it is invariant
/// under the gradient map and would otherwise stay on the circle branch.
FamilyRecord continuation_sweep(RotationAxis axis, int n_bodies,
                                const std::vector<double>& omega_list,
                                const SolverConfig& config,
                                std::optional<FourierOrbit> seed = std::nullopt,
                                int k_max = 0);

}  // namespace choreo
