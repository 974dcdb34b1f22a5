#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "choreo/orbit.hpp"

namespace choreo {

/// Two bodies closer than collision_epsilon.
struct CollisionError : std::runtime_error {
  int body_i, body_j;
  double time;
  CollisionError(int i, int j, double t)
      : std::runtime_error("collision between bodies " + std::to_string(i) + " and " +
                           std::to_string(j) + " at t = " + std::to_string(t)),
        body_i(i), body_j(j), time(t) {}
};

constexpr double collision_epsilon = 1e-6;

/// Parts of the rotating-frame action integral over one period.
/// potential stores the integral of P = -sum 1/r_ij (a negative number);
/// total = kinetic - potential + centrifugal + coriolis.
struct ActionBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double centrifugal = 0.0;
  double coriolis = 0.0;
  double total = 0.0;
};

/// Exact partial derivatives of the discretized action with respect to
/// the active coefficients, in CoefficientLayout order.
struct GradientVector {
  CoefficientLayout layout;
  std::vector<double> values;

  double max_abs() const;
};

/// Uniform sampling of [0, 2*pi) with cached harmonic tables.
/// The rectangle rule on this grid integrates trigonometric polynomials
/// of degree < m_points exactly, so it is spectrally accurate here.
struct QuadratureGrid {
  int k_max = 0;
  int m_points = 0;
  std::vector<double> sin_table;  // (k_max+1) x m_points, row-major
  std::vector<double> cos_table;

  static QuadratureGrid build(int k_max, int m_points);

  double theta(int i) const;
  const double* sin_row(int k) const { return sin_table.data() + static_cast<std::size_t>(k) * m_points; }
  const double* cos_row(int k) const { return cos_table.data() + static_cast<std::size_t>(k) * m_points; }
};

/// Grid sized for an orbit: m a multiple of n_bodies with
/// m >= max(256, 8*k_max), so body trajectories are cyclic index shifts
/// of the generating-curve samples.
QuadratureGrid make_grid(const FourierOrbit& orbit, int min_points = 256);

/// K(t) = (1/2) w^2 sum_j |v_j|^2 for curve-parameter velocities; w is
/// the intrinsic curve frequency (1 everywhere except scaling tests).
double kinetic_energy(std::span<const Vec3> velocities, double curve_omega = 1.0);

/// P(t) = -sum_{i<j} 1/r_ij. Throws CollisionError when a pair distance
/// drops to collision_epsilon; `time` only labels the error.
double potential_energy(std::span<const Vec3> positions, double time = 0.0);

/// Moment of inertia about the axis: e.g. sum of y^2 + z^2 for X.
double moment_of_inertia(std::span<const Vec3> positions, RotationAxis axis);

/// Angular momentum about the axis: e.g. w * sum (y vz - z vy) for X.
double angular_momentum(std::span<const Vec3> positions, std::span<const Vec3> velocities,
                        RotationAxis axis, double curve_omega = 1.0);

/// Generating-curve samples on the grid.
struct CurveSamples {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
};
CurveSamples sample_curve(const FourierOrbit& orbit, const QuadratureGrid& grid);

/// Action integral from precomputed per-instant values of all n bodies.
/// `body_at(j, i)` must give body j's sample at grid point i.
ActionBreakdown action_from_samples(const FourierOrbit& orbit, const QuadratureGrid& grid,
                                    const CurveSamples& curve, double curve_omega = 1.0);

ActionBreakdown action(const FourierOrbit& orbit, const QuadratureGrid& grid,
                       double curve_omega = 1.0);

GradientVector action_gradient(const FourierOrbit& orbit, const QuadratureGrid& grid,
                               double curve_omega = 1.0);

}  // namespace choreo
