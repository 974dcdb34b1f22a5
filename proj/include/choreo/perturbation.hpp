#pragma once

#include "choreo/orbit.hpp"

namespace choreo {

/// Scaled coordinates of the first-order expansion about the Lagrange
/// circular orbit: eps = a(1)/r, b2 = b(2)/r, b4 = b(4)/r with
/// r = 3^(-1/6), as functions of beta = 1 - Omega.
struct LagrangeChart {
  double beta = 0.0;
  double eps = 0.0;
  double b2 = 1.0;
  double b4 = 0.0;
};

/// One application of the first-order gradient map to the chart.
/// Requires b2 > 0.
LagrangeChart perturbation_map(const LagrangeChart& chart);

/// Closed-form fixed point of the map: eps = sqrt(19*beta/3),
/// b2 = 1 - (9/4)*beta, b4 = beta/4. Requires beta >= 0.
LagrangeChart fixed_point(double beta);

/// Deviations from the fixed point.
struct ChartDeviation {
  double d_eps = 0.0;
  double d_b2 = 0.0;
  double d_b4 = 0.0;
};

/// Linearized (plus the leading eps nonlinearity) map of deviations:
/// the eps mode contracts by 1 - 4*beta and is marginal at beta = 0,
/// which is what makes solves near the Lagrange end slow.
ChartDeviation deviation_map(const ChartDeviation& d, double beta);

/// Iterations needed to contract the marginal mode by m digits:
/// ceil(2.3 * m / (4 * beta)). Throws for beta = 0.
long iterations_estimate(int digits, double beta);

/// Circumradius of the uniformly rotating n-gon relative equilibrium
/// with unit angular frequency; 3^(-1/6) for n = 3.
double polygon_circumradius(int n_bodies);

/// Axis-X orbit built from the chart fixed point at beta = 1 - Omega:
/// the continuation seed at the Lagrange end of the family. beta = 0
/// gives the circular orbit itself. Valid for beta in [0, 0.1]; the
/// chart constants are exact for n = 3 and reused as a starting kick
/// for other odd n on the scaled circle.
FourierOrbit seed_orbit(double beta, int n_bodies, int k_max);

}  // namespace choreo
