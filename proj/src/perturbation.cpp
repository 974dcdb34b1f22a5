#include "choreo/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace choreo {

LagrangeChart perturbation_map(const LagrangeChart& chart) {
  if (chart.b2 <= 0.0) throw std::domain_error("perturbation_map requires b2 > 0");
  const double beta = chart.beta;
  const double eps = chart.eps, b2 = chart.b2, b4 = chart.b4;
  const double e2 = eps * eps;
  const double inv_b2sq = 1.0 / (b2 * b2);

  LagrangeChart out;
  out.beta = beta;
  out.eps = (eps / (b2 * b2 * b2)) * (1.0 - 9.0 / 8.0 * e2 + 1.5 * b4);
  out.b2 = (4.0 * (1.0 - beta) * b2 + inv_b2sq * (1.0 - 0.75 * e2)) / (5.0 - 2.0 * beta);
  // The b4 feedback enters with weight 1/2; this is the form whose fixed
  // point is exactly b4 = beta/4 with contraction 15/34 at beta = 0.
  out.b4 = (8.0 * (1.0 - beta) * b4 + inv_b2sq * (3.0 / 8.0 * e2 - 0.5 * b4)) /
           (17.0 - 2.0 * beta);
  return out;
}

LagrangeChart fixed_point(double beta) {
  if (beta < 0.0) throw std::domain_error("fixed_point requires beta >= 0");
  LagrangeChart c;
  c.beta = beta;
  c.eps = std::sqrt(19.0 * beta / 3.0);
  c.b2 = 1.0 - 2.25 * beta;
  c.b4 = 0.25 * beta;
  return c;
}

ChartDeviation deviation_map(const ChartDeviation& d, double beta) {
  ChartDeviation out;
  out.d_eps = d.d_eps * (1.0 - 4.0 * beta - 6.0 * std::sqrt(3.0 * beta / 19.0) * d.d_eps);
  out.d_b2 = 0.4 * (1.0 - 42.0 / 5.0 * beta) * d.d_b2;
  out.d_b4 = (15.0 / 34.0) * (1.0 - 274.0 / 255.0 * beta) * d.d_b4;
  return out;
}

long iterations_estimate(int digits, double beta) {
  if (digits < 1) throw std::domain_error("iterations_estimate requires digits >= 1");
  if (beta <= 0.0) {
    throw std::domain_error("iterations_estimate diverges for beta = 0 (marginal mode)");
  }
  return static_cast<long>(std::ceil(2.3 * digits / (4.0 * beta)));
}

double polygon_circumradius(int n_bodies) {
  if (n_bodies < 3 || n_bodies % 2 == 0) {
    throw std::domain_error("n_bodies must be odd and >= 3");
  }
  double sum = 0.0;
  for (int j = 1; j < n_bodies; ++j) {
    sum += 1.0 / std::sin(std::numbers::pi * j / n_bodies);
  }
  return std::cbrt(0.25 * sum);
}

FourierOrbit seed_orbit(double beta, int n_bodies, int k_max) {
  if (beta < 0.0 || beta > 0.1) {
    throw std::domain_error("seed_orbit requires beta in [0, 0.1]");
  }
  if (k_max < 4) throw std::invalid_argument("seed_orbit needs k_max >= 4");
  const double r = polygon_circumradius(n_bodies);
  const LagrangeChart fp = fixed_point(beta);

  FourierOrbit orbit(RotationAxis::X, 1.0 - beta, n_bodies, k_max);
  orbit.x_sin[1] = r * fp.eps;
  orbit.y_sin[2] = r * fp.b2;
  orbit.y_sin[4] = r * fp.b4;
  // The chart does not fix the z coefficient; the stationary branch for
  // Omega > 0 pairs z_cos(2) = +y_sin(2) (its mirror is the Omega < 0
  // family).
  orbit.z_cos[2] = r * fp.b2;
  return apply_momentum_mask(orbit);
}

}  // namespace choreo
