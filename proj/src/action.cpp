#include "choreo/action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace choreo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cyclic coordinate pair rotated by the frame: X -> (y,z), Y -> (z,x), Z -> (x,y).
void transverse_indices(RotationAxis axis, int& u, int& v) {
  switch (axis) {
    case RotationAxis::X: u = 1; v = 2; break;
    case RotationAxis::Y: u = 2; v = 0; break;
    default: u = 0; v = 1; break;
  }
}

// Compensated accumulator; the grid sums must stay below the 1e-12
// agreement budget even at several thousand points.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};
}  // namespace

double GradientVector::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

QuadratureGrid QuadratureGrid::build(int k_max, int m_points) {
  if (m_points < 4 * k_max) {
    throw std::invalid_argument("quadrature grid needs m_points >= 4*k_max");
  }
  QuadratureGrid g;
  g.k_max = k_max;
  g.m_points = m_points;
  g.sin_table.resize(static_cast<std::size_t>(k_max + 1) * m_points);
  g.cos_table.resize(static_cast<std::size_t>(k_max + 1) * m_points);
  for (int k = 0; k <= k_max; ++k) {
    for (int i = 0; i < m_points; ++i) {
      const double kt = kTwoPi * k * i / m_points;
      g.sin_table[static_cast<std::size_t>(k) * m_points + i] = std::sin(kt);
      g.cos_table[static_cast<std::size_t>(k) * m_points + i] = std::cos(kt);
    }
  }
  return g;
}

double QuadratureGrid::theta(int i) const { return kTwoPi * i / m_points; }

QuadratureGrid make_grid(const FourierOrbit& orbit, int min_points) {
  int m = std::max(min_points, 8 * orbit.k_max);
  const int n = orbit.n_bodies;
  m = ((m + n - 1) / n) * n;
  return QuadratureGrid::build(orbit.k_max, m);
}

double kinetic_energy(std::span<const Vec3> velocities, double curve_omega) {
  double s = 0.0;
  for (const Vec3& v : velocities) s += norm2(v);
  return 0.5 * curve_omega * curve_omega * s;
}

double potential_energy(std::span<const Vec3> positions, double time) {
  const int n = static_cast<int>(positions.size());
  double p = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r = norm(positions[i] - positions[j]);
      if (r <= collision_epsilon) throw CollisionError(i, j, time);
      p -= 1.0 / r;
    }
  }
  return p;
}

double moment_of_inertia(std::span<const Vec3> positions, RotationAxis axis) {
  int u, v;
  transverse_indices(axis, u, v);
  double s = 0.0;
  for (const Vec3& p : positions) s += p[u] * p[u] + p[v] * p[v];
  return s;
}

double angular_momentum(std::span<const Vec3> positions, std::span<const Vec3> velocities,
                        RotationAxis axis, double curve_omega) {
  int u, v;
  transverse_indices(axis, u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    s += positions[i][u] * velocities[i][v] - positions[i][v] * velocities[i][u];
  }
  return curve_omega * s;
}

CurveSamples sample_curve(const FourierOrbit& orbit, const QuadratureGrid& grid) {
  const int m = grid.m_points;
  CurveSamples out;
  out.positions.assign(m, Vec3{});
  out.velocities.assign(m, Vec3{});
  for (int k = 1; k <= orbit.k_max; ++k) {
    const double as = orbit.x_sin[k], ac = orbit.x_cos[k];
    const double bs = orbit.y_sin[k], bc = orbit.y_cos[k];
    const double cc = orbit.z_cos[k];
    if (as == 0.0 && ac == 0.0 && bs == 0.0 && bc == 0.0 && cc == 0.0) continue;
    const double* S = grid.sin_row(k);
    const double* C = grid.cos_row(k);
    for (int i = 0; i < m; ++i) {
      const double s = S[i], c = C[i];
      out.positions[i].x += as * s + ac * c;
      out.positions[i].y += bs * s + bc * c;
      out.positions[i].z += cc * c;
      out.velocities[i].x += k * (as * c - ac * s);
      out.velocities[i].y += k * (bs * c - bc * s);
      out.velocities[i].z += -k * cc * s;
    }
  }
  return out;
}

namespace {

struct PotentialScan {
  double integral = 0.0;               // integral of P over the period
  std::vector<Vec3> folded_forces;     // dP/d(body position) folded onto curve index
};

// Sums pair interactions over the grid. Body j's sample at grid point i
// is the curve sample at index i + j*(m/n) mod m; the fold accumulates
// every body's potential gradient back onto the generating curve, which
// is exactly the chain rule of the choreography parametrization.
PotentialScan scan_potential(const FourierOrbit& orbit, const QuadratureGrid& grid,
                             const CurveSamples& curve, bool with_forces) {
  const int m = grid.m_points;
  const int n = orbit.n_bodies;
  if (m % n != 0) throw std::invalid_argument("grid size must be a multiple of n_bodies");
  const int shift = m / n;

  PotentialScan scan;
  if (with_forces) scan.folded_forces.assign(m, Vec3{});
  std::vector<int> idx(n);
  Kahan integral;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) idx[j] = (i + j * shift) % m;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const Vec3 d = curve.positions[idx[a]] - curve.positions[idx[b]];
        const double r2 = norm2(d);
        const double r = std::sqrt(r2);
        if (r <= collision_epsilon) throw CollisionError(a, b, grid.theta(i));
        integral.add(-1.0 / r);
        if (with_forces) {
          const Vec3 g = (1.0 / (r2 * r)) * d;  // d(-1/r)/d(pos_a)
          scan.folded_forces[idx[a]] += g;
          scan.folded_forces[idx[b]] -= g;
        }
      }
    }
  }
  scan.integral = integral.sum * kTwoPi / m;
  return scan;
}

}  // namespace

ActionBreakdown action_from_samples(const FourierOrbit& orbit, const QuadratureGrid& grid,
                                    const CurveSamples& curve, double curve_omega) {
  const int m = grid.m_points;
  const int n = orbit.n_bodies;
  if (m % n != 0) throw std::invalid_argument("grid size must be a multiple of n_bodies");
  const double dtheta = kTwoPi / m;

  // Per-body sums over a full period equal n identical curve integrals.
  int u, w;
  transverse_indices(orbit.axis, u, w);
  Kahan v2, inertia, momentum;
  for (int i = 0; i < m; ++i) {
    const Vec3& p = curve.positions[i];
    const Vec3& v = curve.velocities[i];
    v2.add(norm2(v));
    inertia.add(p[u] * p[u] + p[w] * p[w]);
    momentum.add(p[u] * v[w] - p[w] * v[u]);
  }

  ActionBreakdown out;
  out.kinetic = 0.5 * curve_omega * curve_omega * n * v2.sum * dtheta;
  out.centrifugal = 0.5 * orbit.omega_rot * orbit.omega_rot * n * inertia.sum * dtheta;
  out.coriolis = orbit.omega_rot * curve_omega * n * momentum.sum * dtheta;
  out.potential = scan_potential(orbit, grid, curve, false).integral;
  out.total = out.kinetic - out.potential + out.centrifugal + out.coriolis;
  return out;
}

ActionBreakdown action(const FourierOrbit& orbit, const QuadratureGrid& grid,
                       double curve_omega) {
  return action_from_samples(orbit, grid, sample_curve(orbit, grid), curve_omega);
}

GradientVector action_gradient(const FourierOrbit& orbit, const QuadratureGrid& grid,
                               double curve_omega) {
  const int m = grid.m_points;
  const int n = orbit.n_bodies;
  const double w = curve_omega;
  const double W = orbit.omega_rot;
  const double npi = n * kPi;
  const double dtheta = kTwoPi / m;

  const CurveSamples curve = sample_curve(orbit, grid);
  const PotentialScan scan = scan_potential(orbit, grid, curve, true);

  GradientVector grad;
  grad.layout = CoefficientLayout::of(orbit);
  grad.values.resize(grad.layout.size());

  for (std::size_t e = 0; e < grad.layout.size(); ++e) {
    const Series s = grad.layout.entries[e].series;
    const int k = grad.layout.entries[e].harmonic;
    const double uk = static_cast<double>(k) * k * w * w + W * W;
    const double vk = 2.0 * k * w * W;

    // Quadratic (kinetic + centrifugal + coriolis) part, closed form.
    // The coordinate along the rotation axis carries only k^2 w^2; the
    // transverse pair carries u(k) plus the Coriolis cross coupling.
    double quad = 0.0;
    switch (orbit.axis) {
      case RotationAxis::X:
        if (s == Series::XSin) quad = npi * k * k * w * w * orbit.x_sin[k];
        else if (s == Series::YSin) quad = npi * (uk * orbit.y_sin[k] - vk * orbit.z_cos[k]);
        else quad = npi * (uk * orbit.z_cos[k] - vk * orbit.y_sin[k]);
        break;
      case RotationAxis::Y:
        if (s == Series::YSin) quad = npi * k * k * w * w * orbit.y_sin[k];
        else if (s == Series::XSin) quad = npi * (uk * orbit.x_sin[k] + vk * orbit.z_cos[k]);
        else quad = npi * (uk * orbit.z_cos[k] + vk * orbit.x_sin[k]);
        break;
      case RotationAxis::Z:
        if (s == Series::XSin) quad = npi * (uk * orbit.x_sin[k] - vk * orbit.y_cos[k]);
        else if (s == Series::YCos) quad = npi * (uk * orbit.y_cos[k] - vk * orbit.x_sin[k]);
        else if (s == Series::YSin) quad = npi * (uk * orbit.y_sin[k] + vk * orbit.x_cos[k]);
        else quad = npi * (uk * orbit.x_cos[k] + vk * orbit.y_sin[k]);
        break;
    }

    // Potential part: -d(int P)/d(coefficient) via the folded forces.
    Kahan proj;
    const bool sine = (s == Series::XSin || s == Series::YSin);
    const double* basis = sine ? grid.sin_row(k) : grid.cos_row(k);
    const int comp = (s == Series::XSin || s == Series::XCos) ? 0
                     : (s == Series::ZCos ? 2 : 1);
    for (int i = 0; i < m; ++i) proj.add(scan.folded_forces[i][comp] * basis[i]);

    grad.values[e] = quad - dtheta * proj.sum;
  }
  return grad;
}

}  // namespace choreo
