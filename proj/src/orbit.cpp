#include "choreo/orbit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace choreo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

char axis_name(RotationAxis axis) {
  switch (axis) {
    case RotationAxis::X: return 'x';
    case RotationAxis::Y: return 'y';
    default: return 'z';
  }
}

RotationAxis axis_from_name(char c) {
  switch (c) {
    case 'x': case 'X': return RotationAxis::X;
    case 'y': case 'Y': return RotationAxis::Y;
    case 'z': case 'Z': return RotationAxis::Z;
    default: throw std::invalid_argument("axis must be one of x, y, z");
  }
}

Vec3 axis_unit(RotationAxis axis) {
  switch (axis) {
    case RotationAxis::X: return {1.0, 0.0, 0.0};
    case RotationAxis::Y: return {0.0, 1.0, 0.0};
    default: return {0.0, 0.0, 1.0};
  }
}

FourierOrbit::FourierOrbit(RotationAxis ax, double omega, int n, int kmax)
    : axis(ax), omega_rot(omega), n_bodies(n), k_max(kmax) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("n_bodies must be odd and >= 3");
  if (kmax < 1) throw std::invalid_argument("k_max must be >= 1");
  if (omega < 0.0) throw std::invalid_argument("omega_rot must be >= 0");
  x_sin.assign(kmax + 1, 0.0);
  y_sin.assign(kmax + 1, 0.0);
  z_cos.assign(kmax + 1, 0.0);
  x_cos.assign(kmax + 1, 0.0);
  y_cos.assign(kmax + 1, 0.0);
}

std::vector<double>& FourierOrbit::series(Series s) {
  switch (s) {
    case Series::XSin: return x_sin;
    case Series::YSin: return y_sin;
    case Series::ZCos: return z_cos;
    case Series::XCos: return x_cos;
    default: return y_cos;
  }
}

const std::vector<double>& FourierOrbit::series(Series s) const {
  return const_cast<FourierOrbit*>(this)->series(s);
}

std::vector<Series> FourierOrbit::present_series() const {
  if (axis == RotationAxis::Z) return {Series::XSin, Series::YSin, Series::XCos, Series::YCos};
  return {Series::XSin, Series::YSin, Series::ZCos};
}

bool FourierOrbit::coefficient_active(Series s, int k) const {
  if (k < 1 || k > k_max) return false;
  if (k % n_bodies == 0) return false;
  const bool odd = (k % 2 == 1);
  switch (s) {
    case Series::XSin: return odd;
    case Series::YSin: return !odd;
    case Series::ZCos:
      if (axis == RotationAxis::X) return !odd;
      if (axis == RotationAxis::Y) return odd;
      return false;
    case Series::XCos: return axis == RotationAxis::Z && !odd;
    case Series::YCos: return axis == RotationAxis::Z && odd;
  }
  return false;
}

CoefficientLayout CoefficientLayout::of(const FourierOrbit& orbit) {
  CoefficientLayout layout;
  for (Series s : orbit.present_series()) {
    for (int k = 1; k <= orbit.k_max; ++k) {
      if (orbit.coefficient_active(s, k)) layout.entries.push_back({s, k});
    }
  }
  return layout;
}

std::vector<double> pack_coefficients(const FourierOrbit& orbit, const CoefficientLayout& layout) {
  std::vector<double> v(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    v[i] = orbit.series(layout.entries[i].series)[layout.entries[i].harmonic];
  }
  return v;
}

void unpack_coefficients(FourierOrbit& orbit, const CoefficientLayout& layout,
                         const std::vector<double>& values) {
  if (values.size() != layout.size()) {
    throw std::invalid_argument("coefficient vector does not match layout");
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    orbit.series(layout.entries[i].series)[layout.entries[i].harmonic] = values[i];
  }
}

std::pair<Vec3, Vec3> generating_curve(const FourierOrbit& orbit, double t) {
  Vec3 pos, vel;
  for (int k = 1; k <= orbit.k_max; ++k) {
    const double s = std::sin(k * t);
    const double c = std::cos(k * t);
    pos.x += orbit.x_sin[k] * s + orbit.x_cos[k] * c;
    pos.y += orbit.y_sin[k] * s + orbit.y_cos[k] * c;
    pos.z += orbit.z_cos[k] * c;
    vel.x += k * (orbit.x_sin[k] * c - orbit.x_cos[k] * s);
    vel.y += k * (orbit.y_sin[k] * c - orbit.y_cos[k] * s);
    vel.z += -k * orbit.z_cos[k] * s;
  }
  return {pos, vel};
}

BodyTrajectorySample body_trajectory(const FourierOrbit& orbit, int body_index, double t) {
  if (body_index < 0 || body_index >= orbit.n_bodies) {
    throw std::out_of_range("body index out of range");
  }
  const double shifted = t + kTwoPi * body_index / orbit.n_bodies;
  auto [pos, vel] = generating_curve(orbit, shifted);
  return {body_index, t, pos, vel};
}

namespace {

// Rotation by angle about the given axis, acting on the cyclic pair of
// the remaining coordinates: X rotates (y,z), Y rotates (z,x), Z (x,y).
Vec3 rotate_about(RotationAxis axis, double angle, const Vec3& v) {
  const double c = std::cos(angle), s = std::sin(angle);
  switch (axis) {
    case RotationAxis::X: return {v.x, c * v.y - s * v.z, s * v.y + c * v.z};
    case RotationAxis::Y: return {s * v.z + c * v.x, v.y, c * v.z - s * v.x};
    default: return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
  }
}

}  // namespace

BodyTrajectorySample to_fixed_frame(const FourierOrbit& orbit, int body_index, double t) {
  BodyTrajectorySample rot = body_trajectory(orbit, body_index, t);
  const double angle = orbit.omega_rot * t;
  const Vec3 omega_vec = orbit.omega_rot * axis_unit(orbit.axis);
  BodyTrajectorySample out = rot;
  out.position = rotate_about(orbit.axis, angle, rot.position);
  out.velocity = rotate_about(orbit.axis, angle, rot.velocity + cross(omega_vec, rot.position));
  return out;
}

FourierOrbit apply_momentum_mask(const FourierOrbit& orbit) {
  FourierOrbit out = orbit;
  for (Series s : {Series::XSin, Series::YSin, Series::ZCos, Series::XCos, Series::YCos}) {
    auto& arr = out.series(s);
    for (int k = 0; k < static_cast<int>(arr.size()); k += orbit.n_bodies) arr[k] = 0.0;
  }
  return out;
}

int default_k_max(int n_bodies) {
  if (n_bodies <= 3) return 16;
  return std::max(16, 2 * n_bodies + 6);
}

}  // namespace choreo
