#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "choreo/vec3.hpp"

namespace choreo {

/// Symmetry axis of the figure eight about which the frame rotates.
enum class RotationAxis { X, Y, Z };

char axis_name(RotationAxis axis);
RotationAxis axis_from_name(char c);
Vec3 axis_unit(RotationAxis axis);

/// Identifies one of the five coefficient series of the generating curve.
///
/// XSin and YSin are the sine series of x(t) (odd harmonics) and y(t)
/// (even harmonics). ZCos is the cosine series of z(t): even harmonics
/// when rotating about X, odd harmonics about Y, absent about Z.
/// XCos (even) and YCos (odd) extend x(t), y(t) for rotations about Z,
/// where the half-period symmetry of the eight is broken; they are
/// identically zero for the other two axes.
enum class Series { XSin, YSin, ZCos, XCos, YCos };

/// Truncated Fourier representation of the generating curve of an
/// n-body choreography, periodic with period 2*pi in a frame rotating
/// with angular frequency omega_rot about `axis`.
///
/// Units: G = 1, equal masses m = 1, intrinsic curve frequency 1.
struct FourierOrbit {
  RotationAxis axis = RotationAxis::X;
  double omega_rot = 0.0;
  int n_bodies = 3;
  int k_max = 16;

  // Dense coefficient arrays indexed by harmonic, size k_max + 1.
  std::vector<double> x_sin, y_sin, z_cos, x_cos, y_cos;

  FourierOrbit() = default;
  FourierOrbit(RotationAxis axis, double omega, int n, int k_max);

  std::vector<double>& series(Series s);
  const std::vector<double>& series(Series s) const;

  /// Series that can carry nonzero coefficients for this orbit's axis.
  std::vector<Series> present_series() const;

  /// True when harmonic k of series s is structurally allowed: the
  /// parity matches, k <= k_max, and k is not a multiple of n_bodies
  /// (the momentum mask).
  bool coefficient_active(Series s, int k) const;
};

/// Flat ordering of the active coefficients of an orbit; the solver's
/// unknown vector and the gradient share this layout.
struct CoefficientLayout {
  struct Entry {
    Series series;
    int harmonic;
  };
  std::vector<Entry> entries;

  static CoefficientLayout of(const FourierOrbit& orbit);
  std::size_t size() const { return entries.size(); }
};

std::vector<double> pack_coefficients(const FourierOrbit& orbit, const CoefficientLayout& layout);
void unpack_coefficients(FourierOrbit& orbit, const CoefficientLayout& layout,
                         const std::vector<double>& values);

/// Position and velocity of one body at one instant, rotating frame.
struct BodyTrajectorySample {
  int body_index = 0;
  double time = 0.0;
  Vec3 position;
  Vec3 velocity;
};

/// Evaluates the generating curve (the j = 0 body) at time t.
std::pair<Vec3, Vec3> generating_curve(const FourierOrbit& orbit, double t);

/// Body j's sample at time t: the generating curve at t + 2*pi*j/n.
BodyTrajectorySample body_trajectory(const FourierOrbit& orbit, int body_index, double t);

/// Rotating -> inertial frame map at time t: rotation by omega_rot * t
/// about the orbit axis, with the frame-rotation velocity added.
BodyTrajectorySample to_fixed_frame(const FourierOrbit& orbit, int body_index, double t);

/// Copy with every coefficient whose harmonic is a multiple of n_bodies
/// set to exactly zero. Idempotent.
FourierOrbit apply_momentum_mask(const FourierOrbit& orbit);

/// Default truncation order: 16 for n = 3, at least 2n + 6 for larger n.
int default_k_max(int n_bodies);

}  // namespace choreo
