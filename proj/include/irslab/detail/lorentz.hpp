#pragma once

// Hyperboloid coordinates used internally by the polygon code. The form is
// B(X, Y) = t t' - u u' - v v'; points satisfy B(X, X) = 1 with t > 0.

#include <array>
#include <cmath>

#include "irslab/hyperbolic.hpp"

namespace irslab::detail {

using Vec3 = std::array<double, 3>;

inline double lorentz(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
}

/// Vector L-orthogonal to a and b.
inline Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
  const Vec3 e{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  return {e[0], -e[1], -e[2]};
}

inline Vec3 to_hyperboloid(const HPoint& z) {
  const double r2 = z.x() * z.x() + z.y() * z.y();
  const double inv = 0.5 / z.y();
  return {(1.0 + r2) * inv, z.x() / z.y(), (r2 - 1.0) * inv};
}

/// Light-like representative of a boundary point (not normalised).
inline Vec3 ideal_vector(BoundaryPoint x) {
  if (std::isinf(x)) return {1.0, 0.0, 1.0};
  return {1.0 + x * x, 2.0 * x, x * x - 1.0};
}

inline HPoint from_hyperboloid(const Vec3& p) {
  const double y = 1.0 / (p[0] - p[2]);
  return HPoint(p[1] * y, y);
}

/// Boundary point of a light-like vector with t > 0.
inline BoundaryPoint boundary_from_vector(const Vec3& p) {
  const double den = p[0] - p[2];
  if (std::abs(den) <= 1e-15 * std::abs(p[0])) return kInf;
  return p[1] / den;
}

/// Scales a space-like vector to B(N, N) = -1.
inline Vec3 unit_spacelike(const Vec3& n) {
  const double s = 1.0 / std::sqrt(-lorentz(n, n));
  return {n[0] * s, n[1] * s, n[2] * s};
}

/// Image of a hyperboloid vector under the isometry (linear action on the
/// space of quadratic forms, written in (t, u, v)).
inline Vec3 act(const Isometry& g, const Vec3& p) {
  // The point is the symmetric matrix [[t+v, u],[u, t-v]] up to the map
  // z -> (t, u, v); action M -> g M g^T in the transposed convention.
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const double m11 = p[0] + p[2], m12 = p[1], m22 = p[0] - p[2];
  const double r11 = a * a * m11 + 2 * a * b * m12 + b * b * m22;
  const double r12 = a * c * m11 + (a * d + b * c) * m12 + b * d * m22;
  const double r22 = c * c * m11 + 2 * c * d * m12 + d * d * m22;
  return {0.5 * (r11 + r22), r12, 0.5 * (r11 - r22)};
}

}  // namespace irslab::detail
