#pragma once

// Upper half-plane geometry and PSL(2,R) arithmetic.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "irslab/error.hpp"

namespace irslab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Point x + iy of the upper half-plane. Construction rejects y < 1e-12.
class HPoint {
 public:
  static constexpr double kMinY = 1e-12;

  HPoint(double x, double y);

  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double x_;
  double y_;
};

inline const HPoint kI{0.0, 1.0};

/// Boundary point of the upper half-plane: a real number or +infinity.
using BoundaryPoint = double;

/// Element of PSL(2,R). Stored with unit determinant and the sign fixed so
/// that a > 0, or a == 0 and b > 0.
class Isometry {
 public:
  Isometry() = default;  // identity
  Isometry(double a, double b, double c, double d);

  static Isometry identity() { return {}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double trace() const { return a_ + d_; }
  double det() const { return a_ * d_ - b_ * c_; }

  Isometry inverse() const;

  /// Sign-insensitive entrywise comparison.
  bool approx_equal(const Isometry& other, double tol = 1e-12) const;
  bool operator==(const Isometry& other) const { return approx_equal(other); }

 private:
  struct Raw {};
  Isometry(Raw, double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {}
  friend Isometry compose(const Isometry&, const Isometry&);

  double a_ = 1.0;
  double b_ = 0.0;
  double c_ = 0.0;
  double d_ = 1.0;
};

Isometry compose(const Isometry& f, const Isometry& g);
inline Isometry operator*(const Isometry& f, const Isometry& g) { return compose(f, g); }

/// h^{-1} g h
Isometry conjugate(const Isometry& g, const Isometry& h);

/// Sign-minimised Frobenius distance between two matrices.
double frobenius_distance(const Isometry& f, const Isometry& g);

HPoint apply(const Isometry& g, const HPoint& z);
BoundaryPoint apply(const Isometry& g, BoundaryPoint x);

double distance(const HPoint& z, const HPoint& w);
/// cosh of the hyperbolic distance; cheaper when only comparisons are needed.
double cosh_distance(const HPoint& z, const HPoint& w);

/// 2 arcosh(max(2,|tr|)/2); exactly zero when |tr| <= 2 + tol.
double translation_length(const Isometry& g, double tol = 1e-9);

enum class IsometryTag { Identity, Elliptic, Parabolic, Hyperbolic };

struct IsometryClass {
  IsometryTag tag = IsometryTag::Identity;
  /// Hyperbolic: (repelling, attracting) endpoints of the axis.
  std::optional<std::pair<BoundaryPoint, BoundaryPoint>> axis;
  /// Parabolic: the fixed boundary point.
  std::optional<BoundaryPoint> fixed_point;
  double length = 0.0;
};

IsometryClass classify(const Isometry& g, double tol = 1e-9);

// Frequently used elements.
Isometry translation(double dx);                   // z -> z + dx
Isometry dilation(double factor);                  // z -> factor * z
Isometry rotation_about_i(double angle);           // elliptic, rotation by angle at i
Isometry move_i_to(const HPoint& z);               // affine map sending i to z
Isometry rotation_about(const HPoint& z, double angle);
/// Orientation-preserving map sending p -> 0 and q -> infinity (p != q).
Isometry standardize_pair(BoundaryPoint p, BoundaryPoint q);
/// Translation by signed distance along the oriented geodesic from `from` to `to`.
Isometry translation_along(BoundaryPoint from, BoundaryPoint to, double dist);
/// Element of the one-parameter group containing hyperbolic g, translating by `dist`.
Isometry hyperbolic_power(const Isometry& g, double dist);

// ---------------------------------------------------------------------------
// Area of regions of the upper half-plane.

/// Bounding box in (x, y). y_max may be +infinity.
struct Box {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 1.0;
  double y_max = 2.0;
};

/// Hyperbolic area of the box: (x_max - x_min)(1/y_min - 1/y_max).
double box_area(const Box& box);

enum class AreaMethod { Midpoint, MonteCarlo };

struct AreaOptions {
  AreaMethod method = AreaMethod::Midpoint;
  int resolution = 32;      // base grid per axis (midpoint)
  int refine_depth = 10;    // adaptive subdivision depth on mixed cells (midpoint)
  std::size_t samples = 200000;  // Monte Carlo
  std::uint64_t seed = 1;
  int boundary_probes = 256;     // per box edge
  double max_boundary_fraction = 1e-3;
};

struct AreaEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

using RegionPredicate = std::function<bool(const HPoint&)>;

/// Estimates the integral of 1/y^2 over the region. The quadrature runs in
/// (x, u = 1/y) where the density is uniform.
AreaEstimate area_region(const RegionPredicate& indicator, const Box& box,
                         const AreaOptions& options = {});

/// 2 pi (cosh r - 1)
double ball_area(double r);

}  // namespace irslab
