#pragma once

// Dirichlet and truncated Dirichlet domains as convex hyperbolic polygons.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "irslab/fuchsian.hpp"
#include "irslab/hyperbolic.hpp"

namespace irslab {

enum class SideKind {
  Bisector,  // perpendicular bisector of o and pairing * o
  Axis,      // axis of a boundary-curve conjugate (truncation)
  Free,      // arc of the ideal boundary: the polygon is unbounded there
};

/// A side is the closed half-plane B(X, normal) >= 0 in hyperboloid
/// coordinates, with B(normal, normal) = -1. In the half-plane picture the
/// boundary is a vertical line x = center or a circle |z - center| = radius.
struct GeodesicSide {
  SideKind kind = SideKind::Bisector;
  std::array<double, 3> normal{0.0, 0.0, 0.0};
  std::optional<Isometry> pairing;  // Bisector sides
  Word word;                        // word of the pairing or of the boundary conjugate
  bool vertical = false;
  double center = 0.0;
  double radius = 0.0;
  /// Circle: the region lies inside the circle. Vertical: the region is x >= center.
  bool keep_inside = false;
};

enum class VertexKind { Finite, Ideal };

/// vertices[i] joins sides[i] and sides[i + 1] (cyclically).
struct PolygonVertex {
  VertexKind kind = VertexKind::Finite;
  std::optional<HPoint> point;  // Finite
  BoundaryPoint ideal = 0.0;    // Ideal (may be +inf)
  double angle = 0.0;           // interior angle, 0 at ideal vertices
};

struct HyperbolicPolygon {
  HPoint base = kI;
  bool is_empty = false;  // with no sides and not empty, the polygon is the whole plane
  std::vector<GeodesicSide> sides;  // counter-clockwise
  std::vector<PolygonVertex> vertices;
  double radius_used = 0.0;  // ball radius behind the bisectors

  bool empty() const { return is_empty; }
  bool bounded() const;  // no free sides
};

/// Input to the half-plane intersection.
struct HalfPlane {
  std::array<double, 3> normal;  // any scale; region B(X, normal) >= 0
  SideKind kind = SideKind::Bisector;
  std::optional<Isometry> pairing;
  Word word;
};

/// Intersection of half-planes, computed by clipping in the projective
/// (Klein) picture. The empty set yields an empty polygon.
HyperbolicPolygon intersect_half_planes(const std::vector<HalfPlane>& planes, const HPoint& base);

/// Half-plane {x : d(x, o) <= d(x, g o)}.
HalfPlane bisector(const HPoint& o, const Isometry& g, const Word& word = {});

struct DomainOptions {
  /// Initial ball radius; <= 0 picks 1.5 x the smallest generator
  /// displacement, clamped to [1, 4].
  double radius = -1.0;
  /// Rounds of adding products of side pairings before enlarging the ball.
  int max_rounds = 40;
  double area_tol = 1e-7;  // relative, for the area certificate
  bool stabilization_check = true;
  BallOptions ball;
};

/// Dirichlet domain at o. For a lattice (or a group with boundary words) the
/// bisector set is refined until the Gauss-Bonnet area of the (truncated)
/// polygon equals 2 pi |chi|; a polygon containing the domain with the same
/// area is the domain. Then the bisectors of all products of two side
/// pairings must leave the vertices unchanged. Elementary groups return the
/// polygon of their ball. Throws DomainNotStabilized or UnboundedDomain.
HyperbolicPolygon dirichlet_domain(const FuchsianGroup& g, const HPoint& o = kI,
                                   const DomainOptions& options = {});

/// Cuts the polygon along axes of conjugates of boundary words, keeping the
/// side that contains limit points. Lattices are returned unchanged; an
/// elementary group returns the empty polygon. Throws TruncationIncomplete if
/// the result still has infinite area.
HyperbolicPolygon truncate_domain(const FuchsianGroup& g, const HyperbolicPolygon& p);

/// Closed membership (tolerance 1e-9 on sinh of the side distance).
bool contains(const HyperbolicPolygon& p, const HPoint& z, double tol = 1e-9);

/// Half-open membership for tiling: on the bisector of pairing g a tie is kept
/// iff g precedes g^{-1} in lexicographic order of canonical matrix entries.
bool contains_half_open(const HyperbolicPolygon& p, const HPoint& z, double tie_tol = 1e-9);

/// Largest signed distance from z to a side half-plane (<= 0 inside).
double outside_distance(const HyperbolicPolygon& p, const HPoint& z);

/// Gauss-Bonnet: (n - 2) pi - sum of angles; +inf with free sides, 0 if empty.
double polygon_area(const HyperbolicPolygon& p);

/// Runs dirichlet_domain and truncate_domain and compares the area with
/// 2 pi |chi|. Throws DiscretenessCheckFailed on mismatch; returns the area.
double certify_group(const FuchsianGroup& g, const HPoint& o = kI, double tol = 1e-6);

/// (4 eps / ball_area(eps)) (2 pi |chi| + V), V = sum over boundary curves of
/// length * sinh(eps).
double thick_part_diameter_bound(const FuchsianGroup& g, double eps);

/// Elements near a point, found by walking the tiling by translates of a
/// certified Dirichlet domain.
class TileWalker {
 public:
  explicit TileWalker(HyperbolicPolygon domain);

  const HyperbolicPolygon& domain() const { return domain_; }

  /// h with h^{-1} z in the domain.
  Isometry locate(const HPoint& z) const;

  /// All group elements g with d(z, g z) <= radius, identity included.
  std::vector<Isometry> ball_at(const HPoint& z, double radius) const;

  /// Elements of c^{-1} G c moving `base` by at most `radius`. Computed in the
  /// frame of the tile holding c * base, so deep conjugators lose no precision.
  std::vector<Isometry> conjugated_ball(const Isometry& c, const HPoint& base, double radius) const;

  /// Shortest non-identity displacement at z, capped at `cap` (+inf beyond).
  double systole_at(const HPoint& z, double cap) const;

  /// Whether some non-identity element moves z by at most `radius`. Stops at
  /// the first witness, so it stays cheap deep inside cusps.
  bool moves_within(const HPoint& z, double radius) const;

 private:
  // elements g of the domain's group with d(w, g w) <= radius, w in the domain
  std::vector<Isometry> local_ball(const std::array<double, 3>& w, double radius, bool first_only = false) const;

  HyperbolicPolygon domain_;
  std::vector<std::size_t> pairing_sides_;
  double orbit_tol_ = 1e-3;
};

struct SvgOptions {
  double x_min = -3.0, x_max = 3.0;
  double y_min = 0.0, y_max = 3.0;
  double width = 800.0;
  double stroke_width = 1.5;
};

std::string to_svg(const HyperbolicPolygon& p, const SvgOptions& options = {});
std::string to_text(const HyperbolicPolygon& p);

}  // namespace irslab
