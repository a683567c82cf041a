#include "irslab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "irslab/detail/lorentz.hpp"

namespace irslab {

using detail::act;
using detail::ideal_vector;
using detail::lorentz;
using detail::lorentz_cross;
using detail::to_hyperboloid;
using detail::Vec3;

namespace {

constexpr double kIdealTol = 1e-9;   // |B(V,V)| / V0^2 below this: ideal vertex
constexpr double kSquare = 1.5;      // initial clipping square in the projective chart
constexpr double kMergeTol = 1e-9;   // coincident vertices

struct Klein {
  double x, y;
};

Klein klein_of(const Vec3& v) { return {v[1] / v[0], v[2] / v[0]}; }

Klein klein_of_boundary(BoundaryPoint x) {
  if (std::isinf(x)) return {0.0, 1.0};
  const double d = 1.0 + x * x;
  return {2.0 * x / d, (x * x - 1.0) / d};
}

double side_value(const Vec3& n, const Klein& k) { return n[0] - n[1] * k.x - n[2] * k.y; }

// Endpoints of the geodesic B(X, n) = 0 for unit space-like n.
std::pair<BoundaryPoint, BoundaryPoint> geodesic_ends(const Vec3& n) {
  const double a = n[0] - n[2];
  const double scale = std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]);
  if (std::abs(a) <= 1e-14 * scale) return {n[0] / n[1], kInf};
  // a x^2 - 2 n1 x + (n0 + n2) = 0 with discriminant n1^2 - a (n0 + n2) = 1
  const double q = n[1] + (n[1] >= 0.0 ? 1.0 : -1.0);
  return {q / a, (n[0] + n[2]) / q};
}

void describe_side(GeodesicSide& s) {
  const Vec3& n = s.normal;
  const double a = n[0] - n[2];
  const double scale = std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]);
  if (std::abs(a) <= 1e-14 * scale) {
    // -2 n1 x + 2 n0 >= 0
    s.vertical = true;
    s.center = n[0] / n[1];
    s.radius = 0.0;
    s.keep_inside = n[1] < 0.0;
  } else {
    s.vertical = false;
    s.center = n[1] / a;
    s.radius = 1.0 / std::abs(a);
    s.keep_inside = a < 0.0;
  }
}

double dist2(const Klein& p, const Klein& q) {
  return (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
}

struct ClipVertex {
  Klein at;
  int label;  // edge from this vertex to the next lies on plane `label`; < 0: square edge
};

std::vector<ClipVertex> clip(const std::vector<ClipVertex>& poly, const Vec3& n, int label) {
  std::vector<ClipVertex> out;
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    const ClipVertex& p = poly[k];
    const ClipVertex& q = poly[(k + 1) % m];
    const double fp = side_value(n, p.at), fq = side_value(n, q.at);
    const bool pin = fp >= 0.0, qin = fq >= 0.0;
    auto cut = [&] {
      const double s = fp / (fp - fq);
      return Klein{p.at.x + s * (q.at.x - p.at.x), p.at.y + s * (q.at.y - p.at.y)};
    };
    if (pin && qin) {
      out.push_back(p);
    } else if (pin && !qin) {
      out.push_back(p);
      out.push_back({cut(), label});
    } else if (!pin && qin) {
      out.push_back({cut(), p.label});
    }
  }
  return out;
}

// Portion of segment p->q inside the unit disc, as parameters [s0, s1].
std::optional<std::pair<double, double>> inside_disc(const Klein& p, const Klein& q) {
  const double dx = q.x - p.x, dy = q.y - p.y;
  const double a = dx * dx + dy * dy;
  if (a < 1e-30) return std::nullopt;
  const double b = p.x * dx + p.y * dy;
  const double c = p.x * p.x + p.y * p.y - 1.0;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return std::nullopt;
  const double r = std::sqrt(disc);
  const double s0 = std::max(0.0, (-b - r) / a), s1 = std::min(1.0, (-b + r) / a);
  if ((s1 - s0) * std::sqrt(a) <= 1e-10) return std::nullopt;
  return std::make_pair(s0, s1);
}

PolygonVertex ideal_vertex(BoundaryPoint x) {
  PolygonVertex v;
  v.kind = VertexKind::Ideal;
  v.ideal = x;
  return v;
}

// Vertex where sides with unit normals n1, n2 meet, or nullopt when they are
// ultra-parallel.
std::optional<PolygonVertex> meet(const Vec3& n1, const Vec3& n2) {
  Vec3 v = lorentz_cross(n1, n2);
  if (std::abs(v[0]) < 1e-300) return std::nullopt;
  if (v[0] < 0.0) v = {-v[0], -v[1], -v[2]};
  const double q = lorentz(v, v) / (v[0] * v[0]);
  if (q < -kIdealTol) return std::nullopt;
  const Klein k = klein_of(v);
  if (q <= kIdealTol) {
    const double den = 1.0 - k.y;
    return ideal_vertex(den <= 1e-15 ? kInf : k.x / den);
  }
  PolygonVertex out;
  out.kind = VertexKind::Finite;
  const double s = 1.0 / std::sqrt(lorentz(v, v));
  out.point = detail::from_hyperboloid({v[0] * s, v[1] * s, v[2] * s});
  out.angle = std::acos(std::clamp(lorentz(n1, n2), -1.0, 1.0));
  return out;
}

bool same_vertex(const PolygonVertex& a, const PolygonVertex& b, double tol) {
  if (a.kind != b.kind) return false;
  if (a.kind == VertexKind::Ideal) {
    return dist2(klein_of_boundary(a.ideal), klein_of_boundary(b.ideal)) <= tol * tol;
  }
  return distance(*a.point, *b.point) <= tol;
}

// Drops degenerate sides: zero-length sides between coincident vertices and
// repeated free arcs.
void merge_degenerate(HyperbolicPolygon& p) {
  bool changed = true;
  while (changed && p.sides.size() > 2) {
    changed = false;
    const std::size_t n = p.sides.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t prev = (k + n - 1) % n;
      const PolygonVertex& before = p.vertices[prev];
      const PolygonVertex& after = p.vertices[k];
      const bool both_free = p.sides[k].kind == SideKind::Free && p.sides[(k + 1) % n].kind == SideKind::Free;
      if (!same_vertex(before, after, kMergeTol) && !both_free) continue;
      if (both_free) {
        // side k and k+1 are both free arcs: keep k+1, drop k, joined at before
        p.sides.erase(p.sides.begin() + static_cast<long>(k));
        p.vertices.erase(p.vertices.begin() + static_cast<long>(k));
      } else {
        // side k has zero length; join sides prev and k+1 at a fresh vertex
        p.sides.erase(p.sides.begin() + static_cast<long>(k));
        p.vertices.erase(p.vertices.begin() + static_cast<long>(k));
        const std::size_t m = p.sides.size();
        const std::size_t left = (k + m - 1) % m;
        const std::size_t right = k % m;
        PolygonVertex& joined = p.vertices[left];
        if (p.sides[left].kind != SideKind::Free && p.sides[right].kind != SideKind::Free) {
          if (auto v = meet(p.sides[left].normal, p.sides[right].normal)) {
            joined = *v;
          }
        }
      }
      changed = true;
      break;
    }
  }
}

}  // namespace

bool HyperbolicPolygon::bounded() const {
  if (is_empty) return true;
  if (sides.empty()) return false;
  return std::none_of(sides.begin(), sides.end(), [](const GeodesicSide& s) { return s.kind == SideKind::Free; });
}

HalfPlane bisector(const HPoint& o, const Isometry& g, const Word& word) {
  const Vec3 x = to_hyperboloid(o);
  const Vec3 y = act(g, x);
  HalfPlane h;
  h.normal = {y[0] - x[0], y[1] - x[1], y[2] - x[2]};
  h.kind = SideKind::Bisector;
  h.pairing = g;
  h.word = word;
  return h;
}

HyperbolicPolygon intersect_half_planes(const std::vector<HalfPlane>& planes, const HPoint& base) {
  HyperbolicPolygon out;
  out.base = base;

  std::vector<Vec3> normals;
  normals.reserve(planes.size());
  std::vector<ClipVertex> poly{{{-kSquare, -kSquare}, -1},
                               {{kSquare, -kSquare}, -2},
                               {{kSquare, kSquare}, -3},
                               {{-kSquare, kSquare}, -4}};
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const Vec3 n = planes[i].normal;
    if (!(lorentz(n, n) < 0.0)) throw Error(ErrorKind::InvalidArgument, "half-plane normal is not space-like");
    normals.push_back(detail::unit_spacelike(n));
    poly = clip(poly, normals.back(), static_cast<int>(i));
    if (poly.size() < 3) {
      out.is_empty = true;
      return out;
    }
  }

  // Real edges: those on a plane that cross the open disc.
  struct Edge {
    int plane;
    Klein entry, exit;
    bool ends_inside;  // the clipped edge ends strictly inside the disc
  };
  std::vector<Edge> edges;
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (poly[k].label < 0) continue;
    const Klein p = poly[k].at, q = poly[(k + 1) % m].at;
    if (auto range = inside_disc(p, q)) {
      const auto [s0, s1] = *range;
      edges.push_back({poly[k].label,
                       {p.x + s0 * (q.x - p.x), p.y + s0 * (q.y - p.y)},
                       {p.x + s1 * (q.x - p.x), p.y + s1 * (q.y - p.y)},
                       q.x * q.x + q.y * q.y < 1.0 - 1e-12});
    }
  }
  if (edges.empty()) {
    // no side crosses the disc: the polygon holds all of it or none of it
    bool origin_inside = true;
    for (const Vec3& n : normals) origin_inside = origin_inside && n[0] >= 0.0;
    out.is_empty = !origin_inside;
    return out;
  }

  auto make_side = [&](int plane) {
    GeodesicSide s;
    s.kind = planes[plane].kind;
    s.normal = normals[plane];
    s.pairing = planes[plane].pairing;
    s.word = planes[plane].word;
    describe_side(s);
    return s;
  };
  auto nearest_end = [&](int plane, const Klein& target) {
    const auto [e1, e2] = geodesic_ends(normals[plane]);
    return dist2(klein_of_boundary(e1), target) <= dist2(klein_of_boundary(e2), target) ? e1 : e2;
  };

  const std::size_t ne = edges.size();
  for (std::size_t k = 0; k < ne; ++k) {
    const Edge& e = edges[k];
    const Edge& f = edges[(k + 1) % ne];
    out.sides.push_back(make_side(e.plane));
    // an edge ending inside the disc is followed by the next real edge,
    // possibly after degenerate edges through the same corner
    std::optional<PolygonVertex> corner;
    if (e.ends_inside && ne > 1) corner = meet(normals[e.plane], normals[f.plane]);
    if (corner) {
      out.vertices.push_back(*corner);
    } else {
      out.vertices.push_back(ideal_vertex(nearest_end(e.plane, e.exit)));
      GeodesicSide free_side;
      free_side.kind = SideKind::Free;
      out.sides.push_back(free_side);
      out.vertices.push_back(ideal_vertex(nearest_end(f.plane, f.entry)));
    }
  }
  merge_degenerate(out);
  return out;
}

bool contains(const HyperbolicPolygon& p, const HPoint& z, double tol) {
  if (p.is_empty) return false;
  const Vec3 x = to_hyperboloid(z);
  for (const GeodesicSide& s : p.sides) {
    if (s.kind == SideKind::Free) continue;
    if (lorentz(x, s.normal) < -tol) return false;
  }
  return true;
}

namespace {

bool lex_less(const Isometry& p, const Isometry& q) {
  if (p.a() != q.a()) return p.a() < q.a();
  if (p.b() != q.b()) return p.b() < q.b();
  if (p.c() != q.c()) return p.c() < q.c();
  return p.d() < q.d();
}

}  // namespace

bool contains_half_open(const HyperbolicPolygon& p, const HPoint& z, double tie_tol) {
  if (p.is_empty) return false;
  const Vec3 x = to_hyperboloid(z);
  for (const GeodesicSide& s : p.sides) {
    if (s.kind == SideKind::Free) continue;
    const double v = lorentz(x, s.normal);
    if (v < -tie_tol) return false;
    if (v <= tie_tol && s.pairing && !lex_less(*s.pairing, s.pairing->inverse())) return false;
  }
  return true;
}

double outside_distance(const HyperbolicPolygon& p, const HPoint& z) {
  if (p.is_empty) return kInf;
  const Vec3 x = to_hyperboloid(z);
  double worst = -kInf;
  for (const GeodesicSide& s : p.sides) {
    if (s.kind == SideKind::Free) continue;
    worst = std::max(worst, std::asinh(-lorentz(x, s.normal)));
  }
  return worst;
}

double polygon_area(const HyperbolicPolygon& p) {
  if (p.is_empty) return 0.0;
  if (!p.bounded()) return kInf;
  double angles = 0.0;
  for (const PolygonVertex& v : p.vertices) angles += v.angle;
  return (static_cast<double>(p.sides.size()) - 2.0) * kPi - angles;
}

namespace {

std::vector<HalfPlane> planes_of(const HyperbolicPolygon& p) {
  std::vector<HalfPlane> out;
  for (const GeodesicSide& s : p.sides) {
    if (s.kind == SideKind::Free) continue;
    out.push_back({s.normal, s.kind, s.pairing, s.word});
  }
  return out;
}

struct Element {
  Isometry g;
  Word word;
  double displacement;
};

// Limit points visible from a finite list of elements, as boundary points.
std::vector<BoundaryPoint> limit_points(const std::vector<Element>& elements) {
  std::vector<BoundaryPoint> out;
  for (const Element& e : elements) {
    const IsometryClass cls = classify(e.g, 1e-8);
    if (cls.tag == IsometryTag::Hyperbolic) {
      out.push_back(cls.axis->first);
      out.push_back(cls.axis->second);
    } else if (cls.tag == IsometryTag::Parabolic) {
      out.push_back(*cls.fixed_point);
    }
  }
  return out;
}

bool in_open_interval(BoundaryPoint x, BoundaryPoint lo, BoundaryPoint hi) {
  // interval (lo, hi) on the real line, lo < hi finite
  const double margin = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
  return std::isfinite(x) && x > lo + margin && x < hi - margin;
}

HyperbolicPolygon truncate_with(const FuchsianGroup& g, const HyperbolicPolygon& p,
                                const std::vector<Element>& elements) {
  if (g.is_lattice() || p.is_empty) return p;
  if (!g.signature) {
    HyperbolicPolygon empty;
    empty.base = p.base;
    empty.is_empty = true;
    return empty;
  }
  const std::vector<BoundaryPoint> limits = limit_points(elements);
  std::vector<HalfPlane> planes = planes_of(p);
  IsometrySet axes_seen(1e-9);
  for (const Word& bw : g.boundary_words) {
    const Isometry b = evaluate(g, bw);
    for (const Element& e : elements) {
      const Isometry c = e.g * b * e.g.inverse();
      // an axis and its reverse give the same cut
      if (axes_seen.find(c.inverse())) continue;
      if (!axes_seen.insert(c).second) continue;
      const IsometryClass cls = classify(c, 1e-8);
      if (cls.tag != IsometryTag::Hyperbolic) continue;
      BoundaryPoint p1 = cls.axis->first, p2 = cls.axis->second;
      // orient so that the finite interval is (lo, hi); inf is in the complement
      const bool has_inf = std::isinf(p1) || std::isinf(p2);
      const BoundaryPoint lo = has_inf ? (std::isinf(p1) ? p2 : p1) : std::min(p1, p2);
      const BoundaryPoint hi = has_inf ? kInf : std::max(p1, p2);
      int inside = 0, outside = 0;
      std::optional<BoundaryPoint> in_pt, out_pt;
      const double margin = 1e-9 * (1.0 + std::abs(lo) + (std::isfinite(hi) ? std::abs(hi) : 0.0));
      for (BoundaryPoint x : limits) {
        if (std::isfinite(x) && std::abs(x - lo) <= margin) continue;
        if (std::isfinite(hi) && std::isfinite(x) && std::abs(x - hi) <= margin) continue;
        if (std::isinf(x) && std::isinf(hi)) continue;
        const bool in = std::isfinite(hi) ? in_open_interval(x, lo, hi) : (std::isfinite(x) && x > lo + margin);
        if (in) {
          ++inside;
          in_pt = x;
        } else {
          ++outside;
          out_pt = x;
        }
      }
      if ((inside == 0) == (outside == 0)) continue;  // undecided
      const BoundaryPoint keep = inside > 0 ? *in_pt : *out_pt;
      Vec3 n = lorentz_cross(ideal_vector(p1), ideal_vector(p2));
      if (lorentz(ideal_vector(keep), n) < 0.0) n = {-n[0], -n[1], -n[2]};
      planes.push_back({n, SideKind::Axis, std::nullopt, e.word});
    }
  }
  HyperbolicPolygon out = intersect_half_planes(planes, p.base);
  out.radius_used = p.radius_used;
  return out;
}

std::vector<Element> ball_elements(const FuchsianGroup& g, const HPoint& o, double radius,
                                   const BallOptions& options) {
  const BallEnumeration ball = enumerate_ball(g, o, radius, options);
  std::vector<Element> out;
  for (const BallElement& e : ball.elements) out.push_back({e.element, e.word, e.displacement});
  return out;
}

HyperbolicPolygon build_domain(const FuchsianGroup& g, const HPoint& o, double radius,
                               const DomainOptions& options) {
  // Refinement repairs any bisector the ball misses, so a small slack suffices.
  BallOptions ball_options = options.ball;
  if (ball_options.slack < 0.0) ball_options.slack = 1.0;
  std::vector<Element> elements = ball_elements(g, o, radius, ball_options);
  for (std::size_t k = 0; k < g.generators.size(); ++k) {
    const int letter = static_cast<int>(k) + 1;
    for (const int w : {letter, -letter}) {
      const Isometry s = evaluate(g, {w});
      elements.push_back({s, {w}, distance(o, apply(s, o))});
    }
  }
  IsometrySet known(1e-9);
  {
    std::vector<Element> unique;
    for (const Element& e : elements) {
      if (known.insert(e.g).second) unique.push_back(e);
    }
    elements = std::move(unique);
  }

  auto planes_for = [&] {
    std::vector<Element> sorted = elements;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Element& p, const Element& q) { return p.displacement < q.displacement; });
    std::vector<HalfPlane> planes;
    for (const Element& e : sorted) {
      if (e.word.empty() && e.g.approx_equal(Isometry{}, 1e-12)) continue;
      planes.push_back(bisector(o, e.g, e.word));
    }
    return planes;
  };

  HyperbolicPolygon poly = intersect_half_planes(planes_for(), o);
  poly.radius_used = radius;
  if (!g.signature) return poly;

  const double target = g.core_area();
  auto free_sides = [](const HyperbolicPolygon& p) {
    return std::count_if(p.sides.begin(), p.sides.end(), [](const GeodesicSide& s) { return s.kind == SideKind::Free; });
  };
  std::ptrdiff_t last_free = free_sides(poly);
  for (int round = 0; round < options.max_rounds; ++round) {
    const double area = g.is_lattice() ? polygon_area(poly) : polygon_area(truncate_with(g, poly, elements));
    if (std::isfinite(area) && std::abs(area - target) <= options.area_tol * target) return poly;

    // add products of side pairings not yet known
    std::vector<Element> pairings;
    for (const GeodesicSide& s : poly.sides) {
      if (s.kind != SideKind::Bisector || !s.pairing) continue;
      pairings.push_back({*s.pairing, s.word, 0.0});
    }
    std::size_t added = 0;
    for (const Element& a : pairings) {
      for (const Element& b : pairings) {
        const Isometry ab = a.g * b.g;
        if (!known.insert(ab).second) continue;
        Word w = a.word;
        w.insert(w.end(), b.word.begin(), b.word.end());
        elements.push_back({ab, reduce_word(w), distance(o, apply(ab, o))});
        ++added;
      }
    }
    // Products of parabolic pairings crowd a cusp without closing a free arc
    // that needs a farther element, so a stalled free-side count grows the ball.
    const std::ptrdiff_t now_free = free_sides(poly);
    const bool stalled = g.is_lattice() && now_free > 0 && round > 0 && now_free >= last_free;
    last_free = now_free;
    if (added == 0 || stalled) {
      radius *= 1.5;
      for (const Element& e : ball_elements(g, o, radius, ball_options)) {
        if (known.insert(e.g).second) elements.push_back(e);
      }
    }
    poly = intersect_half_planes(planes_for(), o);
    poly.radius_used = radius;
  }
  if (g.is_lattice() && !poly.bounded()) {
    throw Error(ErrorKind::UnboundedDomain, "lattice domain keeps free sides after refinement");
  }
  throw Error(ErrorKind::DomainNotStabilized, "area certificate not reached after refinement");
}

}  // namespace

HyperbolicPolygon dirichlet_domain(const FuchsianGroup& g, const HPoint& o, const DomainOptions& options) {
  if (g.generators.empty()) {
    HyperbolicPolygon whole;
    whole.base = o;
    return whole;
  }
  double radius = options.radius;
  if (!(radius > 0.0)) {
    // Far generators enter as explicit bisectors; a ball sized by the nearest
    // one stays small when the generating set is badly conjugated.
    double min_gen = kInf;
    for (const Isometry& s : g.generators) min_gen = std::min(min_gen, distance(o, apply(s, o)));
    radius = std::clamp(1.5 * min_gen, 1.0, 4.0);
  }
  if (g.signature) {
    // surface groups are torsion-free; a short elliptic word means the
    // generators do not present a discrete group, and the full ball would be dense
    for (const Word& w : g.peripheral_words) {
      if (std::abs(std::abs(evaluate(g, w).trace()) - 2.0) > 1e-6) {
        throw Error(ErrorKind::DiscretenessCheckFailed, "peripheral word " + word_to_string(g, w) + " is not parabolic");
      }
    }
    BallOptions probe = options.ball;
    probe.max_elements = 20000;
    probe.slack = 0.0;
    try {
      for (const BallElement& e : enumerate_ball(g, o, radius, probe).elements) {
        if (!e.word.empty() && std::abs(e.element.trace()) < 2.0 - 1e-6) {
          throw Error(ErrorKind::DiscretenessCheckFailed, "elliptic element " + word_to_string(g, e.word));
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FrontierOverflow) throw;
    }
  }
  HyperbolicPolygon poly = build_domain(g, o, radius, options);
  if (options.stabilization_check && g.signature) {
    // bisectors of products of two side pairings must not cut the polygon
    std::vector<Vec3> corners;
    for (const PolygonVertex& v : poly.vertices) {
      Vec3 x = v.kind == VertexKind::Ideal ? ideal_vector(v.ideal) : to_hyperboloid(*v.point);
      const double scale = 1.0 / x[0];
      corners.push_back({x[0] * scale, x[1] * scale, x[2] * scale});
    }
    std::vector<Isometry> pairings;
    for (const GeodesicSide& s : poly.sides) {
      if (s.kind == SideKind::Bisector && s.pairing) pairings.push_back(*s.pairing);
    }
    for (const Isometry& a : pairings) {
      for (const Isometry& b : pairings) {
        const Isometry ab = a * b;
        // ab fixing o is the identity up to rounding, which grows with |a| |b|
        const double scale = std::sqrt(2.0 * std::cosh(distance(o, apply(a, o))) * 2.0 * std::cosh(distance(o, apply(b, o))));
        if (distance(o, apply(ab, o)) < 1e-9 * scale) continue;
        const Vec3 n = detail::unit_spacelike(bisector(o, ab).normal);
        for (const Vec3& c : corners) {
          if (lorentz(c, n) < -1e-7) {  // rounding of far vertices, in line with the area tolerance
            throw Error(ErrorKind::DomainNotStabilized, "a product of side pairings still cuts the polygon");
          }
        }
      }
    }
  }
  return poly;
}

HyperbolicPolygon truncate_domain(const FuchsianGroup& g, const HyperbolicPolygon& p) {
  if (g.is_lattice() || p.is_empty) return p;
  if (!g.signature) return truncate_with(g, p, {});
  double radius = p.radius_used;
  if (!(radius > 0.0)) {
    for (const Isometry& s : g.generators) radius = std::max(radius, distance(p.base, apply(s, p.base)));
    radius *= 1.5;
  }
  BallOptions options;
  options.slack = 1.0;
  // axes far from the base can still cut the polygon; widen the ball a few times
  for (int attempt = 0; attempt < 5; ++attempt, radius *= 1.5) {
    const HyperbolicPolygon out = truncate_with(g, p, ball_elements(g, p.base, radius, options));
    if (out.bounded()) return out;
  }
  throw Error(ErrorKind::TruncationIncomplete, "truncated domain has free sides");
}

double certify_group(const FuchsianGroup& g, const HPoint& o, double tol) {
  double area = 0.0;
  try {
    const HyperbolicPolygon d = dirichlet_domain(g, o);
    area = polygon_area(truncate_domain(g, d));
  } catch (const Error& e) {
    throw Error(ErrorKind::DiscretenessCheckFailed, e.what());
  }
  const double target = g.core_area();
  if (!(std::abs(area - target) <= tol * std::max(1.0, target))) {
    throw Error(ErrorKind::DiscretenessCheckFailed,
                "area " + std::to_string(area) + " differs from " + std::to_string(target));
  }
  return area;
}

double thick_part_diameter_bound(const FuchsianGroup& g, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  double collar = 0.0;
  for (const Word& w : g.boundary_words) collar += translation_length(evaluate(g, w)) * std::sinh(eps);
  return 4.0 * eps / ball_area(eps) * (g.core_area() + collar);
}

// ---------------------------------------------------------------------------

TileWalker::TileWalker(HyperbolicPolygon domain) : domain_(std::move(domain)) {
  if (domain_.is_empty) throw Error(ErrorKind::InvalidArgument, "empty domain");
  for (std::size_t k = 0; k < domain_.sides.size(); ++k) {
    if (domain_.sides[k].kind == SideKind::Bisector && domain_.sides[k].pairing) pairing_sides_.push_back(k);
  }
  // distinct orbit points of the centre are at least the shortest pairing displacement apart
  double nearest = kInf;
  for (std::size_t k : pairing_sides_) {
    nearest = std::min(nearest, distance(domain_.base, apply(*domain_.sides[k].pairing, domain_.base)));
  }
  orbit_tol_ = std::isfinite(nearest) ? std::min(1e-3, 0.25 * nearest) : 1e-3;
}

Isometry TileWalker::locate(const HPoint& z) const {
  Isometry h;
  Vec3 w = to_hyperboloid(z);
  for (int step = 0; step < 100000; ++step) {
    // each move strictly decreases d(w, o); the threshold only absorbs rounding, which scales with w
    double worst = -1e-12 * w[0];
    std::optional<std::size_t> pick;
    for (std::size_t k : pairing_sides_) {
      const double v = lorentz(w, domain_.sides[k].normal);
      if (v < worst) {
        worst = v;
        pick = k;
      }
    }
    if (!pick) return h;
    const Isometry& g = *domain_.sides[*pick].pairing;
    w = act(g.inverse(), w);
    // keep w on the hyperboloid
    const double s = 1.0 / std::sqrt(lorentz(w, w));
    w = {w[0] * s, w[1] * s, w[2] * s};
    h = h * g;
  }
  throw Error(ErrorKind::InvalidArgument, "point location did not terminate");
}

std::vector<Isometry> TileWalker::local_ball(const Vec3& w, double radius, bool first_only) const {
  const double cosh_r = std::cosh(radius) * (1.0 + 1e-12);
  const double sinh_r = std::sinh(radius) * (1.0 + 1e-12) + 1e-12;

  // Tiles are keyed by the orbit point g o. Matrices reached along different
  // paths drift apart by rounding that grows with the pairing lengths, so a
  // matrix tolerance would let duplicates through and the walk would not end.
  const HPoint& o = domain_.base;
  std::vector<HPoint> orbit;
  std::unordered_multimap<long long, std::size_t> slabs;  // by log y; |d log y| <= distance
  const double slab = 0.05;
  auto seen = [&](const HPoint& p) {
    const long long key = static_cast<long long>(std::floor(std::log(p.y()) / slab));
    for (long long k = key - 1; k <= key + 1; ++k) {
      auto [lo, hi] = slabs.equal_range(k);
      for (auto it = lo; it != hi; ++it) {
        if (distance(orbit[it->second], p) <= orbit_tol_) return true;
      }
    }
    orbit.push_back(p);
    slabs.emplace(key, orbit.size() - 1);
    return false;
  };

  std::vector<Isometry> found;
  std::vector<Isometry> queue{Isometry{}};
  seen(o);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Isometry g = queue[head];
    const Vec3 gw = act(g, w);
    if (lorentz(w, gw) <= cosh_r) {
      found.push_back(g);
      if (first_only && head > 0) return found;
    }
    // lower bound for d(w, g D): largest side violation of g^{-1} w
    const Vec3 pulled = act(g.inverse(), w);
    double violation = 0.0;
    for (std::size_t k : pairing_sides_) violation = std::max(violation, -lorentz(pulled, domain_.sides[k].normal));
    if (violation > sinh_r) continue;
    for (std::size_t k : pairing_sides_) {
      const Isometry next = g * *domain_.sides[k].pairing;
      if (!seen(apply(next, o))) queue.push_back(next);
    }
    if (queue.size() > 2'000'000) throw Error(ErrorKind::FrontierOverflow, "tile walk exceeded 2e6 tiles");
  }
  return found;
}

std::vector<Isometry> TileWalker::ball_at(const HPoint& z, double radius) const {
  const Isometry h0 = locate(z);
  const Isometry h0_inv = h0.inverse();
  std::vector<Isometry> out;
  for (const Isometry& g : local_ball(act(h0_inv, to_hyperboloid(z)), radius)) out.push_back(h0 * g * h0_inv);
  return out;
}

std::vector<Isometry> TileWalker::conjugated_ball(const Isometry& c, const HPoint& base, double radius) const {
  const Isometry h0 = locate(apply(c, base));
  // u = h0^{-1} c stays short even when h0 and c are long
  const Isometry u = h0.inverse() * c;
  const Isometry u_inv = u.inverse();
  std::vector<Isometry> out;
  for (const Isometry& g : local_ball(to_hyperboloid(apply(u, base)), radius)) out.push_back(u_inv * g * u);
  return out;
}

bool TileWalker::moves_within(const HPoint& z, double radius) const {
  const Isometry h0 = locate(z);
  return local_ball(act(h0.inverse(), to_hyperboloid(z)), radius, true).size() > 1;
}

double TileWalker::systole_at(const HPoint& z, double cap) const {
  double best = kInf;
  for (const Isometry& g : ball_at(z, cap)) {
    if (g.approx_equal(Isometry{}, 1e-9)) continue;
    best = std::min(best, distance(z, apply(g, z)));
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

Vec3 vertex_vector(const PolygonVertex& v) {
  if (v.kind == VertexKind::Ideal) return ideal_vector(v.ideal);
  return to_hyperboloid(*v.point);
}

// Points along the geodesic segment between two vertices.
std::vector<std::pair<double, double>> sample_segment(const PolygonVertex& a, const PolygonVertex& b,
                                                      double y_cap) {
  Vec3 p = vertex_vector(a), q = vertex_vector(b);
  // normalise ideal vectors so both ends have comparable weight
  const double sp = 1.0 / p[0], sq = 1.0 / q[0];
  std::vector<std::pair<double, double>> out;
  const int n = 64;
  for (int k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    const Vec3 x{(1 - s) * p[0] * sp + s * q[0] * sq, (1 - s) * p[1] * sp + s * q[1] * sq,
                 (1 - s) * p[2] * sp + s * q[2] * sq};
    const double den = x[0] - x[2];
    const double l = lorentz(x, x);
    if (l <= 1e-300 || den <= 1e-300) {
      // ideal end: on the real axis, or at infinity
      const BoundaryPoint bp = den <= 1e-15 * x[0] ? kInf : x[1] / den;
      if (std::isinf(bp)) {
        out.emplace_back(out.empty() ? 0.0 : out.back().first, y_cap);
      } else {
        out.emplace_back(bp, 0.0);
      }
      continue;
    }
    const double scale = 1.0 / std::sqrt(l);
    const double y = 1.0 / ((x[0] - x[2]) * scale);
    out.emplace_back(x[1] * scale * y, std::min(y, y_cap));
  }
  return out;
}

}  // namespace

std::string to_svg(const HyperbolicPolygon& p, const SvgOptions& o) {
  const double height = o.width * (o.y_max - o.y_min) / (o.x_max - o.x_min);
  auto sx = [&](double x) { return (x - o.x_min) / (o.x_max - o.x_min) * o.width; };
  auto sy = [&](double y) { return height - (y - o.y_min) / (o.y_max - o.y_min) * height; };
  std::ostringstream out;
  out << std::setprecision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << height << "\">\n";
  out << "  <line x1=\"0\" y1=\"" << sy(0.0) << "\" x2=\"" << o.width << "\" y2=\"" << sy(0.0)
      << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  const std::size_t n = p.sides.size();
  for (std::size_t k = 0; k < n; ++k) {
    const PolygonVertex& a = p.vertices[(k + n - 1) % n];
    const PolygonVertex& b = p.vertices[k];
    const bool free_side = p.sides[k].kind == SideKind::Free;
    out << "  <polyline fill=\"none\" stroke=\"" << (free_side ? "#c33" : "#036") << "\" stroke-width=\""
        << o.stroke_width << "\"" << (free_side ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
    if (free_side) {
      const double xa = std::isinf(a.ideal) ? o.x_max : a.ideal;
      const double xb = std::isinf(b.ideal) ? o.x_min : b.ideal;
      out << sx(xa) << ',' << sy(0.0) << ' ' << sx(xb) << ',' << sy(0.0);
    } else {
      for (const auto& [x, y] : sample_segment(a, b, o.y_max)) out << sx(x) << ',' << sy(y) << ' ';
    }
    out << "\"/>\n";
  }
  out << "  <circle cx=\"" << sx(p.base.x()) << "\" cy=\"" << sy(p.base.y()) << "\" r=\"3\" fill=\"#000\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string to_text(const HyperbolicPolygon& p) {
  std::ostringstream out;
  out << std::setprecision(18);
  out << "polygon base " << p.base.x() << ' ' << p.base.y() << " sides " << p.sides.size() << " area "
      << polygon_area(p) << (p.is_empty ? " empty" : "") << '\n';
  for (std::size_t k = 0; k < p.sides.size(); ++k) {
    const GeodesicSide& s = p.sides[k];
    out << "side " << k << ' ';
    if (s.kind == SideKind::Free) {
      out << "free\n";
      continue;
    }
    out << (s.kind == SideKind::Bisector ? "bisector" : "axis") << ' ';
    if (s.vertical) {
      out << "line x " << s.center << (s.keep_inside ? " keep right" : " keep left");
    } else {
      out << "circle center " << s.center << " radius " << s.radius << (s.keep_inside ? " keep inside" : " keep outside");
    }
    out << " normal " << s.normal[0] << ' ' << s.normal[1] << ' ' << s.normal[2] << '\n';
  }
  for (std::size_t k = 0; k < p.vertices.size(); ++k) {
    const PolygonVertex& v = p.vertices[k];
    out << "vertex " << k << ' ';
    if (v.kind == VertexKind::Ideal) {
      out << "ideal " << v.ideal << '\n';
    } else {
      out << "finite " << v.point->x() << ' ' << v.point->y() << " angle " << v.angle << '\n';
    }
  }
  return out.str();
}

}  // namespace irslab
