#include "irslab/hyperbolic.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "irslab/rng.hpp"

namespace irslab {

HPoint::HPoint(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y) || y < kMinY) {
    throw Error(ErrorKind::InvalidPoint, "y = " + std::to_string(y));
  }
}

namespace {

void canonical_sign(double& a, double& b, double& c, double& d) {
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
}

}  // namespace

Isometry::Isometry(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error(ErrorKind::InvalidArgument, "matrix with non-positive determinant");
  }
  const double s = 1.0 / std::sqrt(det);
  a_ = a * s;
  b_ = b * s;
  c_ = c * s;
  d_ = d * s;
  canonical_sign(a_, b_, c_, d_);
}

Isometry Isometry::inverse() const {
  double a = d_, b = -b_, c = -c_, d = a_;
  canonical_sign(a, b, c, d);
  return Isometry(Raw{}, a, b, c, d);
}

bool Isometry::approx_equal(const Isometry& o, double tol) const {
  auto close = [tol](double p, double q) { return std::abs(p - q) <= tol; };
  if (close(a_, o.a_) && close(b_, o.b_) && close(c_, o.c_) && close(d_, o.d_)) return true;
  return close(a_, -o.a_) && close(b_, -o.b_) && close(c_, -o.c_) && close(d_, -o.d_);
}

Isometry compose(const Isometry& f, const Isometry& g) {
  double a = f.a_ * g.a_ + f.b_ * g.c_;
  double b = f.a_ * g.b_ + f.b_ * g.d_;
  double c = f.c_ * g.a_ + f.d_ * g.c_;
  double d = f.c_ * g.b_ + f.d_ * g.d_;
  const double det = a * d - b * c;
  if (det > 0.0) {
    const double s = 1.0 / std::sqrt(det);
    a *= s;
    b *= s;
    c *= s;
    d *= s;
  }
  canonical_sign(a, b, c, d);
  return Isometry(Isometry::Raw{}, a, b, c, d);
}

Isometry conjugate(const Isometry& g, const Isometry& h) { return h.inverse() * g * h; }

double frobenius_distance(const Isometry& f, const Isometry& g) {
  auto sq = [](double v) { return v * v; };
  const double minus = sq(f.a() - g.a()) + sq(f.b() - g.b()) + sq(f.c() - g.c()) + sq(f.d() - g.d());
  const double plus = sq(f.a() + g.a()) + sq(f.b() + g.b()) + sq(f.c() + g.c()) + sq(f.d() + g.d());
  return std::sqrt(std::min(minus, plus));
}

HPoint apply(const Isometry& g, const HPoint& z) {
  // (az+b)/(cz+d) with z = x + iy
  const double den_re = g.c() * z.x() + g.d();
  const double den_im = g.c() * z.y();
  const double den2 = den_re * den_re + den_im * den_im;
  if (den2 < 1e-300) throw Error(ErrorKind::NearIdealImage, "");
  const double num_re = g.a() * z.x() + g.b();
  const double num_im = g.a() * z.y();
  const double x = (num_re * den_re + num_im * den_im) / den2;
  const double y = z.y() / den2;  // det = 1
  return HPoint(x, y);
}

BoundaryPoint apply(const Isometry& g, BoundaryPoint x) {
  if (std::isinf(x)) return g.c() == 0.0 ? kInf : g.a() / g.c();
  const double den = g.c() * x + g.d();
  if (den == 0.0) return kInf;
  return (g.a() * x + g.b()) / den;
}

double distance(const HPoint& z, const HPoint& w) {
  const double dx = z.x() - w.x();
  const double dy = z.y() - w.y();
  const double chord = std::sqrt(dx * dx + dy * dy);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(z.y() * w.y())));
}

double cosh_distance(const HPoint& z, const HPoint& w) {
  const double dx = z.x() - w.x();
  const double dy = z.y() - w.y();
  return 1.0 + (dx * dx + dy * dy) / (2.0 * z.y() * w.y());
}

double translation_length(const Isometry& g, double tol) {
  const double tr = std::abs(g.trace());
  if (tr <= 2.0 + tol) return 0.0;
  return 2.0 * std::acosh(0.5 * tr);
}

IsometryClass classify(const Isometry& g, double tol) {
  IsometryClass out;
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  if (std::abs(a - 1.0) <= tol && std::abs(d - 1.0) <= tol && std::abs(b) <= tol &&
      std::abs(c) <= tol) {
    out.tag = IsometryTag::Identity;
    return out;
  }
  const double tr = std::abs(a + d);
  if (tr > 2.0 + tol) {
    out.tag = IsometryTag::Hyperbolic;
    out.length = translation_length(g, tol);
    BoundaryPoint p, q;
    if (c == 0.0) {
      p = kInf;
      q = b / (d - a);
    } else {
      // c z^2 + (d - a) z - b = 0, stable root pair
      const double disc = std::sqrt((a + d) * (a + d) - 4.0);
      const double bb = d - a;
      const double qq = -0.5 * (bb + std::copysign(disc, bb == 0.0 ? 1.0 : bb));
      p = qq / c;
      q = qq != 0.0 ? -b / qq : (a - d) / (2.0 * c);
    }
    // attracting fixed point has |cz + d| > 1
    auto deriv_gt1 = [&](BoundaryPoint z) {
      if (std::isinf(z)) return a * a < 1.0;  // derivative at infinity is d^2 = 1/a^2 when c = 0
      return std::abs(c * z + d) < 1.0;
    };
    if (deriv_gt1(p)) {
      out.axis = std::make_pair(p, q);  // p repelling
    } else {
      out.axis = std::make_pair(q, p);
    }
    return out;
  }
  if (tr >= 2.0 - tol) {
    out.tag = IsometryTag::Parabolic;
    out.fixed_point = (std::abs(c) <= 1e-15 * (std::abs(a) + std::abs(b) + std::abs(d)))
                          ? kInf
                          : (a - d) / (2.0 * c);
    return out;
  }
  out.tag = IsometryTag::Elliptic;
  return out;
}

Isometry translation(double dx) { return Isometry(1.0, dx, 0.0, 1.0); }

Isometry dilation(double factor) {
  const double s = std::sqrt(factor);
  return Isometry(s, 0.0, 0.0, 1.0 / s);
}

Isometry rotation_about_i(double angle) {
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  return Isometry(c, s, -s, c);
}

Isometry move_i_to(const HPoint& z) {
  const double s = std::sqrt(z.y());
  return Isometry(s, z.x() / s, 0.0, 1.0 / s);
}

Isometry rotation_about(const HPoint& z, double angle) {
  const Isometry m = move_i_to(z);
  return m * rotation_about_i(angle) * m.inverse();
}

Isometry standardize_pair(BoundaryPoint p, BoundaryPoint q) {
  if (std::isinf(p) && std::isinf(q)) throw Error(ErrorKind::InvalidArgument, "coincident points");
  if (std::isinf(q)) return Isometry(1.0, -p, 0.0, 1.0);
  if (std::isinf(p)) return Isometry(0.0, -1.0, 1.0, -q);
  if (p == q) throw Error(ErrorKind::InvalidArgument, "coincident points");
  // z -> (z - p)/(z - q), with the overall sign fixed so det > 0
  if (p - q > 0.0) return Isometry(1.0, -p, 1.0, -q);
  return Isometry(-1.0, p, 1.0, -q);
}

Isometry translation_along(BoundaryPoint from, BoundaryPoint to, double dist) {
  const Isometry m = standardize_pair(from, to);
  return m.inverse() * dilation(std::exp(dist)) * m;
}

Isometry hyperbolic_power(const Isometry& g, double dist) {
  const IsometryClass cls = classify(g);
  if (cls.tag != IsometryTag::Hyperbolic) {
    throw Error(ErrorKind::InvalidArgument, "hyperbolic_power needs a hyperbolic element");
  }
  return translation_along(cls.axis->first, cls.axis->second, dist);
}

double box_area(const Box& box) {
  const double u_lo = std::isinf(box.y_max) ? 0.0 : 1.0 / box.y_max;
  return (box.x_max - box.x_min) * (1.0 / box.y_min - u_lo);
}

namespace {

struct UvCell {
  double x0, x1, u0, u1;
};

class AdaptiveQuadrature {
 public:
  AdaptiveQuadrature(const RegionPredicate& f, int max_depth) : f_(f), max_depth_(max_depth) {}

  // A cell is uniform when its corners and centre agree; mixed cells are
  // split. Leaves at the depth limit use the 2x2 midpoint rule.
  double integrate(const UvCell& cell, int depth) const {
    const double hx = cell.x1 - cell.x0, hu = cell.u1 - cell.u0;
    const int votes = eval(cell.x0, cell.u0) + eval(cell.x1, cell.u0) + eval(cell.x0, cell.u1) +
                      eval(cell.x1, cell.u1) + eval(cell.x0 + 0.5 * hx, cell.u0 + 0.5 * hu);
    const double area = hx * hu;
    if (votes == 0) return 0.0;
    if (votes == 5) return area;
    if (depth >= max_depth_) {
      int quarters = 0;
      for (double px : {0.25, 0.75}) {
        for (double pu : {0.25, 0.75}) quarters += eval(cell.x0 + px * hx, cell.u0 + pu * hu);
      }
      return area * quarters / 4.0;
    }
    const double xm = cell.x0 + 0.5 * hx, um = cell.u0 + 0.5 * hu;
    return integrate({cell.x0, xm, cell.u0, um}, depth + 1) +
           integrate({xm, cell.x1, cell.u0, um}, depth + 1) +
           integrate({cell.x0, xm, um, cell.u1}, depth + 1) +
           integrate({xm, cell.x1, um, cell.u1}, depth + 1);
  }

  int eval(double x, double u) const {
    return f_(HPoint(x, 1.0 / std::max(u, 1e-300))) ? 1 : 0;
  }

 private:
  const RegionPredicate& f_;
  int max_depth_;
};

}  // namespace

AreaEstimate area_region(const RegionPredicate& indicator, const Box& box,
                         const AreaOptions& options) {
  if (!(box.y_min > 0.0) || !(box.x_max > box.x_min) || !(box.y_max > box.y_min)) {
    throw Error(ErrorKind::InvalidArgument, "degenerate box");
  }
  const double u_lo = std::isinf(box.y_max) ? 0.0 : 1.0 / box.y_max;
  const double u_hi = 1.0 / box.y_min;

  // Box-boundary probes: the region must sit inside the box.
  {
    const int n = std::max(1, options.boundary_probes);
    int hits = 0, total = 0;
    auto probe = [&](double x, double u) {
      if (u <= 0.0) return;
      ++total;
      if (indicator(HPoint(x, 1.0 / u))) ++hits;
    };
    for (int k = 0; k < n; ++k) {
      const double t = (k + 0.5) / n;
      const double x = box.x_min + t * (box.x_max - box.x_min);
      const double u = u_lo + t * (u_hi - u_lo);
      probe(x, u_hi);
      if (u_lo > 0.0) probe(x, u_lo);
      probe(box.x_min, u);
      probe(box.x_max, u);
    }
    if (total > 0 && static_cast<double>(hits) / total > options.max_boundary_fraction) {
      throw Error(ErrorKind::UnboundedRegion,
                  std::to_string(hits) + " of " + std::to_string(total) + " boundary probes inside");
    }
  }

  AreaEstimate out;
  if (options.method == AreaMethod::MonteCarlo) {
    CounterRng rng(options.seed);
    std::size_t inside = 0;
    const std::size_t n = std::max<std::size_t>(1, options.samples);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = box.x_min + rng.uniform() * (box.x_max - box.x_min);
      double u = u_lo + rng.uniform() * (u_hi - u_lo);
      if (u <= 0.0) u = std::numeric_limits<double>::min();
      if (indicator(HPoint(x, 1.0 / u))) ++inside;
    }
    const double area = (box.x_max - box.x_min) * (u_hi - u_lo);
    const double p = static_cast<double>(inside) / n;
    out.value = area * p;
    out.std_error = area * std::sqrt(p * (1.0 - p) / n);
    return out;
  }

  const int res = std::max(1, options.resolution);
  AdaptiveQuadrature quad(indicator, options.refine_depth);
  const double width = box.x_max - box.x_min, hu = (u_hi - u_lo) / res;
  double total = 0.0;
  for (int j = 0; j < res; ++j) {
    // A cell of size hx by hu at depth u spans hx * u by hu / u hyperbolically;
    // low rows get more columns so that thin features are not skipped.
    const double u_top = u_lo + (j + 1) * hu;
    const double wanted = std::ceil(width * u_top * u_top / hu);
    const int cols = static_cast<int>(std::clamp(wanted, static_cast<double>(res), 256.0 * res));
    const double hx = width / cols;
    for (int i = 0; i < cols; ++i) {
      const UvCell cell{box.x_min + i * hx, box.x_min + (i + 1) * hx, u_lo + j * hu, u_top};
      total += quad.integrate(cell, 0);
    }
  }
  out.value = total;
  return out;
}

double ball_area(double r) {
  if (r < 0.0) throw Error(ErrorKind::InvalidArgument, "negative radius");
  return 2.0 * kPi * (std::cosh(r) - 1.0);
}

}  // namespace irslab
