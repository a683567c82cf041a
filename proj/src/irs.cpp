#include "irslab/irs.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "irslab/detail/lorentz.hpp"

namespace irslab {

using detail::lorentz;
using detail::Vec3;

// ---------------------------------------------------------------------------
// Thin parts.

double cusp_strip_area(double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  return 2.0 * std::sinh(delta / 2.0);
}

namespace {

double funnel_angle(double len, double delta) {
  if (!(len > 0.0) || !(delta > len)) throw Error(ErrorKind::InvalidArgument, "funnel needs delta > len > 0");
  return std::asin(std::sinh(len / 2.0) / std::sinh(delta / 2.0));
}

}  // namespace

double funnel_sector_area(double len, double delta) { return len / std::tan(funnel_angle(len, delta)); }

ThinAreaCheck check_cusp_strip(double delta, const AreaOptions& options) {
  ThinAreaCheck out;
  out.delta = delta;
  out.closed_form = cusp_strip_area(delta);
  out.cusp_bound = out.closed_form;
  // d(z, z + 1) <= delta iff y >= 1 / (2 sinh(delta/2))
  const double y_delta = 1.0 / out.closed_form;
  const double y_cap = 1e4 * y_delta;
  AreaOptions o = options;
  // the cap edge is a deliberate cut, compensated below
  o.max_boundary_fraction = std::max(o.max_boundary_fraction, 0.3);
  const Box box{-0.25, 1.25, 0.9 * y_delta, y_cap};
  const AreaEstimate a = area_region(
      [&](const HPoint& z) {
        return z.x() >= 0.0 && z.x() <= 1.0 && 2.0 * std::asinh(0.5 / z.y()) <= delta;
      },
      box, o);
  out.quadrature = a.value + 1.0 / y_cap;
  out.relative_error = std::abs(out.quadrature - out.closed_form) / out.closed_form;
  return out;
}

ThinAreaCheck check_funnel_sector(double len, double delta, const AreaOptions& options) {
  ThinAreaCheck out;
  out.delta = delta;
  out.len = len;
  out.closed_form = funnel_sector_area(len, delta);
  out.cusp_bound = cusp_strip_area(delta);
  // Polar chart z = e^s (cos t, sin t), s in [0, len], t in (0, pi/2], where the
  // area element is ds dt / sin^2 t. The wedge reaches far down towards the real
  // axis for short curves, which defeats a box grid in (x, 1/y).
  const double top = std::exp(len);
  auto inside = [&](double s, double t) {
    const HPoint z(std::exp(s) * std::cos(t), std::exp(s) * std::sin(t));
    return distance(z, HPoint(top * z.x(), top * z.y())) <= delta;
  };
  const int rows = std::max(4, options.resolution / 2);
  const int probes = std::max(16, options.boundary_probes);
  const int panels = 4096;  // Simpson in log t
  double total = 0.0;
  for (int row = 0; row < rows; ++row) {
    const double s = len * (row + 0.5) / rows;
    // the slice must be one interval [t*, pi/2]
    const double t_min = 1e-9;
    bool was_inside = false;
    for (int k = 0; k <= probes; ++k) {
      const double t = t_min * std::pow(kPi / 2.0 / t_min, static_cast<double>(k) / probes);
      const bool now = inside(s, t);
      if (was_inside && !now) throw Error(ErrorKind::InvalidArgument, "funnel slice is not an interval");
      was_inside = now;
    }
    if (!was_inside) continue;
    double lo = t_min, hi = kPi / 2.0;
    if (inside(s, lo)) {
      hi = lo;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(s, mid) ? hi : lo) = mid;
      }
    }
    const double a = std::log(hi), b = std::log(kPi / 2.0);
    const double h = (b - a) / panels;
    auto f = [](double u) {
      const double t = std::exp(u);
      return t / (std::sin(t) * std::sin(t));  // dt = t du
    };
    double simpson = f(a) + f(b);
    for (int k = 1; k < panels; ++k) simpson += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    total += simpson * h / 3.0;
  }
  out.quadrature = total * len / rows;
  out.relative_error = std::abs(out.quadrature - out.closed_form) / out.closed_form;
  return out;
}

double thin_area(const FuchsianGroup& g, double delta) {
  double out = static_cast<double>(g.peripheral_words.size()) * cusp_strip_area(delta);
  for (const NamedWord& c : g.curve_words) {
    const double len = translation_length(evaluate(g, c.word));
    if (len < delta) out += 2.0 * funnel_sector_area(len, delta);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling.

HPoint sample_point(const RejectionRegion& region, CounterRng& rng, std::uint64_t* proposals,
                    const SamplerLimits& limits) {
  const Box& b = region.box;
  const double u_lo = std::isinf(b.y_max) ? 0.0 : 1.0 / b.y_max;
  const double u_hi = 1.0 / b.y_min;
  for (std::uint64_t k = 1; k <= limits.max_proposals; ++k) {
    const double x = b.x_min + rng.uniform() * (b.x_max - b.x_min);
    const double u = u_hi - rng.uniform() * (u_hi - u_lo);  // in (u_lo, u_hi]
    if (u <= 0.0) continue;
    const HPoint z(x, 1.0 / u);
    if (region.inside(z)) {
      if (proposals) *proposals += k;
      return z;
    }
  }
  throw Error(ErrorKind::RejectionStall,
              "no point accepted in " + std::to_string(limits.max_proposals) + " proposals");
}

namespace {

struct BoxBuilder {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
};

Vec3 vertex_vector(const PolygonVertex& v) {
  if (v.kind == VertexKind::Ideal) return detail::ideal_vector(v.ideal);
  return detail::to_hyperboloid(*v.point);
}

// Point at Klein parameter s on the segment between two vertex vectors, if it
// lies safely inside the half-plane.
std::optional<HPoint> segment_point(const Vec3& p, const Vec3& q, double s) {
  const Vec3 x{(1 - s) * p[0] + s * q[0], (1 - s) * p[1] + s * q[1], (1 - s) * p[2] + s * q[2]};
  const double l = lorentz(x, x);
  if (!(l > 0.0)) return std::nullopt;
  const double scale = 1.0 / std::sqrt(l);
  const double den = (x[0] - x[2]) * scale;
  if (!(den > 0.0)) return std::nullopt;
  const double y = 1.0 / den;
  if (!(y > 1e-9) || !(y < 1e12)) return std::nullopt;
  return HPoint(x[1] * scale * y, y);
}

}  // namespace

ThickDomain::ThickDomain(const FuchsianGroup& g, double delta)
    : group_(g), walker_(dirichlet_domain(g)), delta_(delta) {
  if (!g.is_lattice()) throw Error(ErrorKind::InvalidArgument, "thick domains need a lattice");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  const HyperbolicPolygon& d = walker_.domain();
  const std::size_t n = d.sides.size();
  BoxBuilder box;

  // Thin horoball at each finite cusp. The predicate loses precision within
  // ~1e-8 of the boundary, so the thin end is found by descending from above
  // and points inside a horoball are never tested directly.
  for (const PolygonVertex& v : d.vertices) {
    if (v.kind != VertexKind::Ideal || std::isinf(v.ideal)) continue;
    double hi = 1.0;
    while (walker_.moves_within(HPoint(v.ideal, hi), delta_) && hi < 1e9) hi *= 2.0;
    double lo = hi / 2.0;
    while (!walker_.moves_within(HPoint(v.ideal, lo), delta_)) {
      if (lo < 1e-6) throw Error(ErrorKind::UnboundedRegion, "no thin horoball found at a cusp");
      hi = lo;
      lo /= 2.0;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(lo * hi);
      (walker_.moves_within(HPoint(v.ideal, mid), delta_) ? lo : hi) = mid;
    }
    horoballs_.emplace_back(v.ideal, lo);
    const double h = hi;
    for (const HPoint& z : {HPoint(v.ideal, h), HPoint(v.ideal - h / 2, h / 2), HPoint(v.ideal + h / 2, h / 2)}) {
      if (irslab::contains(d, z, 1e-9)) box.add(z.x(), z.y());
    }
  }

  auto keep = [&](const std::optional<HPoint>& z) {
    if (z && !thin(*z)) box.add(z->x(), z->y());
  };
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 p = vertex_vector(d.vertices[(k + n - 1) % n]);
    const Vec3 q = vertex_vector(d.vertices[k]);
    const double sp = 1.0 / p[0], sq = 1.0 / q[0];
    const Vec3 pn{p[0] * sp, p[1] * sp, p[2] * sp}, qn{q[0] * sq, q[1] * sq, q[2] * sq};
    const int samples = 256;
    std::optional<bool> prev_thin;
    double prev_s = 0.0;
    for (int j = 0; j <= samples; ++j) {
      const double s = static_cast<double>(j) / samples;
      const std::optional<HPoint> z = segment_point(pn, qn, s);
      if (!z) {
        prev_thin = true;  // ideal end: deep in a cusp
        prev_s = s;
        continue;
      }
      const bool now_thin = thin(*z);
      if (!now_thin) box.add(z->x(), z->y());
      if (prev_thin && *prev_thin != now_thin) {
        // locate the thin/thick transition on this side
        double lo = prev_s, hi = s;
        const bool lo_thin = *prev_thin;
        for (int it = 0; it < 50; ++it) {
          const double mid = 0.5 * (lo + hi);
          const std::optional<HPoint> m = segment_point(pn, qn, mid);
          const bool m_thin = !m || thin(*m);
          (m_thin == lo_thin ? lo : hi) = mid;
        }
        keep(segment_point(pn, qn, lo_thin ? hi : lo));
      }
      prev_thin = now_thin;
      prev_s = s;
    }
    // top of a circular side
    const GeodesicSide& side = d.sides[k];
    if (!side.vertical) {
      const HPoint top(side.center, side.radius);
      if (irslab::contains(d, top, 1e-9)) keep(top);
    }
  }
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0)) {
    throw Error(ErrorKind::UnboundedRegion, "thick domain has no interior");
  }
  // a generous margin keeps rejection sampling exact despite discretisation
  const double width = box.x1 - box.x0;
  const double u_lo = 1.0 / box.y1, u_hi = 1.0 / box.y0;
  const double du = u_hi - u_lo;
  box_ = Box{box.x0 - 0.02 * width, box.x1 + 0.02 * width, 1.0 / (u_hi + 0.02 * du),
                    u_lo - 0.02 * du > 0.0 ? 1.0 / (u_lo - 0.02 * du) : 2.0 * box.y1};
}

RejectionRegion ThickDomain::region() const {
  return {box_, [this](const HPoint& z) { return contains(z); }};
}

bool ThickDomain::in_horoball(const HPoint& z) const {
  for (const auto& [point, diameter] : horoballs_) {
    const double dx = z.x() - point, dy = z.y() - 0.5 * diameter;
    if (dx * dx + dy * dy < 0.25 * diameter * diameter) return true;
  }
  return false;
}

bool ThickDomain::thin(const HPoint& z) const { return in_horoball(z) || walker_.moves_within(z, delta_); }

bool ThickDomain::contains(const HPoint& z) const {
  return irslab::contains(walker_.domain(), z, 0.0) && !thin(z);
}

double ThickDomain::area() const { return group_.core_area() - thin_area(group_, delta_); }

// ---------------------------------------------------------------------------
// Functionals.

double TestFunctional::support() const {
  switch (kind) {
    case FunctionalKind::SoftCount: return r + s;
    case FunctionalKind::ClippedInjRad: return 2.0 * s;
    case FunctionalKind::Constant: return 0.0;
  }
  return 0.0;
}

double TestFunctional::sup_abs() const {
  switch (kind) {
    case FunctionalKind::SoftCount: return kInf;
    case FunctionalKind::ClippedInjRad: return s;
    case FunctionalKind::Constant: return std::abs(s);
  }
  return kInf;
}

std::string TestFunctional::name() const {
  std::ostringstream out;
  out << std::setprecision(12);
  switch (kind) {
    case FunctionalKind::SoftCount: out << "SoftCount(" << r << "," << s << ")"; break;
    case FunctionalKind::ClippedInjRad: out << "ClippedInjRad(" << s << ")"; break;
    case FunctionalKind::Constant: out << "Constant(" << s << ")"; break;
  }
  return out.str();
}

double evaluate(const TestFunctional& f, const SubgroupSnapshot& s) {
  if (f.kind == FunctionalKind::Constant) return f.s;
  if (s.radius < f.support() - 1e-12) {
    throw Error(ErrorKind::RadiusMismatch, "snapshot radius below the support of " + f.name());
  }
  double count = 0.0, shortest = kInf;
  for (const Isometry& h : s.elements) {
    if (h.approx_equal(Isometry{}, 1e-9)) continue;
    const double d = distance(s.base, apply(h, s.base));
    shortest = std::min(shortest, d);
    if (d <= f.r) {
      count += 1.0;
    } else if (d < f.r + f.s) {
      count += (f.r + f.s - d) / f.s;
    }
  }
  if (f.kind == FunctionalKind::SoftCount) return count;
  return std::min(f.s, shortest / 2.0);
}

TestFunctional parse_functional(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw Error(ErrorKind::Parse, "functional '" + text + "'");
  }
  auto blank = [](const std::string& part) { return part.find_first_not_of(" \t") == std::string::npos; };
  const std::string head = text.substr(0, open);
  const auto first = head.find_first_not_of(" \t");
  const std::string name = first == std::string::npos ? "" : head.substr(first, head.find_last_not_of(" \t") + 1 - first);
  if (!blank(text.substr(close + 1))) throw Error(ErrorKind::Parse, "functional '" + text + "'");
  std::vector<double> args;
  std::stringstream in(text.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      args.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "functional argument '" + item + "'");
    }
  }
  if (name == "SoftCount" && args.size() == 2 && args[1] > 0.0 && args[0] >= 0.0) {
    return TestFunctional::soft_count(args[0], args[1]);
  }
  if (name == "ClippedInjRad" && args.size() == 1 && args[0] > 0.0) return TestFunctional::clipped_inj_rad(args[0]);
  if (name == "Constant" && args.size() == 1) return TestFunctional::constant(args[0]);
  throw Error(ErrorKind::Parse, "functional '" + text + "'");
}

// ---------------------------------------------------------------------------
// Estimates.

double pairwise_sum(const double* values, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += values[k];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

namespace {

// Runs body(i) for i in [0, n) on `threads` workers with static chunks.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, n))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t * n / threads; i < (t + 1) * n / threads; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void mean_and_error(const std::vector<double>& values, double& mean, double& std_error) {
  const std::size_t n = values.size();
  mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t k = 0; k < n; ++k) sq[k] = (values[k] - mean) * (values[k] - mean);
  const double var = n > 1 ? pairwise_sum(sq.data(), n) / static_cast<double>(n - 1) : 0.0;
  std_error = std::sqrt(var / static_cast<double>(n));
}

}  // namespace

IRSEstimate estimate_functional(const ThickDomain& domain, const TestFunctional& f, double radius,
                                std::size_t n, std::uint64_t seed, const EstimateOptions& options) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  if (radius < f.support()) {
    throw Error(ErrorKind::InvalidArgument, "radius " + std::to_string(radius) + " below the support of " + f.name());
  }
  if (options.observer && options.threads > 1) {
    throw Error(ErrorKind::InvalidArgument, "snapshot observer needs a single thread");
  }
  std::vector<double> values(n);
  std::vector<std::uint64_t> proposals(n, 0);
  const double snapshot_radius = std::max(radius, 1e-6);
  const RejectionRegion region = domain.region();
  parallel_for(n, options.threads, [&](std::size_t i) {
    CounterRng rng(split_seed(seed, i));
    const HPoint z = sample_point(region, rng, &proposals[i]);
    const double angle = 2.0 * kPi * rng.uniform();
    const Isometry g = move_i_to(z) * rotation_about_i(angle);
    if (f.kind == FunctionalKind::Constant && !options.observer) {
      values[i] = f.s;
      return;
    }
    const SubgroupSnapshot s = snapshot(domain.walker(), g, kI, snapshot_radius, "sample " + std::to_string(i));
    if (options.observer) options.observer(i, g, s);
    values[i] = evaluate(f, s);
  });

  IRSEstimate out;
  out.functional = f;
  out.n_samples = n;
  out.seed = seed;
  out.delta = domain.delta();
  mean_and_error(values, out.mean, out.std_error);
  const double thin = thin_area(domain.group(), domain.delta());
  out.truncation_bias_bound = thin > 0.0 ? thin * f.sup_abs() / domain.group().core_area() : 0.0;
  std::uint64_t total = 0;
  for (std::uint64_t p : proposals) total += p;
  out.acceptance = static_cast<double>(n) / static_cast<double>(total);
  const SamplerLimits limits;
  if (total >= limits.max_proposals && out.acceptance < limits.min_acceptance) {
    throw Error(ErrorKind::RejectionStall, "acceptance " + std::to_string(out.acceptance));
  }
  return out;
}

IRSEstimate estimate_functional(const FuchsianGroup& g, const TestFunctional& f, double radius, double delta,
                                std::size_t n, std::uint64_t seed, const EstimateOptions& options) {
  return estimate_functional(ThickDomain(g, delta), f, radius, n, seed, options);
}

std::vector<MixtureComponent> mixture_components(const MixtureSpec& spec,
                                                 const std::function<FuchsianGroup(const SurfaceSig&)>& group_for) {
  std::vector<MixtureComponent> out;
  for (const MixtureEntry& e : spec.entries) out.push_back({e.weight, group_for(e.component)});
  return out;
}

IRSEstimate estimate_mixture(const std::vector<MixtureComponent>& components, const TestFunctional& f,
                             double radius, double delta, std::size_t n, std::uint64_t seed,
                             const EstimateOptions& options) {
  if (components.empty()) throw Error(ErrorKind::InvalidArgument, "empty mixture");
  double weight_sum = 0.0;
  for (const MixtureComponent& c : components) weight_sum += c.weight;
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "mixture weights sum to " + std::to_string(weight_sum));
  }
  IRSEstimate out;
  out.functional = f;
  out.seed = seed;
  out.delta = delta;
  double var = 0.0, acceptance = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const MixtureComponent& c = components[k];
    const IRSEstimate e = estimate_functional(c.group, f, radius, delta, n, split_seed(seed, k), options);
    out.mean += c.weight * e.mean;
    var += c.weight * c.weight * e.std_error * e.std_error;
    out.truncation_bias_bound += c.weight == 0.0 ? 0.0 : c.weight * e.truncation_bias_bound;
    out.n_samples += e.n_samples;
    acceptance += c.weight * e.acceptance;
  }
  out.std_error = std::sqrt(var);
  out.acceptance = acceptance;
  return out;
}

Box union_box(const Box& a, const Box& b) {
  return Box{std::min(a.x_min, b.x_min), std::max(a.x_max, b.x_max), std::min(a.y_min, b.y_min),
             std::max(a.y_max, b.y_max)};
}

AreaMC symmetric_difference_area(const ThickDomain& a, const ThickDomain& b, std::size_t n, std::uint64_t seed,
                                 std::optional<Box> box) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  const Box region = box ? *box : union_box(a.box(), b.box());
  const double u_lo = 1.0 / region.y_max, u_hi = 1.0 / region.y_min;
  std::vector<double> hits(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(split_seed(seed, i));
    const double x = region.x_min + rng.uniform() * (region.x_max - region.x_min);
    const double u = u_hi - rng.uniform() * (u_hi - u_lo);
    const HPoint z(x, 1.0 / u);
    hits[i] = a.contains(z) != b.contains(z) ? 1.0 : 0.0;
  }
  double mean = 0.0, se = 0.0;
  mean_and_error(hits, mean, se);
  const double area = box_area(region);
  return {area * mean, area * se};
}

// ---------------------------------------------------------------------------
// Pinching experiment.

bool DegenerationResult::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const FunctionalVerdict& v) { return v.pass; });
}

DegenerationResult degeneration_experiment(const std::function<FuchsianGroup(double)>& family,
                                           const std::vector<MixtureComponent>& target,
                                           const DegenerationConfig& config) {
  if (config.schedule.empty()) throw Error(ErrorKind::InvalidArgument, "empty schedule");
  for (std::size_t k = 1; k < config.schedule.size(); ++k) {
    if (!(config.schedule[k] < config.schedule[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, "schedule must be strictly decreasing");
    }
  }
  if (config.functionals.empty()) throw Error(ErrorKind::InvalidArgument, "no functionals");

  std::vector<ThickDomain> domains;
  for (double t : config.schedule) {
    try {
      domains.emplace_back(family(t), config.delta);
    } catch (const Error& e) {
      throw Error(e.kind(), "at t = " + std::to_string(t) + ": " + e.what());
    }
  }

  DegenerationResult out;
  const std::uint64_t target_point = config.schedule.size();
  for (std::size_t fi = 0; fi < config.functionals.size(); ++fi) {
    const TestFunctional& f = config.functionals[fi];
    for (std::size_t ti = 0; ti < domains.size(); ++ti) {
      const std::uint64_t seed = split_seed(split_seed(config.seed, ti), fi);
      out.rows.push_back(
          {config.schedule[ti], estimate_functional(domains[ti], f, config.radius, config.n, seed, config.options)});
    }
    const std::uint64_t seed = split_seed(split_seed(config.seed, target_point), fi);
    const IRSEstimate t =
        estimate_mixture(target, f, config.radius, config.delta, config.n, seed, config.options);
    out.rows.push_back({std::numeric_limits<double>::quiet_NaN(), t});

    const IRSEstimate& last = out.rows[out.rows.size() - 2].estimate;
    FunctionalVerdict v;
    v.functional = f;
    v.target = t.mean;
    v.target_error = t.std_error;
    v.final_gap = std::abs(last.mean - t.mean);
    v.band = 3.0 * std::sqrt(last.std_error * last.std_error + t.std_error * t.std_error);
    v.pass = v.final_gap <= v.band;
    v.inconclusive = config.schedule.size() == 1;
    out.verdicts.push_back(v);
  }
  return out;
}

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "target";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return number(v);
}

}  // namespace

PinchFamily parse_pinch_family(const std::string& name) {
  if (name == "torus") return PinchFamily::PuncturedTorus;
  if (name == "genus2") return PinchFamily::GenusTwoSeparating;
  throw Error(ErrorKind::Parse, "unknown pinch family '" + name + "' (expected torus or genus2)");
}

std::string to_string(PinchFamily family) {
  return family == PinchFamily::PuncturedTorus ? "torus" : "genus2";
}

FuchsianGroup pinch_member(PinchFamily family, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "pinch length must be positive");
  PantsAssembly a;
  if (family == PinchFamily::PuncturedTorus) {
    a.pants = {{t, t, 0.0}};
    a.gluings = {{{0, 0}, {0, 1}, 0.0, "pinched"}};
  } else {
    a.pants = {{1.0, 1.0, t}, {1.0, 1.0, t}};
    a.gluings = {{{0, 0}, {0, 1}, 0.0, "a1"}, {{1, 0}, {1, 1}, 0.0, "a2"}, {{0, 2}, {1, 2}, 0.0, "pinched"}};
  }
  return assemble_surface(a);
}

CurveSystem pinch_curves(PinchFamily family) {
  if (family == PinchFamily::PuncturedTorus) return cut(SurfaceSig(1, 1), {{"pinched", false, "P", "P"}});
  return cut(SurfaceSig(2, 0), {{"pinched", true, "L", "R"}});
}

FuchsianGroup reference_lattice(const SurfaceSig& sig) {
  if (sig == SurfaceSig(0, 3)) return pair_of_pants(0.0, 0.0, 0.0);
  if (sig == SurfaceSig(1, 1)) {
    PantsAssembly a;
    a.pants = {{1.0, 1.0, 0.0}};
    a.gluings = {{{0, 0}, {0, 1}, 0.0, "a"}};
    return assemble_surface(a);
  }
  throw Error(ErrorKind::InvalidArgument, "no reference lattice for " + sig.to_string());
}

std::vector<MixtureComponent> pinch_target(PinchFamily family) {
  return mixture_components(mixture_weights(pinch_curves(family)), reference_lattice);
}

std::string to_csv(const DegenerationResult& result) {
  std::ostringstream out;
  out << "t,functional,mean,std_error,bias_bound,n,seed\n";
  for (const DegenerationRow& r : result.rows) {
    const IRSEstimate& e = r.estimate;
    out << number(r.t) << ',' << '"' << e.functional.name() << '"' << ',' << number(e.mean) << ','
        << number(e.std_error) << ',' << number(e.truncation_bias_bound) << ',' << e.n_samples << ',' << e.seed
        << '\n';
  }
  return out.str();
}

std::string to_json(const DegenerationResult& result) {
  nlohmann::json j;
  nlohmann::json verdicts = nlohmann::json::array();
  for (const FunctionalVerdict& v : result.verdicts) {
    verdicts.push_back({{"functional", v.functional.name()},
                        {"target", json_number(v.target)},
                        {"target_error", json_number(v.target_error)},
                        {"final_gap", json_number(v.final_gap)},
                        {"band", json_number(v.band)},
                        {"verdict", v.inconclusive ? "INCONCLUSIVE" : (v.pass ? "PASS" : "FAIL")}});
  }
  j["verdicts"] = verdicts;
  j["pass"] = result.pass();
  return j.dump(2);
}

}  // namespace irslab
