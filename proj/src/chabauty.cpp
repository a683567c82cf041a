#include "irslab/chabauty.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace irslab {

namespace {

bool matrix_less(const Isometry& p, const Isometry& q) {
  if (p.a() != q.a()) return p.a() < q.a();
  if (p.b() != q.b()) return p.b() < q.b();
  if (p.c() != q.c()) return p.c() < q.c();
  return p.d() < q.d();
}

double nearest(const Isometry& g, const std::vector<Isometry>& set) {
  double best = kInf;
  for (const Isometry& h : set) best = std::min(best, frobenius_distance(g, h));
  return best;
}

std::vector<Isometry> within(const SubgroupSnapshot& s, double radius) {
  std::vector<Isometry> out;
  for (const Isometry& g : s.elements) {
    if (distance(s.base, apply(g, s.base)) <= radius) out.push_back(g);
  }
  return out;
}

double norm(const Isometry& g) { return std::sqrt(g.a() * g.a() + g.b() * g.b() + g.c() * g.c() + g.d() * g.d()); }

constexpr double kCommuteTol = 1e-8;

nlohmann::json matrix_json(const Isometry& g) { return {g.a(), g.b(), g.c(), g.d()}; }

}  // namespace

SubgroupSnapshot make_snapshot(const std::vector<Isometry>& elements, const HPoint& base, double radius,
                               std::string source) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "snapshot radius must be positive");
  SubgroupSnapshot out;
  out.radius = radius;
  out.base = base;
  out.source = std::move(source);
  IsometrySet seen;
  seen.insert(Isometry{});
  out.elements.push_back(Isometry{});
  for (const Isometry& g : elements) {
    if (distance(base, apply(g, base)) > radius) continue;
    if (seen.insert(g).second) out.elements.push_back(g);
  }
  std::sort(out.elements.begin(), out.elements.end(), matrix_less);
  return out;
}

SubgroupSnapshot snapshot(const FuchsianGroup& g, const Isometry& conjugator, const HPoint& base, double radius,
                          const BallOptions& options) {
  const HPoint moved = apply(conjugator, base);
  const BallEnumeration ball = enumerate_ball(g, moved, radius, options);
  if (!ball.exhaustive) throw Error(ErrorKind::FrontierOverflow, "word search for the snapshot was cut off");
  std::vector<Isometry> elements;
  elements.reserve(ball.elements.size());
  for (const BallElement& e : ball.elements) elements.push_back(conjugate(e.element, conjugator));
  // conjugation rounding can push boundary elements just past the radius
  SubgroupSnapshot out = make_snapshot(elements, base, radius * (1.0 + 1e-12), "words");
  out.radius = radius;
  return out;
}

SubgroupSnapshot snapshot(const TileWalker& walker, const Isometry& conjugator, const HPoint& base, double radius,
                          std::string source) {
  const std::vector<Isometry> elements = walker.conjugated_ball(conjugator, base, radius);
  SubgroupSnapshot out = make_snapshot(elements, base, radius * (1.0 + 1e-12), std::move(source));
  out.radius = radius;
  return out;
}

double snapshot_distance(const SubgroupSnapshot& a, const SubgroupSnapshot& b, double margin) {
  if (std::abs(a.radius - b.radius) > 1e-12 * std::max(1.0, a.radius)) {
    throw Error(ErrorKind::RadiusMismatch, "snapshots taken at radii " + std::to_string(a.radius) + " and " +
                                               std::to_string(b.radius));
  }
  if (distance(a.base, b.base) > 1e-12) throw Error(ErrorKind::RadiusMismatch, "snapshots taken at different bases");
  if (!(margin >= 0.0 && margin < a.radius)) throw Error(ErrorKind::InvalidArgument, "margin must lie in [0, radius)");
  // Work in the frame where the base is i, so that |g|_F^2 = 2 cosh(displacement).
  const Isometry frame = move_i_to(a.base);
  auto framed = [&](const SubgroupSnapshot& s) {
    std::vector<Isometry> out;
    for (const Isometry& g : s.elements) out.push_back(conjugate(g, frame));
    return out;
  };
  const std::vector<Isometry> fa = framed(a), fb = framed(b);
  // Each element may be matched to a virtual point at infinity at cost
  // weight(g), which vanishes past the inner radius and is 1-Lipschitz in the
  // Frobenius metric; this is the Hausdorff distance of the two sets with
  // that point added, so it is a metric and ignores the boundary shell.
  const double inner_norm = std::sqrt(2.0 * std::cosh(a.radius - margin));
  auto weight = [&](const Isometry& g) {
    return std::max(0.0, inner_norm - norm(g));
  };
  double out = 0.0;
  for (const Isometry& g : fa) out = std::max(out, std::min(weight(g), nearest(g, fb)));
  for (const Isometry& g : fb) out = std::max(out, std::min(weight(g), nearest(g, fa)));
  return out;
}

ConvergenceReport check_convergence(const std::vector<SubgroupSnapshot>& sequence, const SubgroupSnapshot& limit,
                                    double eps, double margin) {
  if (sequence.empty()) throw Error(ErrorKind::InvalidArgument, "empty snapshot sequence");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  ConvergenceReport out;
  out.eps = eps;
  out.tail_start = sequence.size() / 2;
  for (const SubgroupSnapshot& s : sequence) out.distances.push_back(snapshot_distance(s, limit, margin));

  const double inner = limit.radius - margin;
  const std::size_t tail = sequence.size() - out.tail_start;

  out.c1 = true;
  for (const Isometry& h : within(limit, inner)) {
    LimitWitness w{h, 0.0};
    for (std::size_t k = out.tail_start; k < sequence.size(); ++k) {
      w.worst_match = std::max(w.worst_match, nearest(h, sequence[k].elements));
    }
    out.c1 = out.c1 && w.worst_match <= eps;
    out.witnesses.push_back(w);
  }

  out.c2 = true;
  for (std::size_t k = out.tail_start; k < sequence.size(); ++k) {
    for (const Isometry& e : within(sequence[k], inner)) {
      const double to_limit = nearest(e, limit.elements);
      if (to_limit <= eps) continue;
      std::size_t hits = 0;
      for (std::size_t j = out.tail_start; j < sequence.size(); ++j) hits += nearest(e, sequence[j].elements) <= eps;
      const double frequency = static_cast<double>(hits) / static_cast<double>(tail);
      if (frequency >= 0.5) {
        out.violations.push_back({k, e, frequency, to_limit});
        out.c2 = false;
      }
    }
  }
  return out;
}

Isometry march_toward(const HPoint& base, BoundaryPoint target, double depth) {
  const Isometry to_base = move_i_to(base);
  const BoundaryPoint p = apply(to_base.inverse(), target);
  // the geodesic through i ending at p starts at -1/p
  const BoundaryPoint q = std::isinf(p) ? 0.0 : (p == 0.0 ? kInf : -1.0 / p);
  return translation_along(apply(to_base, q), target, depth);
}

EscapeReport escape_dichotomy(const FuchsianGroup& g, const Word& peripheral, int steps, double radius,
                              const HPoint& base) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be non-negative");
  const Isometry parabolic = evaluate(g, peripheral);
  const IsometryClass cls = classify(parabolic, 1e-8);
  if (cls.tag != IsometryTag::Parabolic) {
    throw Error(ErrorKind::InvalidArgument, "escape direction " + word_to_string(g, peripheral) + " is not parabolic");
  }
  EscapeReport out;
  out.cusp = *cls.fixed_point;

  const TileWalker walker(dirichlet_domain(g, base));
  SubgroupSnapshot start;
  for (int n = 0; n <= steps; ++n) {
    const Isometry c = march_toward(base, out.cusp, n);
    SubgroupSnapshot s = snapshot(walker, c, base, radius, "escape step " + std::to_string(n));
    EscapeStep step;
    step.depth = n;
    step.size = s.elements.size();
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
      for (std::size_t j = i + 1; j < s.elements.size(); ++j) {
        const Isometry& x = s.elements[i];
        const Isometry& y = s.elements[j];
        step.noncommuting_pairs += frobenius_distance(x * y * x.inverse() * y.inverse(), Isometry{}) > kCommuteTol;
      }
    }
    if (n == 0) start = s;
    step.distance_to_start = snapshot_distance(s, start);
    out.steps.push_back(step);
    out.terminal = std::move(s);
  }
  out.terminal_abelian = out.steps.back().noncommuting_pairs == 0;
  out.terminal_parabolic = std::all_of(out.terminal.elements.begin(), out.terminal.elements.end(), [&](const Isometry& e) {
    if (e.approx_equal(Isometry{}, 1e-9)) return true;
    const IsometryClass c = classify(e, 1e-8);
    if (c.tag != IsometryTag::Parabolic) return false;
    const BoundaryPoint f = *c.fixed_point;
    if (std::isinf(f) || std::isinf(out.cusp)) return std::isinf(f) && std::isinf(out.cusp);
    return std::abs(f - out.cusp) <= 1e-6 * (1.0 + std::abs(out.cusp));
  });
  return out;
}

std::string to_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["eps"] = report.eps;
  j["tail_start"] = report.tail_start;
  j["distances"] = report.distances;
  j["c1"] = report.c1;
  j["c2"] = report.c2;
  j["passed"] = report.passed();
  nlohmann::json witnesses = nlohmann::json::array();
  for (const LimitWitness& w : report.witnesses) {
    witnesses.push_back({{"element", matrix_json(w.element)}, {"worst_match", w.worst_match}});
  }
  j["witnesses"] = witnesses;
  nlohmann::json violations = nlohmann::json::array();
  for (const ClusterViolation& v : report.violations) {
    violations.push_back({{"step", v.step},
                          {"element", matrix_json(v.element)},
                          {"frequency", v.frequency},
                          {"limit_distance", v.limit_distance}});
  }
  j["violations"] = violations;
  return j.dump(2);
}

std::string to_json(const EscapeReport& report) {
  nlohmann::json j;
  j["cusp"] = std::isinf(report.cusp) ? nlohmann::json("inf") : nlohmann::json(report.cusp);
  nlohmann::json steps = nlohmann::json::array();
  for (const EscapeStep& s : report.steps) {
    steps.push_back({{"depth", s.depth},
                     {"size", s.size},
                     {"noncommuting_pairs", s.noncommuting_pairs},
                     {"distance_to_start", s.distance_to_start}});
  }
  j["steps"] = steps;
  j["terminal_size"] = report.terminal.elements.size();
  j["terminal_abelian"] = report.terminal_abelian;
  j["terminal_parabolic"] = report.terminal_parabolic;
  return j.dump(2);
}

}  // namespace irslab
