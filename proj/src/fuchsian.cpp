#include "irslab/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "irslab/domains.hpp"

namespace irslab {

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& letter : out) letter = -letter;
  return out;
}

Word reduce_word(const Word& w) {
  Word out;
  for (int letter : w) {
    if (!out.empty() && out.back() == -letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

double FuchsianGroup::core_area() const {
  return signature ? 2.0 * kPi * std::abs(signature->euler_char()) : 0.0;
}

std::optional<double> FuchsianGroup::param(const std::string& name) const {
  for (const auto& [key, value] : params) {
    if (key == name) return value;
  }
  return std::nullopt;
}

Isometry evaluate(const FuchsianGroup& g, const Word& w) {
  Isometry out;
  const int n = static_cast<int>(g.generators.size());
  for (int letter : w) {
    if (letter == 0 || std::abs(letter) > n) {
      throw Error(ErrorKind::InvalidArgument, "generator index " + std::to_string(letter));
    }
    const Isometry& s = g.generators[std::abs(letter) - 1];
    out = out * (letter > 0 ? s : s.inverse());
  }
  return out;
}

std::string word_to_string(const FuchsianGroup& g, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (int letter : w) {
    if (!out.empty()) out += ' ';
    out += g.generator_names.at(std::abs(letter) - 1);
    if (letter < 0) out += "^-1";
  }
  return out;
}

Word parse_word(const FuchsianGroup& g, const std::string& text) {
  std::istringstream in(text);
  std::string token;
  Word out;
  while (in >> token) {
    if (token == "1") continue;
    std::string name = token;
    int power = 1;
    const auto caret = token.find('^');
    if (caret != std::string::npos) {
      name = token.substr(0, caret);
      try {
        power = std::stoi(token.substr(caret + 1));
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::Parse, "bad exponent in '" + token + "'");
      }
    }
    const auto it = std::find(g.generator_names.begin(), g.generator_names.end(), name);
    if (it == g.generator_names.end()) throw Error(ErrorKind::Parse, "unknown generator '" + name + "'");
    const int index = static_cast<int>(it - g.generator_names.begin()) + 1;
    for (int k = 0; k < std::abs(power); ++k) out.push_back(power > 0 ? index : -index);
  }
  return out;
}

FuchsianGroup conjugate_group(const FuchsianGroup& g, const Isometry& h) {
  FuchsianGroup out = g;
  for (Isometry& s : out.generators) s = conjugate(s, h);
  return out;
}

void check_words(const FuchsianGroup& g) {
  for (const Word& w : g.peripheral_words) {
    const double tr = std::abs(evaluate(g, w).trace());
    if (std::abs(tr - 2.0) > 1e-8) {
      throw Error(ErrorKind::ConstructionFailed,
                  "peripheral word " + word_to_string(g, w) + " has |tr| = " + std::to_string(tr));
    }
  }
  for (const Word& w : g.boundary_words) {
    if (classify(evaluate(g, w)).tag != IsometryTag::Hyperbolic) {
      throw Error(ErrorKind::ConstructionFailed, "boundary word " + word_to_string(g, w) + " is not hyperbolic");
    }
  }
}

FuchsianGroup trivial_group() { return FuchsianGroup{}; }

FuchsianGroup cyclic_group(const Isometry& generator) {
  FuchsianGroup g;
  g.generators = {generator};
  g.generator_names = {"g"};
  return g;
}

namespace {

void require_length(double l, const char* what) {
  if (!(l >= 0.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be a finite non-negative length");
  }
}

}  // namespace

FuchsianGroup pair_of_pants(double l1, double l2, double l3) {
  require_length(l1, "l1");
  require_length(l2, "l2");
  require_length(l3, "l3");
  const double a = 2.0 * std::cosh(0.5 * l1);
  const double b = 2.0 * std::cosh(0.5 * l2);
  const double c = 2.0 * std::cosh(0.5 * l3);
  // s + 1/s = -c with s < 0
  const double s = -0.5 * (c + std::sqrt(std::max(0.0, c * c - 4.0)));

  FuchsianGroup g;
  g.generators = {Isometry(a, -1.0, 1.0, 0.0), Isometry(0.0, s, -1.0 / s, b)};
  g.generator_names = {"X", "Y"};
  g.signature = SurfaceSig(0, 3);
  g.params = {{"l1", l1}, {"l2", l2}, {"l3", l3}};
  const std::array<Word, 3> slots{Word{1}, Word{2}, Word{-2, -1}};
  const std::array<double, 3> lengths{l1, l2, l3};
  for (int k = 0; k < 3; ++k) {
    (lengths[k] == 0.0 ? g.peripheral_words : g.boundary_words).push_back(slots[k]);
  }

  const std::array<double, 3> targets{a, b, -c};
  const std::array<Word, 3> trace_words{Word{1}, Word{2}, Word{1, 2}};
  for (int k = 0; k < 3; ++k) {
    const Isometry m = evaluate(g, trace_words[k]);
    // stored signs are canonical, so only absolute traces are comparable
    if (std::abs(std::abs(m.trace()) - std::abs(targets[k])) > 1e-8 * std::abs(targets[k])) {
      throw Error(ErrorKind::ConstructionFailed, "pants trace target missed");
    }
  }
  check_words(g);
  return g;
}

FuchsianGroup punctured_torus(double len_a, double len_b, double twist) {
  if (!(len_a > 0.0) || !(len_b > 0.0) || !std::isfinite(len_a) || !std::isfinite(len_b) ||
      !std::isfinite(twist)) {
    throw Error(ErrorKind::InvalidArgument, "punctured torus needs positive finite lengths");
  }
  const double x = 2.0 * std::cosh(0.5 * len_a);
  const double y = 2.0 * std::cosh(0.5 * len_b);
  // x^2 + y^2 + z^2 = xyz, larger root
  const double disc = x * x * y * y - 4.0 * (x * x + y * y);
  if (disc < 0.0) {
    throw Error(ErrorKind::ConstructionFailed,
                "sinh(lenA/2) sinh(lenB/2) = " +
                    std::to_string(std::sinh(0.5 * len_a) * std::sinh(0.5 * len_b)) + " < 1");
  }
  const double z = 0.5 * (x * y + std::sqrt(disc));
  // s + 1/s = z with s > 0
  const double s = 0.5 * (z + std::sqrt(z * z - 4.0));

  const Isometry a(x, -1.0, 1.0, 0.0);
  Isometry b(0.0, s, -1.0 / s, y);
  if (twist != 0.0) b = b * hyperbolic_power(a, twist);

  FuchsianGroup g;
  g.generators = {a, b};
  g.generator_names = {"A", "B"};
  g.signature = SurfaceSig(1, 1);
  g.peripheral_words = {Word{1, 2, -1, -2}};
  g.curve_words = {{"A", Word{1}}, {"B", Word{2}}};
  g.params = {{"lenA", len_a}, {"lenB", len_b}, {"twist", twist}};

  // tr[A,B] is independent of the lifts to SL(2,R); evaluate it from traces
  const Isometry& bb = g.generators[1];
  const double ta = a.trace(), tb = bb.trace();
  const double tab = a.a() * bb.a() + a.b() * bb.c() + a.c() * bb.b() + a.d() * bb.d();
  const double comm = ta * ta + tb * tb + tab * tab - ta * tb * tab - 2.0;
  if (std::abs(comm + 2.0) > 1e-8) {
    throw Error(ErrorKind::ConstructionFailed, "tr[A,B] = " + std::to_string(comm));
  }
  return g;
}

namespace {

Isometry slot_element(const std::array<Isometry, 2>& xy, int slot) {
  switch (slot) {
    case 0: return xy[0];
    case 1: return xy[1];
    default: return (xy[0] * xy[1]).inverse();
  }
}

Word slot_word(int pants, int slot) {
  const int x = 2 * pants + 1, y = 2 * pants + 2;
  switch (slot) {
    case 0: return {x};
    case 1: return {y};
    default: return {-y, -x};
  }
}

// Boundary points spanned by a boundary element: the axis, or a cusp point twice.
std::pair<BoundaryPoint, BoundaryPoint> ends_of(const Isometry& g) {
  const IsometryClass cls = classify(g, 1e-8);
  if (cls.tag == IsometryTag::Hyperbolic) return *cls.axis;
  if (cls.tag == IsometryTag::Parabolic) return {*cls.fixed_point, *cls.fixed_point};
  throw Error(ErrorKind::ConstructionFailed, "boundary element is neither hyperbolic nor parabolic");
}

struct Frame {
  Isometry standardize;  // axis -> (0, inf)
  double foot = 1.0;     // seam foot at i * foot
  int side = 1;          // sign of the real half containing the pants
};

Frame frame_of(const Isometry& boundary, const Isometry& reference) {
  const auto [rep, att] = *classify(boundary).axis;
  Frame f;
  f.standardize = standardize_pair(rep, att);
  const auto [r1, r2] = ends_of(reference);
  const double w1 = apply(f.standardize, r1);
  const double w2 = apply(f.standardize, r2);
  if (!std::isfinite(w1) || !std::isfinite(w2) || w1 * w2 <= 0.0) {
    throw Error(ErrorKind::ConstructionFailed, "reference boundary meets the glued axis");
  }
  f.foot = std::sqrt(w1 * w2);
  f.side = w1 > 0.0 ? 1 : -1;
  return f;
}

}  // namespace

FuchsianGroup assemble_surface(const PantsAssembly& assembly, bool certify) {
  const int n_pants = static_cast<int>(assembly.pants.size());
  if (n_pants == 0) throw Error(ErrorKind::InvalidArgument, "no pants");

  std::vector<std::array<Isometry, 2>> local(n_pants);
  for (int i = 0; i < n_pants; ++i) {
    const auto& l = assembly.pants[i];
    const FuchsianGroup p = pair_of_pants(l[0], l[1], l[2]);
    local[i] = {p.generators[0], p.generators[1]};
  }

  std::vector<std::array<bool, 3>> used(n_pants, {false, false, false});
  for (const Gluing& gl : assembly.gluings) {
    for (const PantsSlot& ps : {gl.a, gl.b}) {
      if (ps.pants < 0 || ps.pants >= n_pants || ps.slot < 0 || ps.slot > 2) {
        throw Error(ErrorKind::InvalidArgument, "gluing refers to a missing slot");
      }
      if (used[ps.pants][ps.slot]) throw Error(ErrorKind::InvalidArgument, "slot glued twice");
      used[ps.pants][ps.slot] = true;
    }
    const double la = assembly.pants[gl.a.pants][gl.a.slot];
    const double lb = assembly.pants[gl.b.pants][gl.b.slot];
    if (!(la > 0.0) || !(lb > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "glued curves need positive length");
    }
    if (std::abs(la - lb) > 1e-9 * std::max(1.0, la)) {
      throw Error(ErrorKind::InvalidArgument, "glued slots have different lengths");
    }
  }

  // Generators 2i, 2i+1 belong to pants i; gluing generators follow.
  FuchsianGroup g;
  for (int i = 0; i < n_pants; ++i) {
    g.generators.push_back(local[i][0]);
    g.generators.push_back(local[i][1]);
    g.generator_names.push_back("X" + std::to_string(i + 1));
    g.generator_names.push_back("Y" + std::to_string(i + 1));
  }
  std::vector<int> component(n_pants);
  std::iota(component.begin(), component.end(), 0);
  std::vector<int> extra_component;  // component of each gluing generator

  auto realized = [&](int pants, int slot) {
    return slot_element({g.generators[2 * pants], g.generators[2 * pants + 1]}, slot);
  };

  int hnn_count = 0;
  for (std::size_t k = 0; k < assembly.gluings.size(); ++k) {
    const Gluing& gl = assembly.gluings[k];
    const bool self_pair = gl.a.pants == gl.b.pants;
    const int ref_a = self_pair ? gl.b.slot : (gl.a.slot + 1) % 3;
    const int ref_b = self_pair ? gl.a.slot : (gl.b.slot + 1) % 3;

    const Isometry u = realized(gl.a.pants, gl.a.slot);
    const Isometry v = realized(gl.b.pants, gl.b.slot);
    const Frame fu = frame_of(u, realized(gl.a.pants, ref_a));
    const Frame fv = frame_of(v, realized(gl.b.pants, ref_b));

    Isometry h = dilation(1.0 / fv.foot) * fv.standardize;
    if (fu.side == fv.side) h = Isometry(0.0, -1.0, 1.0, 0.0) * h;
    h = fu.standardize.inverse() * dilation(fu.foot * std::exp(gl.twist)) * h;

    const std::string name = gl.name.empty() ? "c" + std::to_string(k + 1) : gl.name;
    const int ca = component[gl.a.pants], cb = component[gl.b.pants];
    if (ca != cb) {
      for (int i = 0; i < n_pants; ++i) {
        if (component[i] != cb) continue;
        g.generators[2 * i] = h * g.generators[2 * i] * h.inverse();
        g.generators[2 * i + 1] = h * g.generators[2 * i + 1] * h.inverse();
        component[i] = ca;
      }
      for (std::size_t e = 0; e < extra_component.size(); ++e) {
        if (extra_component[e] != cb) continue;
        Isometry& t = g.generators[2 * n_pants + e];
        t = h * t * h.inverse();
        extra_component[e] = ca;
      }
    } else {
      g.generators.push_back(h);
      g.generator_names.push_back("t" + std::to_string(++hnn_count));
      extra_component.push_back(ca);
    }
    g.curve_words.push_back({name, slot_word(gl.a.pants, gl.a.slot)});
    g.params.emplace_back(name + ".length", assembly.pants[gl.a.pants][gl.a.slot]);
    g.params.emplace_back(name + ".twist", gl.twist);
  }

  for (int i = 1; i < n_pants; ++i) {
    if (component[i] != component[0]) throw Error(ErrorKind::InvalidArgument, "pants graph is disconnected");
  }

  int punctures = 0;
  for (int i = 0; i < n_pants; ++i) {
    for (int s = 0; s < 3; ++s) {
      if (used[i][s]) continue;
      ++punctures;
      (assembly.pants[i][s] == 0.0 ? g.peripheral_words : g.boundary_words).push_back(slot_word(i, s));
    }
  }
  const int genus = static_cast<int>(assembly.gluings.size()) - n_pants + 1;
  g.signature = SurfaceSig(genus, punctures);
  for (int i = 0; i < n_pants; ++i) {
    for (int s = 0; s < 3; ++s) {
      g.params.emplace_back("P" + std::to_string(i + 1) + ".l" + std::to_string(s + 1), assembly.pants[i][s]);
    }
  }
  check_words(g);
  g = recenter(g);
  if (certify) certify_group(g);
  return g;
}

FuchsianGroup recenter(const FuchsianGroup& g) {
  if (g.generators.empty()) return g;
  // sum of cosh d(z, g z) in coordinates (x, log y); convex along geodesics
  auto cost = [&](double x, double s) {
    const HPoint z(x, std::exp(s));
    double out = 0.0;
    for (const Isometry& a : g.generators) out += cosh_distance(z, apply(a, z));
    return out;
  };
  double x = 0.0, s = 0.0, f = cost(x, s);
  double step = 1.0;
  for (int it = 0; it < 400 && step > 1e-12; ++it) {
    const double h = 1e-6;
    const double gx = (cost(x + h, s) - cost(x - h, s)) / (2 * h);
    // the metric in (x, log y) is dx^2 / y^2 + ds^2
    const double gs = (cost(x, s + h) - cost(x, s - h)) / (2 * h);
    const double y2 = std::exp(2 * s);
    const double norm = std::sqrt(gx * gx * y2 + gs * gs);
    if (norm < 1e-12 * f) break;
    bool moved = false;
    while (step > 1e-12) {
      const double nx = x - step * gx * y2 / norm, ns = s - step * gs / norm;
      const double nf = cost(nx, ns);
      if (nf < f) {
        x = nx;
        s = ns;
        f = nf;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return conjugate_group(g, move_i_to(HPoint(x, std::exp(s))));
}

// ---------------------------------------------------------------------------

long long IsometrySet::bucket(double v) const {
  // buckets far wider than the tolerance, so neighbours need only +-1
  return static_cast<long long>(std::floor(v / (1e3 * tol_)));
}

std::optional<std::size_t> IsometrySet::find(const Isometry& g) const {
  // rounding in long products grows with the entries, so the match is relative
  const double norm = std::sqrt(g.a() * g.a() + g.b() * g.b() + g.c() * g.c() + g.d() * g.d());
  const double tol = tol_ * std::max(1.0, norm);
  auto scan = [&](double a) -> std::optional<std::size_t> {
    for (long long k = bucket(a - tol) - 1; k <= bucket(a + tol) + 1; ++k) {
      auto [lo, hi] = index_.equal_range(k);
      for (auto it = lo; it != hi; ++it) {
        if (frobenius_distance(items_[it->second], g) <= tol) return it->second;
      }
    }
    return std::nullopt;
  };
  if (auto hit = scan(g.a())) return hit;
  // a is canonically >= 0, but a ~ 0 may come with either sign of (b, c, d)
  if (std::abs(g.a()) <= tol) return scan(-g.a());
  return std::nullopt;
}

std::pair<std::size_t, bool> IsometrySet::insert(const Isometry& g) {
  if (auto found = find(g)) return {*found, false};
  items_.push_back(g);
  index_.emplace(bucket(g.a()), items_.size() - 1);
  return {items_.size() - 1, true};
}

namespace {

bool matrix_less(const Isometry& p, const Isometry& q) {
  if (p.a() != q.a()) return p.a() < q.a();
  if (p.b() != q.b()) return p.b() < q.b();
  if (p.c() != q.c()) return p.c() < q.c();
  return p.d() < q.d();
}

}  // namespace

BallEnumeration enumerate_ball(const FuchsianGroup& g, const HPoint& base, double radius,
                               const BallOptions& options) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const int n = static_cast<int>(g.generators.size());

  std::vector<std::pair<int, Isometry>> letters;
  double max_gen = 0.0;
  for (int k = 1; k <= n; ++k) {
    letters.emplace_back(k, g.generators[k - 1]);
    letters.emplace_back(-k, g.generators[k - 1].inverse());
    max_gen = std::max(max_gen, distance(base, apply(g.generators[k - 1], base)));
  }
  const double slack = options.slack >= 0.0 ? options.slack : max_gen;

  struct Node {
    Word word;
    Isometry element;
  };

  BallEnumeration out;
  out.base = base;
  out.radius = radius;
  IsometrySet seen;
  seen.insert(Isometry{});
  out.elements.push_back({{}, Isometry{}, 0.0});

  // stored words dominate memory when a non-discrete group packs long words
  // into the ball; bound them along with the element count
  const std::size_t max_letters = 16 * options.max_elements;
  std::size_t kept_letters = 0;
  std::vector<Node> frontier{{{}, Isometry{}}};
  for (int len = 0; !frontier.empty(); ++len) {
    if (len >= options.max_word_len) {
      out.exhaustive = false;
      break;
    }
    std::vector<Node> next;
    std::size_t frontier_letters = 0;
    for (const Node& node : frontier) {
      for (const auto& [letter, m] : letters) {
        if (!node.word.empty() && node.word.back() == -letter) continue;
        const Isometry h = node.element * m;
        if (!seen.insert(h).second) continue;
        if (seen.size() > options.max_elements) {
          throw Error(ErrorKind::FrontierOverflow, "more than " + std::to_string(options.max_elements) +
                                                       " elements within radius + slack");
        }
        const double d = distance(base, apply(h, base));
        if (d > radius + slack) continue;
        Word w = node.word;
        w.push_back(letter);
        if (d <= radius) {
          kept_letters += w.size();
          out.elements.push_back({w, h, d});
        }
        frontier_letters += w.size();
        if (kept_letters + frontier_letters > max_letters) {
          throw Error(ErrorKind::FrontierOverflow, "stored words exceed " + std::to_string(max_letters) + " letters");
        }
        next.push_back({std::move(w), h});
      }
    }
    frontier = std::move(next);
  }

  std::sort(out.elements.begin(), out.elements.end(),
            [](const BallElement& p, const BallElement& q) { return matrix_less(p.element, q.element); });
  return out;
}

CollarResult collar_check(const FuchsianGroup& g, const Word& alpha, const Word& beta, int intersection) {
  if (intersection < 1) throw Error(ErrorKind::InvalidArgument, "curves must intersect");
  const Word a = reduce_word(alpha), b = reduce_word(beta);
  if (a == b || a == inverse_word(b)) {
    throw Error(ErrorKind::InvalidArgument, "a simple curve does not intersect itself");
  }
  CollarResult r;
  r.lhs = std::sinh(0.5 * translation_length(evaluate(g, a))) *
          std::sinh(0.5 * translation_length(evaluate(g, b)));
  r.ok = r.lhs >= 1.0 - 1e-9;
  return r;
}

double systole_at(const FuchsianGroup& g, const HPoint& base, double radius, const BallOptions& options) {
  if (g.generators.empty()) return kInf;
  const BallEnumeration ball = enumerate_ball(g, base, radius, options);
  if (!ball.exhaustive) throw Error(ErrorKind::FrontierOverflow, "word length limit reached");
  double best = kInf;
  for (const BallElement& e : ball.elements) {
    if (!e.word.empty()) best = std::min(best, e.displacement);
  }
  return best;
}

// ---------------------------------------------------------------------------

std::string to_text(const FuchsianGroup& g) {
  std::ostringstream out;
  out << std::setprecision(18);
  out << "signature " << (g.signature ? g.signature->to_string() : "none") << '\n';
  for (const auto& [key, value] : g.params) out << "param " << key << ' ' << value << '\n';
  for (std::size_t k = 0; k < g.generators.size(); ++k) {
    const Isometry& m = g.generators[k];
    out << "generator " << g.generator_names[k] << ' ' << m.a() << ' ' << m.b() << ' ' << m.c() << ' '
        << m.d() << '\n';
  }
  for (const Word& w : g.peripheral_words) out << "peripheral " << word_to_string(g, w) << '\n';
  for (const Word& w : g.boundary_words) out << "boundary " << word_to_string(g, w) << '\n';
  for (const NamedWord& w : g.curve_words) out << "curve " << w.name << ": " << word_to_string(g, w.word) << '\n';
  return out.str();
}

FuchsianGroup parse_group(const std::string& text) {
  FuchsianGroup g;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_signature = false;
  std::vector<std::pair<std::string, std::string>> deferred;  // words need all generators first
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (key == "signature") {
      std::string sig;
      ls >> sig;
      have_signature = true;
      if (sig == "none") continue;
      const auto comma = sig.find(',');
      if (comma == std::string::npos) throw Error(ErrorKind::Parse, where + ": expected g,p");
      try {
        g.signature = SurfaceSig(std::stoi(sig.substr(0, comma)), std::stoi(sig.substr(comma + 1)));
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::Parse, where + ": bad signature");
      }
    } else if (key == "param") {
      std::string name;
      double value;
      if (!(ls >> name >> value)) throw Error(ErrorKind::Parse, where + ": bad param");
      g.params.emplace_back(name, value);
    } else if (key == "generator") {
      std::string name;
      double a, b, c, d;
      if (!(ls >> name >> a >> b >> c >> d)) throw Error(ErrorKind::Parse, where + ": bad generator");
      g.generators.emplace_back(a, b, c, d);
      g.generator_names.push_back(name);
    } else if (key == "peripheral" || key == "boundary" || key == "curve") {
      std::string rest;
      std::getline(ls, rest);
      deferred.emplace_back(key, rest);
    } else {
      throw Error(ErrorKind::Parse, where + ": unknown key '" + key + "'");
    }
  }
  if (!have_signature) throw Error(ErrorKind::Parse, "missing signature line");
  for (const auto& [key, rest] : deferred) {
    if (key == "curve") {
      const auto colon = rest.find(':');
      if (colon == std::string::npos) throw Error(ErrorKind::Parse, "curve line needs 'name: word'");
      std::string name = rest.substr(0, colon);
      name.erase(0, name.find_first_not_of(' '));
      name.erase(name.find_last_not_of(' ') + 1);
      g.curve_words.push_back({name, parse_word(g, rest.substr(colon + 1))});
    } else {
      (key == "peripheral" ? g.peripheral_words : g.boundary_words).push_back(parse_word(g, rest));
    }
  }
  return g;
}

FuchsianGroup load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_group(buffer.str());
}

void save_group(const FuchsianGroup& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << to_text(g);
}

}  // namespace irslab
