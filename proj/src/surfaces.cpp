#include "irslab/surfaces.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace irslab {

SurfaceSig::SurfaceSig(int genus, int punctures) : genus_(genus), punctures_(punctures) {
  if (genus < 0 || punctures < 0) {
    throw Error(ErrorKind::InvalidArgument, "negative genus or puncture count");
  }
  if (euler_char() >= 0) {
    throw Error(ErrorKind::InvalidArgument, "signature " + to_string() + " is not hyperbolic");
  }
}

std::string SurfaceSig::to_string() const {
  return std::to_string(genus_) + "," + std::to_string(punctures_);
}

int euler_char(const SurfaceSig& s) { return s.euler_char(); }

namespace {

[[noreturn]] void inconsistent(const std::string& why) {
  throw Error(ErrorKind::InconsistentCurveSystem, why);
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

bool connected_without(std::size_t n_vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       std::size_t skip) {
  UnionFind uf(n_vertices);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (e != skip) uf.unite(edges[e].first, edges[e].second);
  }
  for (std::size_t v = 1; v < n_vertices; ++v) {
    if (uf.find(v) != uf.find(0)) return false;
  }
  return true;
}

// Distributes genus and original punctures over the free components so that
// every component is hyperbolic. Stops after two solutions.
void distribute(const std::vector<int>& sides, std::size_t k, int genus_left, int punct_left,
                std::vector<std::pair<int, int>>& current,
                std::vector<std::vector<std::pair<int, int>>>& found) {
  if (found.size() >= 2) return;
  if (k == sides.size()) {
    if (genus_left == 0 && punct_left == 0) found.push_back(current);
    return;
  }
  for (int g = 0; g <= genus_left; ++g) {
    for (int p = 0; p <= punct_left; ++p) {
      if (2 - 2 * g - p - sides[k] > -1) continue;
      current.emplace_back(g, p);
      distribute(sides, k + 1, genus_left - g, punct_left - p, current, found);
      current.pop_back();
      if (found.size() >= 2) return;
    }
  }
}

}  // namespace

CurveSystem cut(const SurfaceSig& surface, const std::vector<CurveDescriptor>& curves,
                const std::vector<CutComponent>& declared) {
  if (static_cast<int>(curves.size()) > surface.max_curves()) {
    inconsistent(std::to_string(curves.size()) + " curves exceed the pants bound " +
                 std::to_string(surface.max_curves()));
  }

  std::vector<std::string> labels;
  std::map<std::string, std::size_t> index;
  auto intern = [&](const std::string& label) {
    if (label.empty()) inconsistent("empty component label");
    auto [it, inserted] = index.emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::map<std::string, int> seen_names;
  for (const CurveDescriptor& c : curves) {
    if (c.name.empty()) inconsistent("unnamed curve");
    if (seen_names[c.name]++) inconsistent("duplicate curve name " + c.name);
    const std::size_t a = intern(c.side_a);
    const std::size_t b = intern(c.side_b);
    edges.emplace_back(a, b);
  }
  for (const CutComponent& d : declared) intern(d.label);
  if (labels.empty()) intern("S");

  const std::size_t n = labels.size();
  if (!connected_without(n, edges, edges.size())) inconsistent("incidence graph is disconnected");

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const bool bridge = edges[e].first != edges[e].second && !connected_without(n, edges, e);
    if (bridge != curves[e].separating) {
      inconsistent("curve " + curves[e].name + " is tagged " +
                   (curves[e].separating ? "separating" : "nonseparating") +
                   " but its incidence says otherwise");
    }
  }

  std::vector<int> sides(n, 0);
  for (const auto& [a, b] : edges) {
    ++sides[a];
    ++sides[b];
  }

  const int first_betti = static_cast<int>(edges.size()) - static_cast<int>(n) + 1;
  int genus_left = surface.genus() - first_betti;
  int punct_left = surface.punctures();
  if (genus_left < 0) inconsistent("incidence graph has more cycles than the genus allows");

  std::vector<std::optional<SurfaceSig>> sigs(n);
  for (const CutComponent& d : declared) {
    const std::size_t i = index.at(d.label);
    if (sigs[i]) inconsistent("component " + d.label + " declared twice");
    if (d.sig.punctures() < sides[i]) {
      inconsistent("component " + d.label + " has fewer punctures than incident curve sides");
    }
    sigs[i] = d.sig;
    genus_left -= d.sig.genus();
    punct_left -= d.sig.punctures() - sides[i];
  }
  if (genus_left < 0 || punct_left < 0) inconsistent("Euler characteristic is not additive");

  std::vector<std::size_t> free_idx;
  std::vector<int> free_sides;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sigs[i]) {
      free_idx.push_back(i);
      free_sides.push_back(sides[i]);
    }
  }
  if (free_idx.empty()) {
    if (genus_left != 0 || punct_left != 0) inconsistent("Euler characteristic is not additive");
  } else {
    std::vector<std::pair<int, int>> current;
    std::vector<std::vector<std::pair<int, int>>> found;
    distribute(free_sides, 0, genus_left, punct_left, current, found);
    if (found.empty()) inconsistent("no hyperbolic components realise this curve system");
    if (found.size() > 1) inconsistent("component signatures are ambiguous; declare them");
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      sigs[free_idx[k]] = SurfaceSig(found[0][k].first, found[0][k].second + free_sides[k]);
    }
  }

  CurveSystem cs{surface, curves, {}};
  int chi_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cs.components.push_back({labels[i], *sigs[i]});
    chi_sum += sigs[i]->euler_char();
  }
  if (chi_sum != surface.euler_char()) inconsistent("Euler characteristic is not additive");
  return cs;
}

MixtureSpec mixture_weights(const CurveSystem& cs) {
  MixtureSpec spec;
  const int total = cs.surface.euler_char();
  int sum = 0;
  for (const CutComponent& c : cs.components) {
    const int chi = c.sig.euler_char();
    sum += chi;
    // both negative, reduce the fraction
    const int g = std::gcd(-chi, -total);
    spec.entries.push_back({c.sig, static_cast<double>(chi) / total, -chi / g, -total / g});
  }
  if (sum != total) inconsistent("Euler characteristic is not additive");
  return spec;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::Overflow, "fiber bound");
  return out;
}

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 2; k <= n; ++k) out = checked_mul(out, k);
  return out;
}

}  // namespace

std::uint64_t fiber_bound(const SurfaceSig& s) {
  const std::uint64_t chi = static_cast<std::uint64_t>(-s.euler_char());
  const std::uint64_t base = factorial(chi + 2);
  std::uint64_t first = 1;
  for (std::uint64_t k = 0; k < chi; ++k) first = checked_mul(first, base);
  return checked_mul(first, factorial(chi));
}

std::optional<std::pair<CurveSystem, CurveSystem>> collision_witness(const SurfaceSig& s) {
  if (s != SurfaceSig(2, 0)) return std::nullopt;
  CurveSystem with_separating =
      cut(s, {{"alpha1", false, "P1", "P1"}, {"gamma1", true, "P1", "P2"}, {"alpha2", false, "P2", "P2"}});
  CurveSystem all_nonseparating =
      cut(s, {{"alpha", false, "P1", "P2"}, {"beta", false, "P1", "P2"}, {"gamma", false, "P1", "P2"}});
  return std::make_pair(std::move(with_separating), std::move(all_nonseparating));
}

std::string to_text(const CurveSystem& cs) {
  std::ostringstream out;
  out << "surface " << cs.surface.to_string() << '\n';
  for (const CurveDescriptor& c : cs.curves) {
    out << "curve " << c.name << ": " << (c.separating ? "separating" : "nonseparating") << " -> "
        << c.side_a << ',' << c.side_b << '\n';
  }
  for (const CutComponent& c : cs.components) {
    out << "component " << c.label << ' ' << c.sig.to_string() << '\n';
  }
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

SurfaceSig parse_sig(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::Parse, "expected g,p in '" + text + "'");
  try {
    return SurfaceSig(std::stoi(trim(text.substr(0, comma))), std::stoi(trim(text.substr(comma + 1))));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "bad signature '" + text + "'");
  }
}

}  // namespace

CurveSystem parse_curve_system(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<SurfaceSig> surface;
  std::vector<CurveDescriptor> curves;
  std::vector<CutComponent> components;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(line.substr(space + 1));
    if (key == "surface") {
      surface = parse_sig(rest);
    } else if (key == "curve") {
      const auto colon = rest.find(':');
      const auto arrow = rest.find("->");
      const auto comma = rest.rfind(',');
      if (colon == std::string::npos || arrow == std::string::npos || comma == std::string::npos ||
          comma < arrow) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": malformed curve");
      }
      const std::string tag = trim(rest.substr(colon + 1, arrow - colon - 1));
      if (tag != "separating" && tag != "nonseparating") {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown tag " + tag);
      }
      curves.push_back({trim(rest.substr(0, colon)), tag == "separating",
                        trim(rest.substr(arrow + 2, comma - arrow - 2)), trim(rest.substr(comma + 1))});
    } else if (key == "component") {
      const auto sp = rest.find(' ');
      if (sp == std::string::npos) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": malformed component");
      }
      components.push_back({trim(rest.substr(0, sp)), parse_sig(rest.substr(sp + 1))});
    } else {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  if (!surface) throw Error(ErrorKind::Parse, "missing surface line");
  return cut(*surface, curves, components);
}

}  // namespace irslab
