#pragma once

// Topological bookkeeping for finite-type surfaces and curve systems.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irslab/error.hpp"

namespace irslab {

/// Genus and puncture count. Only hyperbolic signatures (Euler characteristic
/// below zero) can be constructed.
class SurfaceSig {
 public:
  SurfaceSig(int genus, int punctures);

  int genus() const { return genus_; }
  int punctures() const { return punctures_; }
  int euler_char() const { return 2 - 2 * genus_ - punctures_; }
  /// Maximal number of disjoint essential curves: 3g - 3 + p.
  int max_curves() const { return 3 * genus_ - 3 + punctures_; }

  bool operator==(const SurfaceSig&) const = default;
  auto operator<=>(const SurfaceSig&) const = default;

  std::string to_string() const;

 private:
  int genus_;
  int punctures_;
};

int euler_char(const SurfaceSig& s);

/// One curve of a system, with the labels of the components on its two sides.
/// Both labels coincide for a curve bounding the same component twice.
struct CurveDescriptor {
  std::string name;
  bool separating = false;
  std::string side_a;
  std::string side_b;
};

/// Component of the cut surface; boundary curves count as punctures.
struct CutComponent {
  std::string label;
  SurfaceSig sig;
};

struct CurveSystem {
  SurfaceSig surface;
  std::vector<CurveDescriptor> curves;
  std::vector<CutComponent> components;
};

/// Validates a curve system and fills in component signatures.
///
/// `declared` may list signatures for some or all component labels. Missing
/// signatures are inferred when the genus and puncture distribution is the
/// unique one compatible with hyperbolic components; otherwise the call fails.
/// Throws InconsistentCurveSystem on: empty labels, more curves than 3g-3+p,
/// disconnected incidence graph, separating tag disagreeing with the
/// incidence graph (separating iff the curve is a bridge), Euler
/// characteristic mismatch, or a component with too few punctures for its
/// incident sides.
CurveSystem cut(const SurfaceSig& surface, const std::vector<CurveDescriptor>& curves,
                const std::vector<CutComponent>& declared = {});

struct MixtureEntry {
  SurfaceSig component;
  double weight;
  // weight == numerator / denominator exactly
  int numerator;
  int denominator;
};

struct MixtureSpec {
  std::vector<MixtureEntry> entries;
};

/// Weights chi(component) / chi(surface), one entry per component in order.
MixtureSpec mixture_weights(const CurveSystem& cs);

/// (|chi|+2)!^|chi| * |chi|!; throws Overflow when it does not fit in 64 bits.
std::uint64_t fiber_bound(const SurfaceSig& s);

/// Two pants decompositions of the closed genus-2 surface, one containing a
/// separating curve and one made of non-separating curves, with the same
/// component multiset. None for every other signature.
std::optional<std::pair<CurveSystem, CurveSystem>> collision_witness(const SurfaceSig& s);

/// Structured text:
///   surface g,p
///   curve name: separating|nonseparating -> A,B
///   component label g,p
std::string to_text(const CurveSystem& cs);
CurveSystem parse_curve_system(const std::string& text);

}  // namespace irslab
