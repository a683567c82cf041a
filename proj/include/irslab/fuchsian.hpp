#pragma once

// Discrete torsion-free groups realising finite-type surfaces.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "irslab/hyperbolic.hpp"
#include "irslab/surfaces.hpp"

namespace irslab {

/// Generator word: signed 1-based generator indices, -k for the inverse of k.
using Word = std::vector<int>;

Word inverse_word(const Word& w);
/// Cancels adjacent inverse pairs.
Word reduce_word(const Word& w);

struct NamedWord {
  std::string name;
  Word word;
};

struct FuchsianGroup {
  std::vector<Isometry> generators;
  std::vector<std::string> generator_names;
  /// None for elementary groups (trivial or cyclic).
  std::optional<SurfaceSig> signature;
  std::vector<Word> peripheral_words;  // evaluate to parabolics
  std::vector<Word> boundary_words;    // evaluate to hyperbolics; empty for lattices
  std::vector<NamedWord> curve_words;  // glued curves, usable as pinching or collar words
  std::vector<std::pair<std::string, double>> params;

  bool is_lattice() const { return signature.has_value() && boundary_words.empty(); }
  /// 2 pi |chi|, or 0 for elementary groups.
  double core_area() const;
  std::optional<double> param(const std::string& name) const;
};

Isometry evaluate(const FuchsianGroup& g, const Word& w);
std::string word_to_string(const FuchsianGroup& g, const Word& w);
Word parse_word(const FuchsianGroup& g, const std::string& text);

/// Returns h^{-1} G h: every generator replaced by its conjugate.
FuchsianGroup conjugate_group(const FuchsianGroup& g, const Isometry& h);

/// Validates peripheral words (|tr| = 2 within 1e-8) and boundary words
/// (hyperbolic). Throws ConstructionFailed naming the offending word.
void check_words(const FuchsianGroup& g);

// ---------------------------------------------------------------------------
// Constructions.

FuchsianGroup trivial_group();
FuchsianGroup cyclic_group(const Isometry& generator);

/// Generators X, Y with |tr X| = 2cosh(l1/2), |tr Y| = 2cosh(l2/2) and
/// tr XY = -2cosh(l3/2). Slot words X, Y, (XY)^{-1}; a zero length marks a cusp.
FuchsianGroup pair_of_pants(double l1, double l2, double l3);

/// Once-punctured torus with tr A = 2cosh(len_a/2) and tr[A,B] = -2. `len_b`
/// is the length of B at zero twist; `twist` is a Fenchel-Nielsen twist
/// along A (B -> B * A^{twist/len_a}). Throws ConstructionFailed when
/// sinh(len_a/2) sinh(len_b/2) < 1, which admits no such pair.
FuchsianGroup punctured_torus(double len_a, double len_b, double twist);

/// Boundary slot k of pants i.
struct PantsSlot {
  int pants = 0;
  int slot = 0;  // 0: X, 1: Y, 2: (XY)^{-1}
};

struct Gluing {
  PantsSlot a;
  PantsSlot b;
  double twist = 0.0;
  std::string name;
};

struct PantsAssembly {
  std::vector<std::array<double, 3>> pants;
  std::vector<Gluing> gluings;
};

/// Glues pants groups along equal-length boundary slots: amalgamation across
/// components, HNN extension within one. Zero twist matches the feet of the
/// seams to the next slot of each pants (to each other for two slots of the
/// same pants). Glued lengths must be positive. The result is recentred. With
/// `certify`, it must pass the Dirichlet area certificate or
/// DiscretenessCheckFailed is thrown.
FuchsianGroup assemble_surface(const PantsAssembly& assembly, bool certify = true);

/// Conjugate h^{-1} G h with h i minimising the sum over generators of
/// cosh d(h i, g h i), so that i sits centrally for long collars.
FuchsianGroup recenter(const FuchsianGroup& g);

// ---------------------------------------------------------------------------
// Enumeration.

/// Set of isometries with sign-insensitive membership. Two elements match when
/// their Frobenius distance is within tol * max(1, |g|).
class IsometrySet {
 public:
  explicit IsometrySet(double tol = 1e-9) : tol_(tol) {}

  /// Index of a stored element within tolerance, if any.
  std::optional<std::size_t> find(const Isometry& g) const;
  /// Inserts unless present; returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Isometry& g);

  std::size_t size() const { return items_.size(); }
  const Isometry& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Isometry>& items() const { return items_; }

 private:
  long long bucket(double v) const;

  double tol_;
  std::vector<Isometry> items_;
  std::unordered_multimap<long long, std::size_t> index_;
};

struct BallElement {
  Word word;
  Isometry element;
  double displacement = 0.0;
};

struct BallEnumeration {
  HPoint base = kI;
  double radius = 0.0;
  std::vector<BallElement> elements;  // sorted by matrix entries
  bool exhaustive = true;
};

struct BallOptions {
  int max_word_len = 1024;
  /// Extra displacement allowed on intermediate words; negative selects the
  /// largest generator displacement.
  double slack = -1.0;
  std::size_t max_elements = 4'000'000;
};

/// Breadth-first search over the Cayley graph. Words whose displacement
/// exceeds radius + slack are not expanded. `exhaustive` is false when the
/// word-length limit stops the search with expandable words left.
BallEnumeration enumerate_ball(const FuchsianGroup& g, const HPoint& base, double radius,
                               const BallOptions& options = {});

struct CollarResult {
  double lhs = 0.0;
  bool ok = false;
};

/// sinh(l(a)/2) sinh(l(b)/2) for two words the caller knows to intersect.
CollarResult collar_check(const FuchsianGroup& g, const Word& alpha, const Word& beta,
                          int intersection);

/// Shortest non-identity displacement of the base within radius, else +inf.
/// Throws FrontierOverflow when the enumeration is not exhaustive.
double systole_at(const FuchsianGroup& g, const HPoint& base, double radius,
                  const BallOptions& options = {});

// ---------------------------------------------------------------------------
// Text fixtures.

std::string to_text(const FuchsianGroup& g);
FuchsianGroup parse_group(const std::string& text);
FuchsianGroup load_group(const std::string& path);
void save_group(const FuchsianGroup& g, const std::string& path);

}  // namespace irslab
