#pragma once

// Monte Carlo estimates of integrals against the invariant random subgroup of
// a lattice, their chi-weighted mixtures, and the pinching experiment.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "irslab/chabauty.hpp"
#include "irslab/domains.hpp"
#include "irslab/rng.hpp"
#include "irslab/surfaces.hpp"

namespace irslab {

// ---------------------------------------------------------------------------
// Thin parts.

/// Area of the cusp strip {0 <= x <= 1, d(z, z + 1) <= delta}: 2 sinh(delta/2).
double cusp_strip_area(double delta);

/// Area of the funnel sector {x >= 0, 1 <= |z| <= e^len, d(z, e^len z) <= delta}:
/// len * cot(alpha), sin(alpha) = sinh(len/2) / sinh(delta/2). Requires delta > len > 0.
double funnel_sector_area(double len, double delta);

struct ThinAreaCheck {
  double delta = 0.0;
  double len = 0.0;  // 0 for the cusp strip
  double closed_form = 0.0;
  double quadrature = 0.0;
  double relative_error = 0.0;
  double cusp_bound = 0.0;  // 2 sinh(delta/2)
};

/// Quadrature of the cusp strip up to a height cap; the tail above the cap,
/// 1 / y_cap, is added back analytically.
ThinAreaCheck check_cusp_strip(double delta, const AreaOptions& options = {});
/// Quadrature in polar coordinates: midpoint rows in log|z|, the boundary angle
/// of each row by bisection on the distance predicate, Simpson above it.
ThinAreaCheck check_funnel_sector(double len, double delta, const AreaOptions& options = {});

/// Area of the delta-thin part of the quotient: one cusp strip per peripheral
/// word plus two funnel sectors per glued curve shorter than delta.
double thin_area(const FuchsianGroup& g, double delta);

// ---------------------------------------------------------------------------
// Sampling.

/// Uniform proposals in (x, 1/y) over the box, so accepted points follow the
/// density 1/y^2 on the region exactly.
struct RejectionRegion {
  Box box;
  RegionPredicate inside;
};

struct SamplerLimits {
  std::uint64_t max_proposals = 1'000'000;  // per point
  double min_acceptance = 1e-4;             // over a batch of at least max_proposals
};

/// Throws RejectionStall when one point needs more than max_proposals.
HPoint sample_point(const RejectionRegion& region, CounterRng& rng, std::uint64_t* proposals = nullptr,
                    const SamplerLimits& limits = {});

/// Points of the Dirichlet domain of a lattice at i whose displacement by every
/// non-identity element exceeds delta.
class ThickDomain {
 public:
  ThickDomain(const FuchsianGroup& g, double delta);

  const FuchsianGroup& group() const { return group_; }
  const TileWalker& walker() const { return walker_; }
  double delta() const { return delta_; }
  const Box& box() const { return box_; }
  /// Rejection region over box() bound to this object.
  RejectionRegion region() const;

  bool contains(const HPoint& z) const;
  bool thin(const HPoint& z) const;
  /// 2 pi |chi| minus thin_area.
  double area() const;

 private:
  FuchsianGroup group_;
  TileWalker walker_;
  double delta_;
  Box box_;
  // thin horoballs at finite cusps as (tangency point, Euclidean diameter)
  std::vector<std::pair<double, double>> horoballs_;

  bool in_horoball(const HPoint& z) const;
};

// ---------------------------------------------------------------------------
// Functionals.

enum class FunctionalKind { SoftCount, ClippedInjRad, Constant };

struct TestFunctional {
  FunctionalKind kind = FunctionalKind::ClippedInjRad;
  double r = 0.0;  // SoftCount: full weight up to r
  double s = 1.0;  // SoftCount: ramp width; ClippedInjRad: clip; Constant: value

  static TestFunctional soft_count(double r, double s) { return {FunctionalKind::SoftCount, r, s}; }
  static TestFunctional clipped_inj_rad(double s) { return {FunctionalKind::ClippedInjRad, 0.0, s}; }
  static TestFunctional constant(double value) { return {FunctionalKind::Constant, 0.0, value}; }

  /// Displacement radius the functional looks at.
  double support() const;
  /// Supremum over discrete subgroups; +inf for SoftCount.
  double sup_abs() const;
  std::string name() const;
};

/// SoftCount: sum over non-identity h of w(d(o, h o)), w = 1 on [0, r] and
/// linear to 0 on [r, r + s]. ClippedInjRad: min(s, min d(o, h o) / 2).
double evaluate(const TestFunctional& f, const SubgroupSnapshot& s);

TestFunctional parse_functional(const std::string& text);

// ---------------------------------------------------------------------------
// Estimates.

struct IRSEstimate {
  TestFunctional functional;
  double mean = 0.0;  // conditional mean over the delta-thick part
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  /// Bound on |thick-part mean - full mean|: thin_area sup|F| / (2 pi |chi|).
  double truncation_bias_bound = 0.0;
  double acceptance = 0.0;  // accepted / proposed points
};

/// Callback seeing every sampled conjugator g and snapshot of g^{-1} G g.
using SnapshotObserver = std::function<void(std::size_t, const Isometry&, const SubgroupSnapshot&)>;

struct EstimateOptions {
  unsigned threads = 1;  // results do not depend on this
  SnapshotObserver observer;  // only with threads == 1
};

/// Sample i uses the stream split_seed(seed, i): a point z of the thick domain,
/// a rotation angle, g = (move i to z) * rotation, and F on the radius-R
/// snapshot of g^{-1} G g at i. Requires a lattice and R >= F.support().
IRSEstimate estimate_functional(const ThickDomain& domain, const TestFunctional& f, double radius,
                                std::size_t n, std::uint64_t seed, const EstimateOptions& options = {});
IRSEstimate estimate_functional(const FuchsianGroup& g, const TestFunctional& f, double radius, double delta,
                                std::size_t n, std::uint64_t seed, const EstimateOptions& options = {});

struct MixtureComponent {
  double weight = 0.0;
  FuchsianGroup group;
};

/// Pairs each entry of the spec with a group for its signature.
std::vector<MixtureComponent> mixture_components(const MixtureSpec& spec,
                                                 const std::function<FuchsianGroup(const SurfaceSig&)>& group_for);

/// Weighted sum of component estimates (component k uses split_seed(seed, k));
/// errors and bias bounds combine with the weights. Weights must sum to 1.
IRSEstimate estimate_mixture(const std::vector<MixtureComponent>& components, const TestFunctional& f,
                             double radius, double delta, std::size_t n, std::uint64_t seed,
                             const EstimateOptions& options = {});

/// Monte Carlo area of the symmetric difference of the two thick domains,
/// with proposals from `box` (default: the union of both boxes).
struct AreaMC {
  double value = 0.0;
  double std_error = 0.0;
};
AreaMC symmetric_difference_area(const ThickDomain& a, const ThickDomain& b, std::size_t n, std::uint64_t seed,
                                 std::optional<Box> box = std::nullopt);
Box union_box(const Box& a, const Box& b);

// ---------------------------------------------------------------------------
// Pinching experiment.

enum class PinchFamily {
  PuncturedTorus,      // pants (t, t, 0) with its first two boundaries glued
  GenusTwoSeparating,  // two pants (1, 1, t), each self-glued, joined along the t boundaries
};

PinchFamily parse_pinch_family(const std::string& name);  // "torus" or "genus2"
std::string to_string(PinchFamily family);

/// Member of the family at pinch length t > 0 (certified).
FuchsianGroup pinch_member(PinchFamily family, double t);
/// The curve system being pinched.
CurveSystem pinch_curves(PinchFamily family);
/// Lattice used for a limit component: pair_of_pants(0, 0, 0) for the
/// thrice-punctured sphere, pants (1, 1, 0) self-glued for the punctured torus.
FuchsianGroup reference_lattice(const SurfaceSig& sig);
/// mixture_weights of the pinched curves, one reference lattice per component.
std::vector<MixtureComponent> pinch_target(PinchFamily family);

struct DegenerationConfig {
  std::vector<double> schedule;  // strictly decreasing pinch lengths
  std::vector<TestFunctional> functionals;
  double radius = 3.0;
  double delta = 0.2;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  EstimateOptions options;
};

struct DegenerationRow {
  double t = 0.0;  // NaN for the target row
  IRSEstimate estimate;
};

struct FunctionalVerdict {
  TestFunctional functional;
  double target = 0.0;
  double target_error = 0.0;
  double final_gap = 0.0;
  double band = 0.0;  // 3 combined standard errors
  bool pass = false;
  bool inconclusive = false;  // schedule of length 1
};

struct DegenerationResult {
  std::vector<DegenerationRow> rows;  // per functional: schedule rows then the target row
  std::vector<FunctionalVerdict> verdicts;
  bool pass() const;
};

/// Estimates every functional at every schedule point of `family` and for the
/// target mixture. Seeds: split_seed(split_seed(seed, point), functional),
/// with point = schedule.size() for the target.
DegenerationResult degeneration_experiment(const std::function<FuchsianGroup(double)>& family,
                                           const std::vector<MixtureComponent>& target,
                                           const DegenerationConfig& config);

/// Columns t, functional, mean, std_error, bias_bound, n, seed.
std::string to_csv(const DegenerationResult& result);
std::string to_json(const DegenerationResult& result);

/// Sum by recursive halving; independent of evaluation order.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace irslab
