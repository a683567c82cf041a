#pragma once

// Radius-R snapshots of discrete subgroups as finite proxies for the
// Chabauty topology.

#include <string>
#include <vector>

#include "irslab/domains.hpp"
#include "irslab/fuchsian.hpp"

namespace irslab {

/// Elements of a subgroup that move `base` by at most `radius`, sorted by
/// canonical matrix entries. Always holds the identity and is inverse-closed.
struct SubgroupSnapshot {
  double radius = 0.0;
  HPoint base = kI;
  std::vector<Isometry> elements;
  std::string source;
};

/// Filters `elements` to the radius and canonicalises order and duplicates.
SubgroupSnapshot make_snapshot(const std::vector<Isometry>& elements, const HPoint& base, double radius,
                               std::string source = {});

/// Elements of conjugator^{-1} G conjugator moving `base` by at most `radius`,
/// from a word search around conjugator * base. Throws FrontierOverflow when
/// the search is not exhaustive.
SubgroupSnapshot snapshot(const FuchsianGroup& g, const Isometry& conjugator, const HPoint& base, double radius,
                          const BallOptions& options = {});

/// Same, from a tile walk; exact also deep inside cusps.
SubgroupSnapshot snapshot(const TileWalker& walker, const Isometry& conjugator, const HPoint& base, double radius,
                          std::string source = {});

inline constexpr double kSnapshotMargin = 0.1;

/// Hausdorff distance under the sign-minimised Frobenius metric between the
/// elements of both snapshots that move the base by at most radius - margin.
/// Throws RadiusMismatch unless radius and base agree.
double snapshot_distance(const SubgroupSnapshot& a, const SubgroupSnapshot& b, double margin = kSnapshotMargin);

struct LimitWitness {
  Isometry element;
  double worst_match = 0.0;  // largest over tail steps of the distance to the nearest element
};

struct ClusterViolation {
  std::size_t step = 0;
  Isometry element;
  double frequency = 0.0;       // share of tail steps holding an element within eps
  double limit_distance = 0.0;  // distance to the nearest limit element
};

struct ConvergenceReport {
  double eps = 0.0;
  std::size_t tail_start = 0;
  std::vector<double> distances;  // snapshot_distance(seq[k], limit)
  std::vector<LimitWitness> witnesses;
  std::vector<ClusterViolation> violations;
  bool c1 = false;  // every limit element is approximated in every tail step
  bool c2 = false;  // every recurring tail element is near the limit

  bool passed() const { return c1 && c2; }
};

/// The tail is the second half of the sequence. Limit elements are taken up to
/// radius - margin, sequence elements up to radius. A tail element recurs when
/// at least half of the tail steps hold an element within eps of it.
ConvergenceReport check_convergence(const std::vector<SubgroupSnapshot>& sequence, const SubgroupSnapshot& limit,
                                    double eps, double margin = kSnapshotMargin);

struct EscapeStep {
  double depth = 0.0;  // distance marched toward the cusp
  std::size_t size = 0;
  std::size_t noncommuting_pairs = 0;
  double distance_to_start = 0.0;  // snapshot_distance to the step-0 snapshot
};

struct EscapeReport {
  BoundaryPoint cusp = 0.0;
  std::vector<EscapeStep> steps;
  SubgroupSnapshot terminal;
  bool terminal_abelian = false;
  bool terminal_parabolic = false;  // every non-identity element is parabolic and fixes the cusp
};

/// Conjugates by g_n, the translation moving the base a distance n (n = 0 ..
/// steps) toward the fixed point of the peripheral word, and snapshots each.
/// Two elements commute when their commutator is within 1e-8 of the identity.
EscapeReport escape_dichotomy(const FuchsianGroup& g, const Word& peripheral, int steps, double radius,
                              const HPoint& base = kI);

/// Translation by `depth` along the geodesic from `base` to `target`.
Isometry march_toward(const HPoint& base, BoundaryPoint target, double depth);

std::string to_json(const ConvergenceReport& report);
std::string to_json(const EscapeReport& report);

}  // namespace irslab
