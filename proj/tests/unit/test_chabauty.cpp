#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "irslab/chabauty.hpp"

using namespace irslab;

namespace {

const double kE = std::exp(1.0);

SubgroupSnapshot walked(const FuchsianGroup& g, double radius, const Isometry& conjugator = Isometry{}) {
  const TileWalker walker(dirichlet_domain(g));
  return snapshot(walker, conjugator, kI, radius);
}

double generator_gap(const FuchsianGroup& a, const FuchsianGroup& b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.generators.size(); ++k) {
    out = std::max(out, frobenius_distance(a.generators[k], b.generators[k]));
  }
  return out;
}

// punctured tori with lenA = 2 + 1/t for t = 1, 2, 4, ..., 2048
struct ConvergingFamily {
  std::vector<SubgroupSnapshot> sequence;
  SubgroupSnapshot limit;
  double scale = 0.0;  // largest generator gap over the tail
};

ConvergingFamily converging_family(double radius) {
  ConvergingFamily f;
  const FuchsianGroup limit = punctured_torus(2, 2, 0);
  f.limit = walked(limit, radius);
  const int steps = 12;
  for (int k = 0; k < steps; ++k) {
    const FuchsianGroup g = punctured_torus(2.0 + std::ldexp(1.0, -k), 2, 0);
    f.sequence.push_back(walked(g, radius));
    if (k >= steps / 2) f.scale = std::max(f.scale, generator_gap(g, limit));
  }
  return f;
}

}  // namespace

TEST(Snapshot, IdentityConjugatorIsTheBall) {
  const FuchsianGroup g = punctured_torus(1.5, 2.5, 0.2);
  const SubgroupSnapshot s = snapshot(g, Isometry{}, kI, 3.0);
  const BallEnumeration ball = enumerate_ball(g, kI, 3.0);
  ASSERT_EQ(s.elements.size(), ball.elements.size());
  IsometrySet set;
  for (const Isometry& e : s.elements) set.insert(e);
  for (const BallElement& e : ball.elements) EXPECT_TRUE(set.find(e.element));
  EXPECT_LE(snapshot_distance(s, walked(g, 3.0)), 1e-12);
}

TEST(Snapshot, CyclicExample) {
  const FuchsianGroup g = cyclic_group(Isometry(kE, 0, 0, 1 / kE));
  const SubgroupSnapshot s = snapshot(g, Isometry{}, kI, 2.5);
  EXPECT_EQ(s.elements.size(), 3u);
}

TEST(Snapshot, InvariantsHold) {
  const SubgroupSnapshot s = walked(punctured_torus(1.5, 2.5, 0.2), 4.0, move_i_to(HPoint(0.4, 0.7)));
  IsometrySet set;
  for (const Isometry& e : s.elements) set.insert(e);
  EXPECT_TRUE(set.find(Isometry{}));
  for (const Isometry& x : s.elements) {
    EXPECT_TRUE(set.find(x.inverse()));
    for (const Isometry& y : s.elements) {
      const Isometry xy = x * y;
      if (distance(kI, apply(xy, kI)) <= 4.0 - 1e-9) {
        EXPECT_TRUE(set.find(xy));
      }
    }
  }
}

TEST(Snapshot, ConjugateGroupsMatch) {
  const FuchsianGroup g = punctured_torus(1.5, 2.5, 0.2);
  const Isometry h = move_i_to(HPoint(0.3, 1.4)) * rotation_about_i(0.7);
  const Isometry c = move_i_to(HPoint(-0.2, 0.8));
  // h G h^{-1} conjugated by h c equals G conjugated by c
  const SubgroupSnapshot a = snapshot(conjugate_group(g, h.inverse()), h * c, kI, 3.5);
  const SubgroupSnapshot b = snapshot(g, c, kI, 3.5);
  ASSERT_EQ(a.elements.size(), b.elements.size());
  for (std::size_t k = 0; k < a.elements.size(); ++k) EXPECT_TRUE(a.elements[k].approx_equal(b.elements[k], 1e-8));
}

TEST(Snapshot, BelowSystoleIsTrivial) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  const double sys = systole_at(g, kI, 6.0);
  const SubgroupSnapshot s = walked(g, 0.99 * sys);
  ASSERT_EQ(s.elements.size(), 1u);
  EXPECT_TRUE(s.elements[0] == Isometry{});
}

TEST(SnapshotDistance, MetricProperties) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> len(1.6, 2.6), twist(-0.5, 0.5);
  std::vector<SubgroupSnapshot> s;
  for (int k = 0; k < 6; ++k) s.push_back(walked(punctured_torus(len(rng), len(rng), twist(rng)), 3.5));
  for (const SubgroupSnapshot& a : s) {
    EXPECT_EQ(snapshot_distance(a, a), 0.0);
    for (const SubgroupSnapshot& b : s) {
      EXPECT_EQ(snapshot_distance(a, b), snapshot_distance(b, a));
      for (const SubgroupSnapshot& c : s) {
        EXPECT_LE(snapshot_distance(a, c), snapshot_distance(a, b) + snapshot_distance(b, c) + 1e-12);
      }
    }
  }
}

TEST(SnapshotDistance, OrderIndependent) {
  const FuchsianGroup g = punctured_torus(1.5, 2.5, 0.2);
  SubgroupSnapshot a = walked(g, 3.0);
  std::vector<Isometry> reversed(a.elements.rbegin(), a.elements.rend());
  const SubgroupSnapshot b = make_snapshot(reversed, kI, 3.0);
  EXPECT_EQ(snapshot_distance(a, b), 0.0);
}

TEST(SnapshotDistance, RejectsMismatchedRadius) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  EXPECT_THROW(snapshot_distance(walked(g, 3.0), walked(g, 3.5)), Error);
}

TEST(SnapshotDistance, LinearInPerturbation) {
  const SubgroupSnapshot limit = walked(punctured_torus(2, 2, 0), 4.0);
  const double d3 = snapshot_distance(walked(punctured_torus(2.001, 2, 0), 4.0), limit);
  const double d4 = snapshot_distance(walked(punctured_torus(2.0001, 2, 0), 4.0), limit);
  EXPECT_GT(d4, 0.0);
  // slope d / t is constant to 1%
  EXPECT_NEAR((d4 / 1e-4) / (d3 / 1e-3), 1.0, 1e-2);
}

TEST(Convergence, ConstantSequencePasses) {
  const SubgroupSnapshot s = walked(punctured_torus(2, 2, 0), 3.5);
  const std::vector<SubgroupSnapshot> seq(6, s);
  for (double eps : {1e-12, 1e-3, 1.0}) {
    const ConvergenceReport r = check_convergence(seq, s, eps);
    EXPECT_TRUE(r.passed());
    for (double d : r.distances) EXPECT_EQ(d, 0.0);
  }
}

TEST(Convergence, AlgebraicFamilyPasses) {
  const ConvergingFamily f = converging_family(4.0);
  const ConvergenceReport r = check_convergence(f.sequence, f.limit, 10.0 * f.scale);
  EXPECT_TRUE(r.c1);
  EXPECT_TRUE(r.c2);
  EXPECT_TRUE(r.violations.empty());
  for (std::size_t k = 1; k < r.distances.size(); ++k) EXPECT_LT(r.distances[k], r.distances[k - 1]);
}

TEST(Convergence, MonotoneInEpsOnFixture) {
  const ConvergingFamily f = converging_family(4.0);
  bool passed = false;
  for (double factor = 0.05; factor <= 40.0; factor *= 1.5) {
    const bool now = check_convergence(f.sequence, f.limit, factor * f.scale).passed();
    EXPECT_TRUE(now || !passed) << factor;
    passed = passed || now;
  }
  EXPECT_TRUE(passed);
}

TEST(Convergence, EscapingConjugatesFailC1) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  const TileWalker walker(dirichlet_domain(g));
  const BoundaryPoint cusp = *classify(evaluate(g, g.peripheral_words[0])).fixed_point;
  std::vector<SubgroupSnapshot> seq;
  for (int n = 1; n <= 8; ++n) seq.push_back(snapshot(walker, march_toward(kI, cusp, n), kI, 3.0));
  const ConvergenceReport r = check_convergence(seq, snapshot(walker, Isometry{}, kI, 3.0), 0.1);
  EXPECT_FALSE(r.c1);
  EXPECT_FALSE(r.passed());
}

TEST(Escape, CuspEscapeIsAbelianHorn) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  const EscapeReport r = escape_dichotomy(g, g.peripheral_words[0], 8, 3.0);
  ASSERT_EQ(r.steps.size(), 9u);
  EXPECT_TRUE(r.terminal_abelian);
  EXPECT_TRUE(r.terminal_parabolic);
  EXPECT_GT(r.terminal.elements.size(), 3u);
  for (const Isometry& x : r.terminal.elements) {
    for (const Isometry& y : r.terminal.elements) {
      EXPECT_LE(frobenius_distance(x * y * x.inverse() * y.inverse(), Isometry{}), 1e-8);
    }
  }
  // non-increasing count of non-commuting pairs after a burn-in of two steps
  for (std::size_t k = 3; k < r.steps.size(); ++k) {
    EXPECT_LE(r.steps[k].noncommuting_pairs, r.steps[k - 1].noncommuting_pairs);
  }
  EXPECT_NE(to_json(r).find("\"terminal_abelian\": true"), std::string::npos);
}

TEST(Escape, ZeroStepsIsNonElementary) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  const EscapeReport r = escape_dichotomy(g, g.peripheral_words[0], 0, 3.0);
  EXPECT_FALSE(r.terminal_abelian);
  EXPECT_GT(r.steps[0].noncommuting_pairs, 0u);
  EXPECT_THROW(escape_dichotomy(g, {1}, 2, 3.0), Error);
}

TEST(Escape, BoundedConjugatorsReturnToConjugate) {
  // conjugating by group elements gives the group back
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  const TileWalker walker(dirichlet_domain(g));
  const SubgroupSnapshot base = snapshot(walker, Isometry{}, kI, 3.0);
  const Isometry gamma = evaluate(g, {1, 2});
  Isometry c;
  for (int n = 1; n <= 4; ++n) {
    c = c * gamma;
    EXPECT_LE(snapshot_distance(snapshot(walker, c, kI, 3.0), base), 1e-6) << n;
  }
}

TEST(Convergence, ReportJson) {
  const SubgroupSnapshot s = walked(punctured_torus(2, 2, 0), 3.0);
  const std::string j = to_json(check_convergence({s, s}, s, 0.1));
  EXPECT_NE(j.find("\"passed\": true"), std::string::npos);
  EXPECT_NE(j.find("distances"), std::string::npos);
}
