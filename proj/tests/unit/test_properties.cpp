// Randomised sweeps of the invariants each module promises.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "irslab/irs.hpp"

using namespace irslab;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

HPoint random_point() { return HPoint(uniform(-2, 2), std::exp(uniform(-2, 2))); }

Isometry random_isometry() { return move_i_to(random_point()) * rotation_about_i(uniform(0, 2 * kPi)); }

Isometry random_hyperbolic() {
  const double p = uniform(-3, 3), q = p + uniform(0.1, 3) * (uniform(0, 1) < 0.5 ? 1 : -1);
  return translation_along(p, q, uniform(0.05, 4));
}

FuchsianGroup random_torus() {
  const double len_a = uniform(0.8, 3.0);
  // collar: sinh(len_a / 2) sinh(len_b / 2) >= 1
  const double len_b_min = 2.0 * std::asinh(1.0 / std::sinh(len_a / 2.0));
  return punctured_torus(len_a, len_b_min + uniform(0.05, 1.5), uniform(-0.5, 0.5));
}

}  // namespace

// ---------------------------------------------------------------------------
// hyperbolic

TEST(HyperbolicProperty, IsometriesPreserveDistance) {
  for (int k = 0; k < 300; ++k) {
    const Isometry g = random_isometry();
    const HPoint z = random_point(), w = random_point();
    EXPECT_NEAR(distance(apply(g, z), apply(g, w)), distance(z, w), 1e-10 * std::max(1.0, distance(z, w)));
  }
}

TEST(HyperbolicProperty, TranslationLengthIsAConjugacyInvariant) {
  for (int k = 0; k < 200; ++k) {
    const Isometry g = random_hyperbolic();
    const Isometry h = random_isometry();
    EXPECT_NEAR(translation_length(h * g * h.inverse()), translation_length(g), 1e-10);
  }
}

TEST(HyperbolicProperty, DisplacementIsMinimalOnTheAxis) {
  for (int k = 0; k < 100; ++k) {
    const Isometry g = random_hyperbolic();
    const IsometryClass c = classify(g);
    ASSERT_EQ(c.tag, IsometryTag::Hyperbolic);
    const auto [p, q] = *c.axis;
    // the geodesic between two real endpoints is a semicircle
    const double centre = (p + q) / 2, radius = std::abs(q - p) / 2;
    const double angle = uniform(0.2, kPi - 0.2);
    const HPoint on(centre + radius * std::cos(angle), radius * std::sin(angle));
    EXPECT_NEAR(distance(apply(g, on), on), c.length, 1e-8);
    const HPoint off(on.x(), on.y() * uniform(1.2, 3));
    EXPECT_GT(distance(apply(g, off), off), c.length);
  }
}

TEST(HyperbolicProperty, ClassifyIgnoresTheMatrixSign) {
  for (int k = 0; k < 100; ++k) {
    const Isometry g = random_isometry() * random_hyperbolic();
    const Isometry flipped(-g.a(), -g.b(), -g.c(), -g.d());
    const IsometryClass a = classify(g), b = classify(flipped);
    EXPECT_EQ(a.tag, b.tag);
    EXPECT_NEAR(a.length, b.length, 1e-12 * std::max(1.0, a.length));
    const double norm = std::hypot(std::hypot(g.a(), g.b()), std::hypot(g.c(), g.d()));
    EXPECT_LE(frobenius_distance(g, flipped), 1e-12 * norm);
  }
}

// ---------------------------------------------------------------------------
// surfaces

TEST(SurfacesProperty, CutsAddUpAndWeightsSumToOne) {
  std::vector<CurveSystem> systems;
  systems.push_back(cut(SurfaceSig(1, 1), {{"a", false, "P", "P"}}));
  systems.push_back(cut(SurfaceSig(2, 0), {{"s", true, "L", "R"}}));
  systems.push_back(cut(SurfaceSig(0, 5), {{"c", true, "A", "B"}}, {{"A", SurfaceSig(0, 3)}}));
  systems.push_back(cut(SurfaceSig(1, 2), {{"a", false, "P", "P"}}));
  const auto witness = collision_witness(SurfaceSig(2, 0));
  systems.push_back(witness->first);
  systems.push_back(witness->second);
  for (const CurveSystem& cs : systems) {
    int chi = 0;
    for (const CutComponent& c : cs.components) chi += c.sig.euler_char();
    EXPECT_EQ(chi, cs.surface.euler_char());
    const MixtureSpec m = mixture_weights(cs);
    int numerators = 0;
    double weights = 0.0;
    for (const MixtureEntry& e : m.entries) {
      EXPECT_EQ(e.denominator, m.entries.front().denominator);
      numerators += e.numerator;
      weights += e.weight;
    }
    EXPECT_EQ(numerators, m.entries.front().denominator);
    EXPECT_EQ(weights, 1.0);
  }
}

// ---------------------------------------------------------------------------
// fuchsian

TEST(FuchsianProperty, PeripheralWordsAreParabolic) {
  std::vector<FuchsianGroup> groups;
  for (int k = 0; k < 10; ++k) groups.push_back(random_torus());
  groups.push_back(pair_of_pants(0, 0, 0));
  groups.push_back(pair_of_pants(0, 0, 1.2));
  groups.push_back(pinch_member(PinchFamily::PuncturedTorus, uniform(0.1, 1)));
  for (const FuchsianGroup& g : groups) {
    for (const Word& w : g.peripheral_words) {
      EXPECT_NEAR(std::abs(evaluate(g, w).trace()), 2.0, 1e-8) << word_to_string(g, w);
    }
  }
}

TEST(FuchsianProperty, CollarInequalityOnRandomTori) {
  for (int k = 0; k < 20; ++k) {
    const FuchsianGroup g = random_torus();
    // A and B meet once, as do A and AB
    for (const Word& partner : {Word{2}, Word{1, 2}}) {
      const CollarResult c = collar_check(g, {1}, partner, 1);
      EXPECT_GE(c.lhs, 1.0 - 1e-9);
      EXPECT_TRUE(c.ok);
    }
  }
}

TEST(FuchsianProperty, BallsAreNested) {
  for (int k = 0; k < 5; ++k) {
    const FuchsianGroup g = random_torus();
    const HPoint z = random_point();
    const double small = uniform(1, 2.5), large = small + uniform(0, 1);
    const BallEnumeration a = enumerate_ball(g, z, small), b = enumerate_ball(g, z, large);
    IsometrySet big;
    for (const BallElement& e : b.elements) big.insert(e.element);
    for (const BallElement& e : a.elements) EXPECT_TRUE(big.find(e.element));
  }
}

TEST(FuchsianProperty, TwistLeavesGluedLengthsAlone) {
  for (int k = 0; k < 3; ++k) {
    PantsAssembly a;
    a.pants = {{1.1, 1.1, 0.8}, {1.3, 1.3, 0.8}};
    a.gluings = {{{0, 0}, {0, 1}, 0.0, "a1"}, {{1, 0}, {1, 1}, 0.0, "a2"}, {{0, 2}, {1, 2}, 0.0, "s"}};
    const FuchsianGroup flat = assemble_surface(a, false);
    for (Gluing& gl : a.gluings) gl.twist = uniform(-1, 1);
    const FuchsianGroup twisted = assemble_surface(a, false);
    ASSERT_EQ(flat.curve_words.size(), twisted.curve_words.size());
    for (std::size_t c = 0; c < flat.curve_words.size(); ++c) {
      EXPECT_NEAR(translation_length(evaluate(twisted, twisted.curve_words[c].word)),
                  translation_length(evaluate(flat, flat.curve_words[c].word)), 1e-9);
    }
    EXPECT_NEAR(certify_group(twisted), 4 * kPi, 1e-6);
  }
}

TEST(FuchsianProperty, ShortElementsArePinchedPowers) {
  // On a pinched torus, every short hyperbolic element is a power of the pinched curve.
  const double t = 0.0625, eps = 0.5;
  const FuchsianGroup g = pinch_member(PinchFamily::PuncturedTorus, t);
  const TileWalker walker(dirichlet_domain(g));
  const auto [p, q] = *classify(evaluate(g, g.curve_words[0].word)).axis;
  std::vector<HPoint> points;
  for (int k = 0; k < 10; ++k) points.push_back(random_point());
  for (double angle : {0.5, 1.5, 2.5}) {  // on the pinched geodesic
    const double centre = (p + q) / 2, radius = std::abs(q - p) / 2;
    points.emplace_back(centre + radius * std::cos(angle), radius * std::sin(angle));
  }
  std::size_t short_seen = 0;
  for (const HPoint& z : points) {
    for (const Isometry& e : walker.ball_at(z, 4.0)) {
      const double len = translation_length(e);
      if (len == 0.0 || len >= eps) continue;
      ++short_seen;
      const double power = len / t;
      EXPECT_NEAR(power, std::round(power), 1e-6);
    }
  }
  EXPECT_GT(short_seen, 0u);
}

// ---------------------------------------------------------------------------
// domains and chabauty

TEST(DomainProperty, AreaCertificateSurvivesConjugation) {
  for (int k = 0; k < 5; ++k) {
    const FuchsianGroup g = random_torus();
    const Isometry h = random_isometry();
    EXPECT_NEAR(polygon_area(dirichlet_domain(conjugate_group(g, h))), 2 * kPi, 1e-6);
  }
}

TEST(DomainProperty, HalfOpenTilingOnRandomConjugates) {
  const FuchsianGroup g = conjugate_group(random_torus(), random_isometry());
  const TileWalker walker(dirichlet_domain(g));
  for (int k = 0; k < 1000; ++k) {
    const HPoint z = random_point();
    const HPoint in = apply(walker.locate(z).inverse(), z);
    // k in D forces d(k, o) <= d(k, g o) = d(in, o), so candidates move `in` by at most twice that
    int hits = 0;
    for (const Isometry& e : walker.ball_at(in, 2.0 * distance(in, walker.domain().base) + 1e-6)) {
      hits += contains_half_open(walker.domain(), apply(e, in));
    }
    EXPECT_EQ(hits, 1);
  }
}

TEST(ChabautyProperty, SnapshotBelowSystoleIsTrivial) {
  for (int k = 0; k < 10; ++k) {
    const FuchsianGroup g = random_torus();
    const TileWalker walker(dirichlet_domain(g));
    const Isometry c = random_isometry();
    const double cap = 3.0;
    const double sys = walker.systole_at(apply(c, kI), cap);
    const SubgroupSnapshot s = snapshot(walker, c, kI, std::min(0.999 * sys, cap));
    EXPECT_EQ(s.elements.size(), 1u);
  }
}

TEST(ChabautyProperty, DistanceIsConjugationEquivariant) {
  // conjugating both groups by the same element moves both snapshots together
  for (int k = 0; k < 5; ++k) {
    const FuchsianGroup a = random_torus(), b = random_torus();
    const Isometry h = rotation_about_i(uniform(0, 2 * kPi));
    const double plain = snapshot_distance(snapshot(a, Isometry{}, kI, 3.0), snapshot(b, Isometry{}, kI, 3.0));
    const double moved = snapshot_distance(snapshot(a, h, kI, 3.0), snapshot(b, h, kI, 3.0));
    EXPECT_NEAR(plain, moved, 1e-9);
  }
}

// ---------------------------------------------------------------------------
// irs

TEST(IrsProperty, EmittedMixtureWeightsSumToOne) {
  for (PinchFamily f : {PinchFamily::PuncturedTorus, PinchFamily::GenusTwoSeparating}) {
    double total = 0.0;
    for (const MixtureComponent& c : pinch_target(f)) total += c.weight;
    EXPECT_EQ(total, 1.0);
  }
}

TEST(IrsProperty, ConstantFunctionalIsNormalisedOnEveryFixture) {
  for (const FuchsianGroup& g : {random_torus(), pair_of_pants(0, 0, 0), pinch_member(PinchFamily::GenusTwoSeparating, 0.5)}) {
    const IRSEstimate e = estimate_functional(g, TestFunctional::constant(1), 3.0, 0.2, 200, 1);
    EXPECT_EQ(e.mean, 1.0);
  }
}
