#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "irslab/irs.hpp"

using namespace irslab;

namespace {

double combined(const IRSEstimate& a, const IRSEstimate& b) { return std::hypot(a.std_error, b.std_error); }

const FuchsianGroup& pants() {
  static const FuchsianGroup g = pair_of_pants(0, 0, 0);
  return g;
}

const ThickDomain& pants_thick() {
  static const ThickDomain d(pants(), 0.2);
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(ThinParts, CuspStripMatchesClosedForm) {
  for (double delta : {0.5, 1.0, 2.0, 4.0}) {
    const ThinAreaCheck c = check_cusp_strip(delta);
    EXPECT_LE(c.relative_error, 1e-4) << delta;
    EXPECT_DOUBLE_EQ(c.closed_form, 2.0 * std::sinh(delta / 2.0));
  }
}

TEST(ThinParts, FunnelSectorMatchesClosedFormAndCuspBound) {
  for (double len : {0.25, 0.5, 1.0}) {
    for (double delta : {1.5, 2.0, 4.0}) {
      const ThinAreaCheck c = check_funnel_sector(len, delta);
      EXPECT_LE(c.relative_error, 1e-4) << len << " " << delta;
      EXPECT_LE(c.closed_form, c.cusp_bound) << len << " " << delta;
    }
  }
}

TEST(ThinParts, FunnelExampleValue) {
  // scipy: 1 / tan(asin(sinh(0.5) / sinh(1)))
  EXPECT_NEAR(funnel_sector_area(1.0, 2.0), 2.021425553818514, 1e-12);
  EXPECT_LE(funnel_sector_area(1.0, 2.0), 2.0 * std::sinh(1.0));
  EXPECT_THROW(funnel_sector_area(2.0, 1.0), Error);
}

TEST(ThinParts, ThinAreaCountsCuspsAndShortCurves) {
  EXPECT_NEAR(thin_area(pants(), 0.2), 3.0 * cusp_strip_area(0.2), 1e-15);
  const FuchsianGroup torus = pinch_member(PinchFamily::PuncturedTorus, 0.125);
  EXPECT_NEAR(thin_area(torus, 0.2), cusp_strip_area(0.2) + 2.0 * funnel_sector_area(0.125, 0.2), 1e-12);
  EXPECT_NEAR(thin_area(torus, 0.1), cusp_strip_area(0.1), 1e-15);
}

// ---------------------------------------------------------------------------

TEST(Sampler, MeanHeightMatchesQuadrature) {
  // scipy dblquad of y / y^2 over [0,1] x [1,2] divided by the area; variance 0.0781879
  const double mean_oracle = 1.3862943611198912;
  const double var_oracle = 0.07818794432719312;
  const RejectionRegion region{Box{0, 1, 1, 2}, [](const HPoint&) { return true; }};
  const std::size_t n = 40000;
  double sum = 0.0;
  std::uint64_t proposals = 0;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(split_seed(5, i));
    sum += sample_point(region, rng, &proposals).y();
  }
  EXPECT_EQ(proposals, n);  // the box itself is never rejected
  EXPECT_NEAR(sum / n, mean_oracle, 3.0 * std::sqrt(var_oracle / n));
}

TEST(Sampler, CongruentBoxesSplitEvenly) {
  const Box left{0, 1, 1, 2}, right{2, 3, 1, 2};
  auto in = [](const Box& b, const HPoint& z) {
    return z.x() >= b.x_min && z.x() <= b.x_max && z.y() >= b.y_min && z.y() <= b.y_max;
  };
  const RejectionRegion region{Box{0, 3, 1, 2}, [&](const HPoint& z) { return in(left, z) || in(right, z); }};
  const std::size_t n = 20000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(split_seed(8, i));
    hits += in(left, sample_point(region, rng));
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(Sampler, PointsLieInTheThickDomain) {
  const ThickDomain& d = pants_thick();
  const RejectionRegion region = d.region();
  for (std::size_t i = 0; i < 500; ++i) {
    CounterRng rng(split_seed(2, i));
    const HPoint z = sample_point(region, rng);
    EXPECT_TRUE(d.contains(z));
    EXPECT_TRUE(contains(d.walker().domain(), z));
    EXPECT_FALSE(d.thin(z));
  }
}

TEST(Sampler, StallIsReported) {
  const RejectionRegion region{Box{0, 1, 1, 2}, [](const HPoint&) { return false; }};
  CounterRng rng(1);
  try {
    sample_point(region, rng, nullptr, SamplerLimits{1000, 1e-4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RejectionStall);
  }
}

TEST(ThickDomain, ConjugatedCuspsKeepAFiniteBox) {
  // finite cusps whose thin test is unreliable within 1e-8 of the boundary
  const FuchsianGroup g = conjugate_group(pants(), rotation_about_i(0.4) * dilation(1.3));
  const ThickDomain d(g, 0.2);
  EXPECT_GT(d.box().y_min, 1e-3);
  EXPECT_LT(box_area(d.box()), 1e3);
  const IRSEstimate e = estimate_functional(d, TestFunctional::constant(1), 3.0, 200, 4);
  EXPECT_EQ(e.mean, 1.0);
}

TEST(ThickDomain, AreaAndBox) {
  const ThickDomain& d = pants_thick();
  EXPECT_NEAR(d.area(), 2 * kPi - 3 * cusp_strip_area(0.2), 1e-12);
  // the thick part is compact, so the box is finite
  EXPECT_GT(d.box().y_min, 0.0);
  EXPECT_TRUE(std::isfinite(d.box().y_max));
  AreaOptions opts;
  opts.method = AreaMethod::MonteCarlo;
  opts.samples = 40000;
  const AreaEstimate a = area_region([&](const HPoint& z) { return d.contains(z); }, d.box(), opts);
  EXPECT_NEAR(a.value, d.area(), 3.0 * a.std_error);
  EXPECT_THROW(ThickDomain(cyclic_group(Isometry(2, 0, 0, 0.5)), 0.2), Error);
}

// ---------------------------------------------------------------------------

TEST(Functional, ParseAndName) {
  for (const char* text : {"SoftCount(1,0.5)", "ClippedInjRad(1)", "Constant(1)"}) {
    EXPECT_EQ(parse_functional(text).name(), text);
  }
  const TestFunctional f = parse_functional(" SoftCount( 2 , 0.25 ) ");
  EXPECT_EQ(f.kind, FunctionalKind::SoftCount);
  EXPECT_EQ(f.r, 2.0);
  EXPECT_EQ(f.s, 0.25);
  EXPECT_EQ(f.support(), 2.25);
  EXPECT_TRUE(std::isinf(f.sup_abs()));
  EXPECT_EQ(TestFunctional::clipped_inj_rad(1.5).sup_abs(), 1.5);
  for (const char* bad : {"SoftCount(1)", "Foo(1)", "ClippedInjRad(-1)", "SoftCount(1,0.5", ""}) {
    EXPECT_THROW(parse_functional(bad), Error) << bad;
  }
}

TEST(Functional, EvaluatesSnapshots) {
  const double e = std::exp(1.0);
  // <z -> e^2 z> moves i by 2, its square by 4
  const SubgroupSnapshot s = make_snapshot({Isometry(e, 0, 0, 1 / e), Isometry(1 / e, 0, 0, e)}, kI, 3.0);
  EXPECT_DOUBLE_EQ(evaluate(TestFunctional::clipped_inj_rad(1.5), s), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(TestFunctional::clipped_inj_rad(0.5), s), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(TestFunctional::soft_count(2, 1), s), 2.0);
  EXPECT_NEAR(evaluate(TestFunctional::soft_count(1.5, 1), s), 1.0, 1e-12);  // each h at weight 1/2
  EXPECT_EQ(evaluate(TestFunctional::soft_count(1, 0.5), s), 0.0);
  EXPECT_THROW(evaluate(TestFunctional::clipped_inj_rad(2), s), Error);  // needs radius 4
  const SubgroupSnapshot trivial = make_snapshot({}, kI, 3.0);
  EXPECT_EQ(evaluate(TestFunctional::clipped_inj_rad(1), trivial), 1.0);
  EXPECT_EQ(evaluate(TestFunctional::soft_count(1, 1), trivial), 0.0);
}

// ---------------------------------------------------------------------------

TEST(Estimate, ConstantIsExactlyOne) {
  const IRSEstimate e = estimate_functional(pants_thick(), TestFunctional::constant(1), 3.0, 1000, 1);
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.n_samples, 1000u);
}

TEST(Estimate, SoftCountInsideTheThickRadiusIsZero) {
  // on the delta-thick part no non-identity element moves o by delta or less
  const IRSEstimate e = estimate_functional(pants(), TestFunctional::soft_count(0.2, 0.2), 3.0, 0.5, 500, 4);
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
  // likewise on a closed surface
  const FuchsianGroup closed = pinch_member(PinchFamily::GenusTwoSeparating, 1.0);
  const IRSEstimate c = estimate_functional(closed, TestFunctional::soft_count(0.05, 0.05), 3.0, 0.1, 300, 4);
  EXPECT_EQ(c.mean, 0.0);
}

TEST(Estimate, BiasBoundFollowsThinArea) {
  const IRSEstimate e = estimate_functional(pants_thick(), TestFunctional::clipped_inj_rad(1), 3.0, 200, 3);
  EXPECT_NEAR(e.truncation_bias_bound, 3.0 * 2.0 * std::sinh(0.1) * 1.0 / (2 * kPi), 1e-12);
  EXPECT_EQ(e.delta, 0.2);
  EXPECT_GT(e.acceptance, 0.0);
  EXPECT_LE(e.acceptance, 1.0);
  const IRSEstimate s = estimate_functional(pants_thick(), TestFunctional::soft_count(1, 0.5), 3.0, 200, 3);
  EXPECT_TRUE(std::isinf(s.truncation_bias_bound));
}

TEST(Estimate, RejectsShortRadius) {
  EXPECT_THROW(estimate_functional(pants_thick(), TestFunctional::soft_count(2, 1), 2.5, 10, 1), Error);
  EXPECT_THROW(estimate_functional(pants_thick(), TestFunctional::clipped_inj_rad(1), 3.0, 0, 1), Error);
}

TEST(Estimate, ConjugationInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-1, 1), logy(-1, 1), angle(0, 2 * kPi);
  const FuchsianGroup g = punctured_torus(2, 2, 0.3);
  for (const TestFunctional& f : {TestFunctional::clipped_inj_rad(1), TestFunctional::soft_count(1, 0.5)}) {
    const IRSEstimate base = estimate_functional(g, f, 3.0, 0.2, 3000, 21);
    for (int k = 0; k < 3; ++k) {
      const Isometry h = move_i_to(HPoint(x(rng), std::exp(logy(rng)))) * rotation_about_i(angle(rng));
      const IRSEstimate moved = estimate_functional(conjugate_group(g, h), f, 3.0, 0.2, 3000, 100 + k);
      EXPECT_LE(std::abs(moved.mean - base.mean), 3.0 * combined(moved, base)) << f.name() << " " << k;
    }
  }
}

TEST(Estimate, ClippedInjRadIgnoresTheRotation) {
  const TileWalker& walker = pants_thick().walker();
  const HPoint z(0.1, 1.3);
  const TestFunctional f = TestFunctional::clipped_inj_rad(1);
  const double ref = evaluate(f, snapshot(walker, move_i_to(z), kI, 3.0));
  for (double angle : {0.3, 1.7, 2.9, 5.5}) {
    EXPECT_NEAR(evaluate(f, snapshot(walker, move_i_to(z) * rotation_about_i(angle), kI, 3.0)), ref, 1e-12);
  }
}

TEST(Estimate, ThreadCountDoesNotChangeTheResult) {
  const TestFunctional f = TestFunctional::soft_count(1, 0.5);
  EstimateOptions many;
  many.threads = 4;
  const IRSEstimate a = estimate_functional(pants_thick(), f, 3.0, 777, 9);
  const IRSEstimate b = estimate_functional(pants_thick(), f, 3.0, 777, 9, many);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.acceptance, b.acceptance);
}

TEST(Estimate, EverySnapshotIsAConjugateOfTheGroup) {
  const ThickDomain& d = pants_thick();
  std::size_t calls = 0;
  EstimateOptions opts;
  opts.observer = [&](std::size_t, const Isometry& g, const SubgroupSnapshot& s) {
    ++calls;
    for (const Isometry& e : s.elements) {
      // g e g^{-1} must be a group element: it maps the domain onto a tile
      const Isometry gamma = g * e * g.inverse();
      const Isometry tile = d.walker().locate(apply(gamma, kI));
      EXPECT_TRUE(tile.approx_equal(gamma, 1e-7));
    }
  };
  estimate_functional(d, TestFunctional::soft_count(1, 0.5), 3.0, 200, 6, opts);
  EXPECT_EQ(calls, 200u);
  opts.threads = 2;
  EXPECT_THROW(estimate_functional(d, TestFunctional::soft_count(1, 0.5), 3.0, 10, 6, opts), Error);
}

TEST(Estimate, SeparatesNonConjugateTori) {
  const TestFunctional f = TestFunctional::clipped_inj_rad(1);
  const IRSEstimate a = estimate_functional(punctured_torus(1, 3, 0), f, 3.0, 0.2, 4000, 1);
  const IRSEstimate b = estimate_functional(punctured_torus(2, 3, 0), f, 3.0, 0.2, 4000, 2);
  EXPECT_GT(std::abs(a.mean - b.mean), 5.0 * combined(a, b));
}

// ---------------------------------------------------------------------------

TEST(Mixture, SingleComponentIsThePlainEstimate) {
  const TestFunctional f = TestFunctional::clipped_inj_rad(1);
  const IRSEstimate m = estimate_mixture({{1.0, pants()}}, f, 3.0, 0.2, 800, 17);
  const IRSEstimate e = estimate_functional(pants(), f, 3.0, 0.2, 800, split_seed(17, 0));
  EXPECT_EQ(m.mean, e.mean);
  EXPECT_EQ(m.std_error, e.std_error);
  EXPECT_EQ(m.truncation_bias_bound, e.truncation_bias_bound);
}

TEST(Mixture, IdenticalHalvesMatchOneComponent) {
  const TestFunctional f = TestFunctional::soft_count(1, 0.5);
  const IRSEstimate m = estimate_mixture({{0.5, pants()}, {0.5, pants()}}, f, 3.0, 0.2, 1500, 3);
  const IRSEstimate e = estimate_functional(pants(), f, 3.0, 0.2, 1500, 99);
  EXPECT_LE(std::abs(m.mean - e.mean), 3.0 * combined(m, e));
  EXPECT_THROW(estimate_mixture({{0.5, pants()}, {0.4, pants()}}, f, 3.0, 0.2, 10, 3), Error);
  EXPECT_THROW(estimate_mixture({}, f, 3.0, 0.2, 10, 3), Error);
}

TEST(Mixture, GenusTwoCollision) {
  const auto witness = collision_witness(SurfaceSig(2, 0));
  ASSERT_TRUE(witness.has_value());
  const TestFunctional f = TestFunctional::clipped_inj_rad(1);
  const auto first = mixture_components(mixture_weights(witness->first), reference_lattice);
  const auto second = mixture_components(mixture_weights(witness->second), reference_lattice);
  const IRSEstimate a = estimate_mixture(first, f, 3.0, 0.2, 2000, 1);
  const IRSEstimate b = estimate_mixture(second, f, 3.0, 0.2, 2000, 2);
  const IRSEstimate plain = estimate_functional(pants(), f, 3.0, 0.2, 2000, 3);
  EXPECT_LE(std::abs(a.mean - b.mean), 3.0 * combined(a, b));
  EXPECT_LE(std::abs(a.mean - plain.mean), 3.0 * combined(a, plain));
}

TEST(Mixture, PinchTargets) {
  const auto torus = pinch_target(PinchFamily::PuncturedTorus);
  ASSERT_EQ(torus.size(), 1u);
  EXPECT_EQ(torus[0].weight, 1.0);
  EXPECT_EQ(*torus[0].group.signature, SurfaceSig(0, 3));
  const auto genus2 = pinch_target(PinchFamily::GenusTwoSeparating);
  ASSERT_EQ(genus2.size(), 2u);
  EXPECT_EQ(genus2[0].weight + genus2[1].weight, 1.0);
  EXPECT_EQ(*genus2[1].group.signature, SurfaceSig(1, 1));
  EXPECT_THROW(reference_lattice(SurfaceSig(0, 4)), Error);
  EXPECT_EQ(parse_pinch_family("genus2"), PinchFamily::GenusTwoSeparating);
  EXPECT_THROW(parse_pinch_family("sphere"), Error);
}

// ---------------------------------------------------------------------------

TEST(SymmetricDifference, VanishesForEqualGroups) {
  const AreaMC a = symmetric_difference_area(pants_thick(), pants_thick(), 2000, 1);
  EXPECT_EQ(a.value, 0.0);
  EXPECT_EQ(a.std_error, 0.0);
}

TEST(SymmetricDifference, DecreasesAlongConvergingTori) {
  const ThickDomain limit(punctured_torus(2, 2, 0), 0.2);
  double previous = kInf;
  for (int k = 0; k < 5; ++k) {
    const ThickDomain member(punctured_torus(2 + std::ldexp(1.0, -2 * k), 2, 0), 0.2);
    const AreaMC a = symmetric_difference_area(member, limit, 20000, 7);
    EXPECT_LE(a.value, member.area() + limit.area());
    EXPECT_LT(a.value + 2.0 * a.std_error, previous) << k;
    previous = a.value;
  }
  EXPECT_LT(previous, 0.05);
}

// ---------------------------------------------------------------------------

namespace {

DegenerationConfig small_config() {
  DegenerationConfig c;
  c.schedule = {1.0, 0.5, 0.25};
  c.functionals = {TestFunctional::clipped_inj_rad(1), TestFunctional::soft_count(1, 0.5)};
  c.n = 1500;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(Degeneration, ConstantFamilyIsAControl) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  const DegenerationResult r = degeneration_experiment([&](double) { return g; }, {{1.0, g}}, small_config());
  ASSERT_EQ(r.rows.size(), 8u);
  ASSERT_EQ(r.verdicts.size(), 2u);
  for (const FunctionalVerdict& v : r.verdicts) EXPECT_TRUE(v.pass) << v.functional.name();
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    for (std::size_t j = 0; j < r.rows.size(); ++j) {
      const IRSEstimate& a = r.rows[k].estimate;
      const IRSEstimate& b = r.rows[j].estimate;
      if (a.functional.name() != b.functional.name()) continue;
      EXPECT_LE(std::abs(a.mean - b.mean), 4.0 * combined(a, b));
    }
  }
  EXPECT_TRUE(r.pass());
}

TEST(Degeneration, ScheduleValidation) {
  const FuchsianGroup g = punctured_torus(2, 2, 0);
  auto family = [&](double) { return g; };
  DegenerationConfig c = small_config();
  c.schedule = {1.0, 1.0};
  EXPECT_THROW(degeneration_experiment(family, {{1.0, g}}, c), Error);
  c.schedule = {};
  EXPECT_THROW(degeneration_experiment(family, {{1.0, g}}, c), Error);
  c.schedule = {0.5};
  c.n = 200;
  const DegenerationResult r = degeneration_experiment(family, {{1.0, g}}, c);
  for (const FunctionalVerdict& v : r.verdicts) EXPECT_TRUE(v.inconclusive);
  EXPECT_NE(to_json(r).find("INCONCLUSIVE"), std::string::npos);
}

TEST(Degeneration, FailingStepNamesTheParameter) {
  DegenerationConfig c = small_config();
  c.n = 50;
  try {
    degeneration_experiment([](double t) -> FuchsianGroup {
      if (t < 0.4) throw Error(ErrorKind::DiscretenessCheckFailed, "bad");
      return punctured_torus(2, 2, 0);
    }, {{1.0, punctured_torus(2, 2, 0)}}, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DiscretenessCheckFailed);
    EXPECT_NE(std::string(e.what()).find("t = 0.25"), std::string::npos) << e.what();
  }
}

TEST(Degeneration, CsvIsDeterministic) {
  DegenerationConfig c = small_config();
  c.n = 300;
  auto family = [](double t) { return pinch_member(PinchFamily::PuncturedTorus, t); };
  const auto target = pinch_target(PinchFamily::PuncturedTorus);
  const std::string a = to_csv(degeneration_experiment(family, target, c));
  c.options.threads = 3;
  const std::string b = to_csv(degeneration_experiment(family, target, c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "t,functional,mean,std_error,bias_bound,n,seed");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 9);
  EXPECT_NE(a.find("\ntarget,"), std::string::npos);
}

TEST(Reduction, PairwiseSum) {
  std::vector<double> v(1001);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / static_cast<double>(k + 1);
  double naive = 0.0;
  for (double x : v) naive += x;
  EXPECT_NEAR(pairwise_sum(v.data(), v.size()), naive, 1e-12);
  EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
  EXPECT_EQ(pairwise_sum(v.data(), 1), 1.0);
}
