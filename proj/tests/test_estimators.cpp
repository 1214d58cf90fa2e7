#include <gtest/gtest.h>

#include <cmath>

#include "lpp/error.hpp"
#include "lpp/estimators.hpp"
#include "lpp/numerics.hpp"
#include "lpp/passage.hpp"
#include "support.hpp"

namespace lpp {
namespace {

const auto kExp1 = WeightDistribution::exponential(1.0);

void expect_well_formed(const RateEstimate& e) {
  EXPECT_LE(e.ci_low, e.p_hat);
  EXPECT_LE(e.p_hat, e.ci_high);
  EXPECT_GE(e.p_hat, 0.0);
  EXPECT_LE(e.p_hat, 1.0);
  EXPECT_EQ(std::isfinite(e.fekete_bound), e.hits > 0.0);
  if (!e.method.tilted) {
    EXPECT_EQ(e.hits, std::floor(e.hits));
    EXPECT_LE(e.hits, static_cast<double>(e.n_samples));
  }
}

double combined_se(const RateEstimate& a, const RateEstimate& b) {
  return std::hypot(a.std_err, b.std_err);
}

// ---------------------------------------------------------------------------
// Corridor

TEST(Corridor, WaypointsFormALatticePathAtUnitSpacing) {
  for (double t : {0.5, 0.25, 0.1, 0.0}) {
    for (int n : {6, 10, 17}) {
      const auto c = Corridor::make(t, n, 2);
      const auto& w = c.waypoints();
      EXPECT_EQ(w.front(), (LatticePoint{0, 0}));
      EXPECT_EQ(w.back(), (LatticePoint{n, n}));
      EXPECT_EQ(c.apex(), direction_target(t, n));
      ASSERT_EQ(w.size(), static_cast<std::size_t>(2 * n + 1));
      for (std::size_t k = 1; k < w.size(); ++k) {
        EXPECT_TRUE(w[k - 1].precedes(w[k]));
        EXPECT_EQ(w[k].level() - w[k - 1].level(), 1);
      }
    }
  }
}

TEST(Corridor, SpacingControlsGaps) {
  const auto c = Corridor::make(0.25, 40, 3, 5);
  const auto& w = c.waypoints();
  for (std::size_t k = 1; k < w.size(); ++k) {
    EXPECT_TRUE(w[k - 1].precedes(w[k]));
    EXPECT_LE(std::abs(w[k].level() - w[k - 1].level() - 5), 1);
  }
  EXPECT_EQ(w[c.apex_index()], (LatticePoint{30, 10}));
}

TEST(Corridor, MaskMatchesCovers) {
  for (int hw : {0, 1, 3}) {
    for (int spacing : {1, 4}) {
      const auto c = Corridor::make(0.3, 12, hw, spacing);
      const auto mask = c.mask(12, 12);
      for (int y = 0; y <= 12; ++y) {
        for (int x = 0; x <= 12; ++x) {
          EXPECT_EQ(mask[static_cast<std::size_t>(y) * 13 + x] != 0, c.covers({x, y}))
              << x << "," << y << " hw=" << hw << " spacing=" << spacing;
        }
      }
    }
  }
}

TEST(Corridor, ZeroHalfwidthAtUnitSpacingIsThePlantedPath) {
  const auto c = Corridor::make(0.5, 6, 0);
  int covered = 0;
  for (int y = 0; y <= 6; ++y) {
    for (int x = 0; x <= 6; ++x) covered += c.covers({x, y});
  }
  EXPECT_EQ(covered, 13);
  EXPECT_TRUE(c.covers({6, 0}));
  EXPECT_TRUE(c.covers({3, 0}));
  EXPECT_TRUE(c.covers({6, 4}));
  EXPECT_FALSE(c.covers({1, 1}));
}

TEST(Corridor, Errors) {
  EXPECT_THROW(Corridor::make(0.5, 0, 1), ExtentError);
  EXPECT_THROW(Corridor::make(0.5, 6, -1), std::invalid_argument);
  EXPECT_THROW(Corridor::make(0.5, 6, 1, 0), std::invalid_argument);
  EXPECT_THROW(Corridor::make(0.5, 6, 1, 1, 0.2), ExtentError);
}

TEST(Corridor, DefaultHalfwidth) {
  EXPECT_EQ(default_halfwidth(1), 1);
  EXPECT_EQ(default_halfwidth(8), 4);
  EXPECT_EQ(default_halfwidth(27), 9);
  EXPECT_EQ(default_halfwidth(40), 12);
  EXPECT_EQ(default_halfwidth(1000), 100);
}

// ---------------------------------------------------------------------------
// Direct tail

TEST(Tail, CornerMatchesGammaTail) {
  const auto e = estimate_tail(kExp1, 0.5, 3.0, 5, 400000, 101);
  expect_well_formed(e);
  const double truth = testing::gamma_tail(5, 15.0);
  EXPECT_NEAR(truth, 8.56641e-4, 1e-8);
  EXPECT_NEAR(e.p_hat, truth, 3.0 * e.std_err);
}

TEST(Tail, LevelZeroIsCertain) {
  const auto e = estimate_tail(kExp1, 0.1, 0.0, 8, 1000, 3);
  EXPECT_EQ(e.p_hat, 1.0);
  EXPECT_EQ(e.fekete_bound, 0.0);
  EXPECT_FALSE(std::signbit(e.fekete_bound));
}

TEST(Tail, ZeroHitsUseRuleOfThree) {
  const auto e = estimate_tail(kExp1, 0.5, 20.0, 5, 5000, 3);
  expect_well_formed(e);
  EXPECT_TRUE(e.zero_hits());
  EXPECT_EQ(e.ci_low, 0.0);
  EXPECT_DOUBLE_EQ(e.ci_high, 3.0 / 5000.0);
  EXPECT_TRUE(std::isinf(e.fekete_bound));
}

TEST(Tail, FiniteNBoundHolds) {
  for (int n : {5, 10}) {
    const auto e = estimate_tail(kExp1, 0.5, 3.0, n, 200000, 11);
    expect_well_formed(e);
    EXPECT_LE(e.ci_low, std::exp(-n * (3.0 - std::log(3.0) - 1.0)));
  }
}

TEST(Tail, Errors) {
  EXPECT_THROW(estimate_tail(kExp1, 0.5, 2.0, 5, 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate_tail(kExp1, 0.7, 2.0, 5, 10, 1), ExtentError);
  EXPECT_THROW(estimate_tail(kExp1, 0.5, 2.0, 0, 10, 1), ExtentError);
  EXPECT_THROW(estimate_tail(kExp1, 0.5, -1.0, 5, 10, 1), std::invalid_argument);
}

TEST(Tail, DeterministicAcrossWorkers) {
  const auto one = estimate_tail(kExp1, 0.2, 2.2, 12, 9000, 77, {1});
  for (unsigned w : {2u, 4u, 16u}) {
    const auto many = estimate_tail(kExp1, 0.2, 2.2, 12, 9000, 77, {w});
    EXPECT_EQ(many.p_hat, one.p_hat);
    EXPECT_EQ(many.ci_low, one.ci_low);
    EXPECT_EQ(many.ci_high, one.ci_high);
  }
}

// ---------------------------------------------------------------------------
// Tilted tail

TEST(Tilted, NullTiltReproducesDirect) {
  const auto corridor = Corridor::make(0.5, 6, 1);
  const auto direct = estimate_tail(kExp1, 0.5, 2.0, 6, 20000, 5);
  const auto tilted = estimate_tail_tilted(kExp1, 0.5, 2.0, 6, 20000, 0.0, corridor, 5);
  // Unit likelihood ratios, summed in log space.
  EXPECT_NEAR(tilted.hits, direct.hits, 1e-9 * direct.hits);
  EXPECT_NEAR(tilted.p_hat, direct.p_hat, 1e-12 * direct.p_hat);
}

TEST(Tilted, AgreesWithDirectAndGammaTail) {
  const auto corridor = Corridor::make(0.5, 6, 0);
  const auto tilted = estimate_tail_tilted(kExp1, 0.5, 2.5, 6, 200000, 0.5, corridor, 8);
  const auto direct = estimate_tail(kExp1, 0.5, 2.5, 6, 200000, 9);
  expect_well_formed(tilted);
  expect_well_formed(direct);
  EXPECT_NEAR(tilted.p_hat, direct.p_hat, 3.0 * combined_se(tilted, direct));
  const double truth = testing::gamma_tail(6, 15.0);
  EXPECT_NEAR(truth, 2.79243e-3, 1e-8);
  EXPECT_NEAR(tilted.p_hat, truth, 3.0 * tilted.std_err);
}

TEST(Tilted, NarrowerIntervalThanDirect) {
  const int n = 10;
  const auto corridor = Corridor::make(0.5, n, 0);
  const auto tilted = estimate_tail_tilted(kExp1, 0.5, 3.0, n, 100000, 2.0 / 3.0, corridor, 4);
  const auto direct = estimate_tail(kExp1, 0.5, 3.0, n, 100000, 4);
  EXPECT_LT(tilted.ci_high - tilted.ci_low, direct.ci_high - direct.ci_low);
  EXPECT_NEAR(tilted.p_hat, testing::gamma_tail(n, 30.0), 3.0 * tilted.std_err);
}

TEST(Tilted, DefaultsTiltToTheLevel) {
  const auto e = estimate_tail(kExp1, 0.5, 3.0, 10, 1000, 4, TiltedMethod{});
  EXPECT_TRUE(e.method.tilted);
  EXPECT_NEAR(e.method.lambda, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(e.method.corridor_halfwidth, default_halfwidth(10));
  EXPECT_EQ(e.method.describe().rfind("tilted(", 0), 0u);
}

TEST(Tilted, Errors) {
  const auto corridor = Corridor::make(0.5, 6, 1);
  EXPECT_THROW(estimate_tail_tilted(kExp1, 0.5, 2.0, 6, 10, 1.0, corridor, 1), DomainError);
  EXPECT_THROW(estimate_tail_tilted(kExp1, 0.25, 2.0, 6, 10, 0.5, corridor, 1), std::invalid_argument);
  EXPECT_THROW(estimate_tail_tilted(kExp1, 0.5, 2.0, 8, 10, 0.5, corridor, 1), std::invalid_argument);
}

TEST(Tilted, DeterministicAcrossWorkers) {
  const auto corridor = Corridor::make(0.25, 20, 2);
  const auto one = estimate_tail_tilted(kExp1, 0.25, 2.2, 20, 5000, 0.3, corridor, 6, {1});
  const auto many = estimate_tail_tilted(kExp1, 0.25, 2.2, 20, 5000, 0.3, corridor, 6, {8});
  EXPECT_EQ(one.p_hat, many.p_hat);
  EXPECT_EQ(one.std_err, many.std_err);
}

// ---------------------------------------------------------------------------
// Midpoint and endpoint

TEST(Midpoint, SymmetricThresholdAtLeastHalf) {
  const auto e = estimate_midpoint_tail(kExp1, 1e-9, 10, 20000, 12);
  EXPECT_GE(e.p_hat, 0.5 - (e.p_hat - e.ci_low));
}

TEST(Midpoint, CornerEventNearTheLdpPrediction) {
  const auto e = estimate_midpoint_tail(kExp1, 0.5, 6, 1000000, 13);
  ASSERT_TRUE(e.point_event);
  // At t = 1/2 the tail event is the point event.
  EXPECT_EQ(e.point_event->p_hat, e.p_hat);
  const double scaled = e.p_hat * std::exp((2.0 - 2.0 * std::log(2.0)) * 6);
  EXPECT_GE(scaled, 0.05);
  EXPECT_LE(scaled, 20.0);
}

TEST(Midpoint, NestedEventsArePairedExactly) {
  const int n = 12;
  double previous = 1.0;
  for (double t : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto e = estimate_midpoint_tail(kExp1, t, n, 20000, 21);
    EXPECT_LE(e.p_hat, previous);
    EXPECT_LE(e.point_event->p_hat, e.p_hat);
    previous = e.p_hat;
  }
}

TEST(Midpoint, TiltedAgreesWithDirectForTheCornerPoint) {
  TiltedMethod tilt;
  tilt.lambda = 0.5;
  tilt.halfwidth = 2;
  const auto tilted = estimate_midpoint_tail(kExp1, 0.5, 6, 200000, 31, tilt);
  const auto direct = estimate_midpoint_tail(kExp1, 0.5, 6, 200000, 32);
  const double se = std::hypot(tilted.point_event->std_err, direct.point_event->std_err);
  EXPECT_NEAR(tilted.point_event->p_hat, direct.point_event->p_hat, 3.0 * se);
}

TEST(Midpoint, Errors) {
  EXPECT_THROW(estimate_midpoint_tail(kExp1, 0.25, 7, 10, 1), ParityError);
  EXPECT_THROW(estimate_midpoint_tail(kExp1, 0.0, 8, 10, 1), RangeError);
  EXPECT_THROW(estimate_midpoint_tail(kExp1, 0.6, 8, 10, 1), RangeError);
  EXPECT_THROW(estimate_midpoint_tail(WeightDistribution::gamma(2, 1), 0.25, 8, 10, 1, TiltedMethod{}),
               UnsupportedLawError);
}

TEST(Midpoint, DeterministicAcrossWorkers) {
  TiltedMethod tilt;
  tilt.halfwidth = 1;
  for (const SamplingMethod& method : {SamplingMethod{DirectMethod{}}, SamplingMethod{tilt}}) {
    const auto one = estimate_midpoint_tail(kExp1, 0.25, 16, 6000, 41, method, {1});
    const auto many = estimate_midpoint_tail(kExp1, 0.25, 16, 6000, 41, method, {16});
    EXPECT_EQ(one.p_hat, many.p_hat);
    EXPECT_EQ(one.point_event->p_hat, many.point_event->p_hat);
  }
}

TEST(Endpoint, CornerTailIsThePointEvent) {
  const auto e = estimate_endpoint_tail(kExp1, 0.5, 8, 20000, 51);
  EXPECT_EQ(e.p_hat, e.point_event->p_hat);
}

TEST(Endpoint, DecreasingInN) {
  const auto a = estimate_endpoint_tail(kExp1, 0.25, 10, 20000, 52);
  const auto b = estimate_endpoint_tail(kExp1, 0.25, 20, 20000, 52);
  const auto c = estimate_endpoint_tail(kExp1, 0.25, 30, 20000, 52);
  EXPECT_LT(b.p_hat, a.p_hat + 2.0 * combined_se(a, b));
  EXPECT_LT(c.p_hat, b.p_hat + 2.0 * combined_se(b, c));
}

TEST(Endpoint, SlopeAboutHalfTheMidpointSlope) {
  std::vector<double> ns;
  std::vector<double> mid;
  std::vector<double> end;
  for (int n : {4, 6, 8, 10, 12}) {
    ns.push_back(n);
    mid.push_back(-std::log(estimate_midpoint_tail(kExp1, 0.5, n, 200000, 5).p_hat));
    end.push_back(-std::log(estimate_endpoint_tail(kExp1, 0.5, n, 200000, 5).p_hat));
  }
  const auto fm = fit_line(ns, mid);
  const auto fe = fit_line(ns, end);
  ASSERT_TRUE(fm && fe);
  EXPECT_NEAR(fe->slope / fm->slope, 0.5, 0.5 * 0.3);
}

// ---------------------------------------------------------------------------
// Shape, Fekete, monotonicity

TEST(Shape, CornerMeanIsOne) {
  const auto e = estimate_shape(kExp1, 0.5, 50, 4000, 61);
  EXPECT_NEAR(e.mean, 1.0, 3.0 * e.std_err);
  EXPECT_GT(e.std_err, 0.0);
}

TEST(Shape, SuperadditiveTrend) {
  const auto a = estimate_shape(kExp1, 0.0, 200, 100, 62);
  const auto b = estimate_shape(kExp1, 0.0, 400, 100, 62);
  EXPECT_LE(a.mean, b.mean + 3.0 * std::hypot(a.std_err, b.std_err));
  EXPECT_LT(b.mean, 2.0);
}

TEST(Shape, SingleReplicateHasZeroError) {
  const auto e = estimate_shape(kExp1, 0.0, 10, 1, 1);
  EXPECT_EQ(e.std_err, 0.0);
  EXPECT_GE(e.mean, 0.0);
}

TEST(Fekete, BoundsDominateTheClosedFormRate) {
  const double rate = 1.0 - std::log(2.0);
  const auto curve = fekete_curve(kExp1, 0.5, 2.0, {5, 10, 20}, 100000, 71);
  ASSERT_EQ(curve.size(), 3u);
  for (const auto& e : curve) {
    expect_well_formed(e);
    EXPECT_GE(-std::log(e.ci_low) / e.n, rate);
  }
  EXPECT_THROW(fekete_curve(kExp1, 0.5, 2.0, {10, 5}, 10, 1), std::invalid_argument);
}

TEST(Fekete, BelowTheMeanBoundsVanish) {
  const auto curve = fekete_curve(kExp1, 0.5, 0.5, {10, 40}, 2000, 72);
  EXPECT_LT(curve.back().fekete_bound, curve.front().fekete_bound + 1e-12);
  EXPECT_LT(curve.back().fekete_bound, 1e-3);
}

TEST(Monotone, SingleDirectionPasses) {
  const auto report = verify_monotone_in_t(kExp1, 2.2, 10, {0.3}, 1000, 1);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.estimates.size(), 1u);
}

TEST(Monotone, NondecreasingInT) {
  const auto report = verify_monotone_in_t(kExp1, 2.2, 20, {0.0, 0.2, 0.4}, 20000, 81);
  EXPECT_TRUE(report.pass);
  EXPECT_TRUE(report.zero_hit.empty());
}

TEST(Monotone, SymmetricDirections) {
  const auto plus = estimate_tail(kExp1, 0.2, 2.2, 20, 20000, 82);
  const auto minus = estimate_tail(kExp1, -0.2, 2.2, 20, 20000, 83);
  EXPECT_NEAR(plus.fekete_bound, minus.fekete_bound,
              2.0 * std::hypot(plus.fekete_std_err(), minus.fekete_std_err()));
}

TEST(Monotone, FlagsViolations) {
  std::vector<RateEstimate> fake(3);
  for (auto& e : fake) {
    e.n = 10;
    e.hits = 100;
    e.p_hat = 0.01;
    e.std_err = 0.0001;
  }
  fake[0].fekete_bound = 0.5;
  fake[1].fekete_bound = 0.3;
  fake[2].fekete_bound = std::numeric_limits<double>::infinity();
  fake[2].hits = 0;
  const auto report = check_monotone(fake);
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.violations, (std::vector<std::size_t>{0}));
  EXPECT_EQ(report.zero_hit, (std::vector<std::size_t>{2}));
  EXPECT_THROW(verify_monotone_in_t(kExp1, 2.0, 10, {0.3, 0.1}, 10, 1), std::invalid_argument);
  EXPECT_THROW(verify_monotone_in_t(kExp1, 2.0, 10, {0.1, 0.6}, 10, 1), RangeError);
}

// ---------------------------------------------------------------------------
// Left tail and the rate identity

TEST(LeftTail, TwoSiteQuadratureOracle) {
  // G(0,(1,1)) = w(1,1) + max(w(1,0), w(0,1)); P(G <= 2) by Simpson's rule.
  auto density = [](double c) { return std::exp(-c) * std::pow(1.0 - std::exp(-(2.0 - c)), 2); };
  constexpr int kPanels = 2000;
  double simpson = density(0.0) + density(2.0);
  for (int i = 1; i < kPanels; ++i) simpson += (i % 2 ? 4.0 : 2.0) * density(2.0 * i / kPanels);
  const double truth = simpson * (2.0 / kPanels) / 3.0;
  const auto e = estimate_left_tail(kExp1, 1.0, 2, 200000, 91);
  EXPECT_NEAR(e.method.lambda, -1.0, 1e-12);
  EXPECT_DOUBLE_EQ(e.r, 1.0);
  EXPECT_NEAR(e.p_hat, truth, 3.0 * e.std_err);
  const auto plain = estimate_left_tail(kExp1, 1.0, 2, 200000, 92, 0.0);
  EXPECT_NEAR(plain.p_hat, truth, 3.0 * plain.std_err);
}

TEST(LeftTail, ZeroDepthIsReported) {
  const auto report = left_tail_scan(kExp1, 0.0, {4, 8}, 2000, 93);
  ASSERT_EQ(report.estimates.size(), 2u);
  EXPECT_EQ(report.mu0, 2.0);
  for (const auto& e : report.estimates) {
    EXPECT_GT(e.p_hat, 0.0);
    EXPECT_EQ(e.method.lambda, 0.0);
  }
}

TEST(LeftTail, Errors) {
  EXPECT_THROW(estimate_left_tail(kExp1, 2.0, 4, 10, 1), RangeError);
  EXPECT_THROW(estimate_left_tail(kExp1, 1.0, 5, 10, 1), ParityError);
  EXPECT_THROW(estimate_left_tail(WeightDistribution::gamma(2, 1), 1.0, 4, 10, 1), UnsupportedLawError);
  RunOptions opts;
  opts.mu0 = 5.5;
  EXPECT_NO_THROW(estimate_left_tail(WeightDistribution::gamma(2, 1), 1.0, 4, 10, 1, std::nullopt, opts));
}

TEST(LeftTail, SuperexponentialFlag) {
  std::vector<RateEstimate> seq(3);
  for (int i = 0; i < 3; ++i) {
    seq[i].n = 4 + 2 * i;
    seq[i].hits = 10;
    seq[i].p_hat = std::exp(-0.1 * (i + 1) * seq[i].n);
    seq[i].std_err = 0.01 * seq[i].p_hat;
    seq[i].fekete_bound = 0.1 * (i + 1);
  }
  EXPECT_TRUE(is_superexponential(seq));
  seq[2].fekete_bound = 0.2001;
  EXPECT_FALSE(is_superexponential(seq));
  EXPECT_FALSE(is_superexponential({seq[0]}));
}

TEST(Identity, CornerDirectionAgainstClosedForm) {
  TiltedMethod tilt;
  tilt.halfwidth = 0;
  const auto rep = midpoint_rate_identity(kExp1, 0.5, 12, 100000, 95, tilt, tilt);
  EXPECT_GE(rep.a, 0.15);
  EXPECT_LE(rep.a, 0.55);
  ASSERT_TRUE(rep.closed_form_per_factor);
  EXPECT_NEAR(*rep.closed_form_per_factor, 1.0 - std::log(2.0), 1e-12);
  EXPECT_NEAR(rep.a, 0.5 * rep.midpoint.fekete_bound, 1e-15);
  EXPECT_EQ(rep.b, rep.passage.fekete_bound);
  EXPECT_NEAR(rep.relative_gap, std::abs(rep.a - rep.b) / std::max(rep.a, rep.b), 1e-15);
  EXPECT_EQ(rep.passage.r, 2.0);
}

TEST(Identity, Preconditions) {
  EXPECT_THROW(midpoint_rate_identity(kExp1, 0.0, 12, 10, 1), RangeError);
  EXPECT_THROW(midpoint_rate_identity(kExp1, 0.25, 11, 10, 1), ParityError);
  EXPECT_THROW(midpoint_rate_identity(WeightDistribution::gamma(2, 1), 0.25, 12, 10, 1),
               UnsupportedLawError);
}

}  // namespace
}  // namespace lpp
