#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <set>

#include "lpp/error.hpp"
#include "lpp/oracle.hpp"
#include "lpp/passage.hpp"
#include "lpp/rng.hpp"
#include "support.hpp"

namespace lpp::oracle {
namespace {

TEST(Enumeration, CountsAndDistinctMasks) {
  for (int n = 0; n <= kMaxEnumerationN; ++n) {
    const PathEnumeration paths(n);
    std::set<std::uint32_t> seen;
    std::uint32_t previous = 0;
    bool ascending = true;
    paths.for_each([&](std::uint32_t mask) {
      EXPECT_EQ(std::popcount(mask), n);
      if (!seen.empty() && mask <= previous) ascending = false;
      previous = mask;
      seen.insert(mask);
    });
    EXPECT_TRUE(ascending);
    EXPECT_EQ(seen.size(), paths.size());
    EXPECT_EQ(paths.size(), binomial(2 * n, n));
  }
  EXPECT_EQ(PathEnumeration(2).size(), 6u);
  EXPECT_EQ(PathEnumeration(10).size(), 184756u);
}

TEST(Enumeration, DecodesToLatticePaths) {
  const PathEnumeration paths(3);
  paths.for_each([&](std::uint32_t mask) {
    const auto path = paths.decode(mask);
    ASSERT_EQ(path.size(), 7u);
    EXPECT_EQ(path.front(), (LatticePoint{0, 0}));
    EXPECT_EQ(path.back(), (LatticePoint{3, 3}));
  });
  EXPECT_EQ(PathEnumeration(1).decode(0b10),
            (std::vector<LatticePoint>{{0, 0}, {1, 0}, {1, 1}}));
}

TEST(Enumeration, SizeCap) {
  EXPECT_THROW(PathEnumeration(11), RangeError);
  EXPECT_THROW(PathEnumeration(-1), RangeError);
}

TEST(BruteForce, TwoPathExample) {
  const auto field = testing::explicit_field(1, 1, {0, 3, 1, 2});
  const auto r = brute_force_passage(field, 1);
  EXPECT_EQ(r.value, 5.0);
  EXPECT_EQ(r.path, (std::vector<LatticePoint>{{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_EQ(r.paths_examined, 2u);
  EXPECT_EQ(brute_force_passage(sample_field(WeightDistribution::exponential(1.0), 2, 2, 1), 2)
                .paths_examined,
            6u);
}

TEST(BruteForce, FieldTooSmall) {
  const auto field = sample_field(WeightDistribution::exponential(1.0), 2, 3, 1);
  EXPECT_THROW(brute_force_passage(field, 3), ExtentError);
}

TEST(BruteForce, AgreesWithDynamicProgramOnRandomFields) {
  const auto exp1 = WeightDistribution::exponential(1.0);
  for (int n = 1; n <= 7; ++n) {
    for (std::uint64_t f = 0; f < 100; ++f) {
      const auto field = sample_field(exp1, n, n, derive_seed(1234, 100 * n + f));
      const auto a = compare_with_brute_force(field, n);
      EXPECT_TRUE(a.value) << "n=" << n << " field " << f;
      EXPECT_TRUE(a.path) << "n=" << n << " field " << f;
    }
  }
}

TEST(BruteForce, AgreesOnPlantedTies) {
  int tied = 0;
  for (int n = 1; n <= 7; ++n) {
    for (std::uint64_t f = 0; f < 30; ++f) {
      const auto field = integer_field(n, derive_seed(99, 100 * n + f));
      EXPECT_TRUE(compare_with_brute_force(field, n).both()) << "n=" << n << " field " << f;
      tied += last_passage(field, {0, 0}, {n, n}).tie_broken;
    }
  }
  // The integer fields really do exercise the tie-break.
  EXPECT_GT(tied, 100);
}

TEST(BruteForce, BitExactOnGammaFields) {
  const auto gamma = WeightDistribution::gamma(0.3, 2.0);
  for (std::uint64_t f = 0; f < 50; ++f) {
    EXPECT_TRUE(compare_with_brute_force(sample_field(gamma, 6, 6, f), 6).both());
  }
}

TEST(Binomial, ExactValuesAndOverflow) {
  EXPECT_EQ(binomial(4, 2), 6u);
  EXPECT_EQ(binomial(20, 10), 184756u);
  EXPECT_EQ(binomial(66, 33), 7219428434016265740ull);
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_THROW(binomial(70, 35), RangeError);
}

TEST(UniformWalk, SmallExactValues) {
  EXPECT_EQ(uniform_midpoint_prob_exact(2, 1), (std::pair<std::uint64_t, std::uint64_t>{1, 6}));
  EXPECT_EQ(uniform_midpoint_prob_exact(2, 0), (std::pair<std::uint64_t, std::uint64_t>{4, 6}));
  EXPECT_DOUBLE_EQ(uniform_midpoint_prob(2, 1), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(uniform_midpoint_prob(2, 0), 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(uniform_midpoint_prob(10, 5), 1.0 / 184756.0);
}

TEST(UniformWalk, NormalizesSymmetricUnimodal) {
  for (int n = 2; n <= 50; n += 2) {
    double total = 0.0;
    for (int k = -n / 2; k <= n / 2; ++k) {
      total += uniform_midpoint_prob(n, k);
      EXPECT_EQ(uniform_midpoint_prob(n, k), uniform_midpoint_prob(n, -k));
      if (k > 0) EXPECT_LT(uniform_midpoint_prob(n, k), uniform_midpoint_prob(n, k - 1));
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << "n=" << n;
  }
}

TEST(UniformWalk, LogGammaBranchMatchesExactBinomials) {
  for (int n = 22; n <= 32; n += 2) {
    for (int k = 0; k <= n / 2; ++k) {
      const double c = static_cast<double>(binomial(n, n / 2 + k));
      const double exact = c * c / static_cast<double>(binomial(2 * n, n));
      EXPECT_NEAR(uniform_midpoint_prob(n, k), exact, 1e-12 * exact);
    }
  }
}

TEST(UniformWalk, Errors) {
  EXPECT_THROW(uniform_midpoint_prob(3, 0), ParityError);
  EXPECT_THROW(uniform_midpoint_prob(4, 3), RangeError);
  EXPECT_THROW(uniform_corner_rate(0), ParityError);
  EXPECT_THROW(uniform_corner_rate(5), ParityError);
}

TEST(UniformWalk, CornerRate) {
  EXPECT_NEAR(uniform_corner_rate(2), 0.5 * std::log(6.0), 1e-15);
  EXPECT_NEAR(uniform_corner_rate(2), 0.895880, 1e-6);
  const double limit = 2.0 * std::log(2.0);
  EXPECT_LT(std::abs(uniform_corner_rate(50) - limit), 0.06);
  double previous = 0.0;
  for (int n = 2; n <= 100; n += 2) {
    const double rate = uniform_corner_rate(n);
    EXPECT_GT(rate, previous);
    EXPECT_LT(rate, limit);
    EXPECT_NEAR(rate, -std::log(uniform_midpoint_prob(n, n / 2)) / n, 1e-12);
    previous = rate;
  }
}

}  // namespace
}  // namespace lpp::oracle
