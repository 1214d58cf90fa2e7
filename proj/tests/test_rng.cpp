#include <gtest/gtest.h>

#include <set>

#include "lpp/rng.hpp"

namespace lpp {
namespace {

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                     {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                     {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, UsableAtCompileTime) {
  static_assert(Philox4x32::apply({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5u);
}

TEST(DeriveSeed, DistinctAcrossIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(SiteStream, SameKeySameDraws) {
  SiteStream a(7, 3, 4);
  SiteStream b(7, 3, 4);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(SiteStream, NeighbouringSitesDiffer) {
  SiteStream a(7, 3, 4);
  SiteStream b(7, 4, 3);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(SiteStream, UniformsInRange) {
  SiteStream s(123, 0, 0);
  for (int k = 0; k < 10000; ++k) {
    const double u = s.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = s.uniform_open();
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

}  // namespace
}  // namespace lpp
