#include <gtest/gtest.h>

#include "mvpdl/error.hpp"
#include "mvpdl/truth.hpp"

namespace mvpdl {
namespace {

TruthValue tv(int i, int n) { return TruthValue(i, Resolution(n)); }

TEST(Resolution, RejectsZeroSteps) { EXPECT_THROW(Resolution(0), Error); }

TEST(TruthValue, RejectsOutOfRangeNumerator) {
  EXPECT_THROW(tv(5, 4), Error);
  EXPECT_THROW(tv(-1, 4), Error);
}

TEST(TruthValue, PrintsUnreducedFraction) {
  EXPECT_EQ(tv(2, 4).to_string(), "2/4");
  EXPECT_EQ(tv(0, 1).to_string(), "0/1");
}

TEST(TruthValue, Negation) {
  EXPECT_EQ(neg(tv(3, 4)), tv(1, 4));
  EXPECT_EQ(neg(tv(0, 1)), tv(1, 1));
  EXPECT_EQ(neg(tv(1, 2)), tv(1, 2));
}

TEST(TruthValue, Implication) {
  EXPECT_EQ(implies(tv(3, 4), tv(1, 4)), tv(2, 4));
  for (int n = 1; n <= 5; ++n) {
    for (int x = 0; x <= n; ++x) {
      EXPECT_TRUE(implies(tv(x, n), tv(x, n)).is_top());
      EXPECT_TRUE(implies(tv(0, n), tv(x, n)).is_top());
    }
  }
}

TEST(TruthValue, DerivedConnectives) {
  EXPECT_EQ(odot(tv(1, 2), tv(1, 2)), tv(0, 2));
  EXPECT_EQ(oplus(tv(3, 4), tv(2, 4)), tv(4, 4));
  EXPECT_EQ(equiv(tv(3, 4), tv(1, 4)), tv(2, 4));
  EXPECT_EQ(join(tv(3, 4), tv(1, 4)), tv(3, 4));
  EXPECT_EQ(meet(tv(3, 4), tv(1, 4)), tv(1, 4));
}

TEST(TruthValue, MixingResolutionsThrows) {
  EXPECT_THROW(implies(tv(1, 2), tv(1, 3)), ResolutionMismatch);
  EXPECT_THROW((void)(tv(1, 2) < tv(1, 3)), ResolutionMismatch);
  EXPECT_THROW((void)(tv(1, 2) == tv(2, 4)), ResolutionMismatch);
}

TEST(TruthValue, ImplicationIsTopExactlyOnOrder) {
  for (int n = 1; n <= 8; ++n) {
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; y <= n; ++y) {
        EXPECT_EQ(implies(tv(x, n), tv(y, n)).is_top(), x <= y);
      }
    }
  }
}

TEST(TruthValue, StrongConnectivesBracketLattice) {
  for (int n = 1; n <= 8; ++n) {
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; y <= n; ++y) {
        EXPECT_LE(odot(tv(x, n), tv(y, n)), meet(tv(x, n), tv(y, n)));
        EXPECT_GE(oplus(tv(x, n), tv(y, n)), join(tv(x, n), tv(y, n)));
      }
    }
  }
}

TEST(ParseTruthValue, ReadsFractions) {
  EXPECT_EQ(parse_truth_value("3/4", Resolution(4)), tv(3, 4));
  EXPECT_THROW(parse_truth_value("1/2", Resolution(4)), ResolutionMismatch);
  EXPECT_THROW(parse_truth_value("0.5", Resolution(2)), Error);
  EXPECT_THROW(parse_truth_value("5/4", Resolution(4)), Error);
}

}  // namespace
}  // namespace mvpdl
