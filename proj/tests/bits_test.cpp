#include "sgmc/bits.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>

using namespace sgmc;

namespace {

// Independent oracle: plain serial Gaussian elimination, pivoting the first
// k columns in order. Works on the current (partially reduced) rows, unlike
// the row-local kernel under test.
BitMatrix serial_ge(BitMatrix g) {
  const int k = g.rows();
  for (int j = 0; j < k; ++j) {
    EXPECT_TRUE(g.get(j, j));
    for (int r = 0; r < k; ++r)
      if (r != j && g.get(r, j)) g.row_xor_row(r, j);
  }
  return g;
}

// Random k x n matrix whose left k x k block is unit lower triangular.
BitMatrix random_ult(int k, int n, std::mt19937_64& rng) {
  BitMatrix g(k, n);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < r; ++c) g.set(r, c, rng() & 1);
    g.set(r, r, true);
    for (int c = k; c < n; ++c) g.set(r, c, rng() & 1);
  }
  return g;
}

}  // namespace

TEST(BitVec, BasicsAndLex) {
  BitVec v = BitVec::of({1, 0, 1, 1, 0});
  EXPECT_EQ(v.size(), 5);
  EXPECT_EQ(v.popcount(), 3);
  EXPECT_EQ(v.to_string(), "10110");
  BitVec w = BitVec::of({1, 1, 0, 1, 0});
  EXPECT_LT(BitVec::lex_compare(v, w), 0);  // differs at index 1: 0 < 1
  EXPECT_GT(BitVec::lex_compare(w, v), 0);
  EXPECT_EQ(BitVec::lex_compare(v, v), 0);
  v ^= w;
  EXPECT_EQ(v.to_string(), "01100");
}

TEST(Encode, ZeroMessageGivesZeroCodeword) {
  BitMatrix g = BitMatrix::from_rows({{1, 0, 0, 1, 0}, {1, 1, 0, 0, 1}, {0, 1, 1, 1, 1}});
  EXPECT_FALSE(encode(BitVec(3), g).any());
}

TEST(Encode, UnitVectorOnStaircaseMatrix) {
  // Row 0 of any staircase matrix with profile w is (1^{w0}, 0^{n-w0}).
  BitMatrix g = BitMatrix::from_rows({{1, 1, 1, 0, 0}, {1, 0, 1, 1, 0}, {0, 1, 0, 1, 1}});
  BitVec e0(3);
  e0.set(0, true);
  EXPECT_EQ(encode(e0, g).to_string(), "11100");
}

TEST(Encode, HandExample) {
  BitMatrix g = BitMatrix::from_rows({{1, 0, 0, 1, 0}, {1, 1, 0, 0, 1}, {0, 1, 1, 1, 1}});
  EXPECT_EQ(encode(BitVec::of({1, 1, 0}), g).to_string(), "01011");
}

TEST(Encode, DimensionMismatchThrows) {
  BitMatrix g(3, 5);
  EXPECT_THROW(encode(BitVec(4), g), std::invalid_argument);
}

TEST(Encode, Linearity) {
  std::mt19937_64 rng(7);
  BitMatrix g = random_ult(20, 45, rng);
  for (int trial = 0; trial < 50; ++trial) {
    BitVec u(20), v(20);
    for (int i = 0; i < 20; ++i) {
      u.set(i, rng() & 1);
      v.set(i, rng() & 1);
    }
    EXPECT_EQ(encode(u ^ v, g), encode(u, g) ^ encode(v, g));
  }
}

TEST(ReduceStaircase, IdentityLeftBlockIsFixedPoint) {
  std::mt19937_64 rng(3);
  BitMatrix g(4, 9);
  for (int r = 0; r < 4; ++r) {
    g.set(r, r, true);
    for (int c = 4; c < 9; ++c) g.set(r, c, rng() & 1);
  }
  auto red = reduce_staircase(g);
  EXPECT_EQ(red.gtilde, g);
  EXPECT_EQ(red.transform, BitMatrix::identity(4));
}

TEST(ReduceStaircase, HandExample) {
  BitMatrix g = BitMatrix::from_rows({{1, 0, 0, 1, 0}, {1, 1, 0, 0, 1}, {0, 1, 1, 1, 1}});
  auto red = reduce_staircase(g);
  BitMatrix want =
      BitMatrix::from_rows({{1, 0, 0, 1, 0}, {0, 1, 0, 1, 1}, {0, 0, 1, 0, 0}});
  EXPECT_EQ(red.gtilde, want);
  EXPECT_EQ(red.gtilde, serial_ge(g));
  EXPECT_EQ(matmul(red.transform, g), red.gtilde);
}

TEST(ReduceStaircase, MatchesSerialOracleOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 48);
    const int n = k + static_cast<int>(rng() % 64);
    BitMatrix g = random_ult(k, n, rng);
    auto red = reduce_staircase(g);
    EXPECT_EQ(red.gtilde, serial_ge(g));
    EXPECT_EQ(matmul(red.transform, g), red.gtilde);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) EXPECT_EQ(red.gtilde.get(i, j), i == j);
    // Same row space: stacking both matrices does not increase the rank.
    BitMatrix stacked(2 * k, n);
    for (int r = 0; r < k; ++r) {
      stacked.set_row(r, g.row(r));
      stacked.set_row(k + r, red.gtilde.row(r));
    }
    EXPECT_EQ(gf2_rank(stacked), k);
  }
}

TEST(ReduceStaircase, RejectsBadLeftBlock) {
  BitMatrix zero_diag = BitMatrix::from_rows({{1, 0, 1}, {1, 0, 1}});
  EXPECT_THROW(reduce_staircase(zero_diag), std::invalid_argument);
  BitMatrix upper = BitMatrix::from_rows({{1, 1, 0}, {0, 1, 1}});
  EXPECT_THROW(reduce_staircase(upper), std::invalid_argument);
}

TEST(Rank, SmallCases) {
  EXPECT_EQ(gf2_rank(BitMatrix::identity(6)), 6);
  EXPECT_EQ(gf2_rank(BitMatrix(4, 7)), 0);
  EXPECT_EQ(gf2_rank(BitMatrix::from_rows({{1, 1}, {1, 1}})), 1);
}

TEST(SubcodeStream, SmallEnumerations) {
  BitMatrix g = BitMatrix::from_rows({{1, 0, 0, 1, 0}, {1, 1, 0, 0, 1}, {0, 1, 1, 1, 1}});
  {
    SubcodeStream s(g, 0);
    BitVec c;
    ASSERT_TRUE(s.next(c));
    EXPECT_FALSE(c.any());
    EXPECT_FALSE(s.next(c));
  }
  {
    SubcodeStream s(g, 1);
    BitVec c;
    ASSERT_TRUE(s.next(c));
    EXPECT_FALSE(c.any());
    ASSERT_TRUE(s.next(c));
    EXPECT_EQ(c, g.row(0));
    EXPECT_FALSE(s.next(c));
  }
  {
    SubcodeStream s(g, 2);
    std::set<std::string> seen;
    BitVec c;
    while (s.next(c)) seen.insert(c.to_string());
    std::set<std::string> want = {"00000", "10010", "11001", "01011"};
    EXPECT_EQ(seen, want);
  }
  EXPECT_THROW(SubcodeStream(g, 4), std::invalid_argument);
}

TEST(SubcodeStream, YieldsXorGroup) {
  std::mt19937_64 rng(5);
  BitMatrix g = random_ult(5, 12, rng);
  std::vector<BitVec> all;
  SubcodeStream s(g, 5);
  BitVec c;
  while (s.next(c)) all.push_back(c);
  ASSERT_EQ(all.size(), 32u);
  std::set<std::string> seen;
  for (const auto& v : all) seen.insert(v.to_string());
  EXPECT_EQ(seen.size(), 32u);  // distinct
  for (int t = 0; t < 40; ++t) {
    const auto& a = all[rng() % all.size()];
    const auto& b = all[rng() % all.size()];
    EXPECT_TRUE(seen.count((a ^ b).to_string()));  // closed under xor
  }
}
