#include "sgmc/decode.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "sgmc/channel.hpp"
#include "sgmc/code.hpp"
#include "sgmc/profile.hpp"
#include "sgmc/rng.hpp"

using namespace sgmc;

namespace {

SoftObservation random_obs(int n, std::mt19937_64& rng, double sigma = 0.8) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> llr(n);
  for (auto& l : llr) l = 2.0 * (1.0 + sigma * g(rng)) / (sigma * sigma);
  return observation_from_llrs(std::move(llr));
}

// Independent ML oracle: maximize the BPSK correlation sum((1-2c_i) * llr_i)
// over all codewords (the likelihood formulation, not the soft-weight one).
double ml_correlation_weight(const BitMatrix& g, const SoftObservation& obs) {
  double best_corr = -1e300;
  BitVec best(g.cols());
  SubcodeStream s(g, g.rows());
  BitVec c;
  while (s.next(c)) {
    double corr = 0;
    for (int i = 0; i < c.size(); ++i) corr += (c.get(i) ? -1.0 : 1.0) * obs.llr[i];
    if (corr > best_corr) {
      best_corr = corr;
      best = c;
    }
  }
  return soft_weight(best ^ obs.hard, obs.reliability);
}

struct BruteTep {
  double weight;
  std::uint64_t el;
  std::uint32_t em;
};

// Enumerate-filter-sort oracle for the constrained TEP stream.
std::vector<BruteTep> brute_teps(const BitMatrix& p1, const BitVec& s0,
                                 const std::vector<double>& rel) {
  const int k = p1.rows(), delta = p1.cols();
  std::vector<BruteTep> all;
  for (std::uint64_t el = 0; el < (std::uint64_t{1} << k); ++el) {
    std::uint32_t acc = 0;
    double w = 0;
    for (int i = 0; i < k; ++i)
      if (el >> i & 1) {
        w += rel[i];
        for (int j = 0; j < delta; ++j)
          if (p1.get(i, j)) acc ^= 1u << j;
      }
    std::uint32_t em = acc;
    for (int j = 0; j < delta; ++j)
      if (s0.get(j)) em ^= 1u << j;
    for (int j = 0; j < delta; ++j)
      if (em >> j & 1) w += rel[k + j];
    all.push_back({w, el, em});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const BruteTep& a, const BruteTep& b) { return a.weight < b.weight; });
  return all;
}

std::uint64_t bits_of(const BitVec& v) {
  std::uint64_t x = 0;
  for (int i = 0; i < v.size(); ++i)
    if (v.get(i)) x |= std::uint64_t{1} << i;
  return x;
}

}  // namespace

TEST(RepresentativeBasis, SpecExample) {
  SgmcCode code = sample_generator(Profile({2, 2}), 1);
  const std::vector<double> rel{0.1, 5.0, 3.0, 0.2};
  auto bp = select_representative_basis(code, rel, 1);
  EXPECT_EQ(bp.perm[0], 1);  // staircase 0 max
  EXPECT_EQ(bp.perm[1], 2);  // staircase 1 max
  EXPECT_EQ(bp.perm[2], 3);  // most reliable remaining
  EXPECT_EQ(bp.perm[3], 0);
}

TEST(RepresentativeBasis, TiesPickLowestIndex) {
  SgmcCode code = sample_generator(Profile({3, 2, 2}), 2);
  const std::vector<double> rel(7, 1.0);
  auto bp = select_representative_basis(code, rel, 2);
  EXPECT_EQ(bp.perm[0], 0);
  EXPECT_EQ(bp.perm[1], 3);
  EXPECT_EQ(bp.perm[2], 5);
  EXPECT_EQ(bp.perm[3], 1);  // remaining in index order on ties
  EXPECT_EQ(bp.perm[4], 2);
  EXPECT_THROW(select_representative_basis(code, rel, 5), std::invalid_argument);
}

TEST(RepresentativeBasis, PermutedLeftBlockIsUnitLowerTriangular) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const int k = 2 + static_cast<int>(rng() % 10);
    std::vector<int> widths(k);
    for (auto& w : widths) w = 1 + static_cast<int>(rng() % 4);
    SgmcCode code = sample_generator(Profile(widths), rng());
    std::vector<double> rel(code.n());
    for (auto& r : rel) r = static_cast<double>(rng() % 1000) / 100.0;
    auto bp = select_representative_basis(code, rel, static_cast<int>(rng() % (code.n() - k + 1)));
    BitMatrix gp = code.generator.select_columns(bp.perm);
    for (int i = 0; i < k; ++i) {
      EXPECT_TRUE(gp.get(i, i));
      for (int j = i + 1; j < k; ++j) EXPECT_FALSE(gp.get(i, j));
    }
  }
}

TEST(TepStream, DeltaZeroOrdersBySubsetSum) {
  const int k = 6;
  BitMatrix p1(k, 0);
  std::vector<double> rel{0.3, 1.1, 0.2, 2.0, 0.7, 0.05};
  TepStream stream(p1, BitVec(0), rel);
  std::vector<double> weights;
  std::set<std::uint64_t> seen;
  BitVec first_el;
  while (!stream.exhausted()) {
    TepCandidate c = stream.next();
    if (weights.empty()) first_el = c.e_basis;
    weights.push_back(c.partial_weight);
    seen.insert(bits_of(c.e_basis));
    double w = 0;
    for (int i = 0; i < k; ++i)
      if (c.e_basis.get(i)) w += rel[i];
    EXPECT_NEAR(w, c.partial_weight, 1e-12);
  }
  EXPECT_FALSE(first_el.any());
  EXPECT_EQ(seen.size(), 64u);
  EXPECT_TRUE(std::is_sorted(weights.begin(), weights.end()));
}

TEST(TepStream, ZeroSyndromeStartsAtZeroPattern) {
  std::mt19937_64 rng(23);
  BitMatrix p1(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) p1.set(i, j, rng() & 1);
  std::vector<double> rel(8);
  for (auto& r : rel) r = 0.1 + static_cast<double>(rng() % 100) / 25.0;
  TepStream stream(p1, BitVec(3), rel);
  TepCandidate c = stream.next();
  EXPECT_FALSE(c.e_basis.any());
  EXPECT_FALSE(c.e_mid.any());
  EXPECT_EQ(c.partial_weight, 0.0);
}

TEST(TepStream, MatchesBruteForceOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 8, delta = 3;
    BitMatrix p1(k, delta);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < delta; ++j) p1.set(i, j, rng() & 1);
    BitVec s0(delta);
    for (int j = 0; j < delta; ++j) s0.set(j, rng() & 1);
    std::vector<double> rel(k + delta);
    for (auto& r : rel) r = static_cast<double>(rng() % 10000) / 1000.0;
    auto oracle = brute_teps(p1, s0, rel);
    TepStream stream(p1, s0, rel);
    std::vector<double> got;
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 50 && !stream.exhausted(); ++i) {
      TepCandidate c = stream.next();
      // Constraint holds and the pattern is fresh.
      BitVec lhs(delta);
      for (int r = 0; r < k; ++r)
        if (c.e_basis.get(r)) p1.xor_row_into(r, lhs);
      lhs ^= c.e_mid;
      EXPECT_EQ(lhs, s0);
      EXPECT_TRUE(seen.insert(bits_of(c.e_basis)).second);
      got.push_back(c.partial_weight);
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      EXPECT_NEAR(got[i], oracle[i].weight, 1e-9) << "emission " << i;
  }
}

TEST(TepStream, EnumeratesFullConstrainedSet) {
  std::mt19937_64 rng(37);
  const int k = 7, delta = 2;
  BitMatrix p1(k, delta);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < delta; ++j) p1.set(i, j, rng() & 1);
  BitVec s0(delta);
  s0.set(1, true);
  std::vector<double> rel(k + delta);
  for (auto& r : rel) r = static_cast<double>(rng() % 1000) / 100.0;
  TepStream stream(p1, s0, rel);
  std::set<std::uint64_t> seen;
  double prev = 0;
  while (!stream.exhausted()) {
    TepCandidate c = stream.next();
    EXPECT_GE(c.partial_weight, prev - 1e-12);
    prev = c.partial_weight;
    seen.insert(bits_of(c.e_basis));
  }
  EXPECT_EQ(seen.size(), std::size_t{1} << k);
}

TEST(LcRosd, NoiselessDecodesInOneTep) {
  SgmcCode code = sample_generator(nu_profile(16, 8, 3), 5);
  std::mt19937_64 rng(1);
  BitVec u(8);
  for (int i = 0; i < 8; ++i) u.set(i, rng() & 1);
  BitVec c = encode(u, code.generator);
  std::vector<double> llr(16);
  for (int i = 0; i < 16; ++i) llr[i] = c.get(i) ? -50.0 : 50.0;
  auto res = lc_rosd_decode(code, observation_from_llrs(llr), 4, 1 << 14);
  EXPECT_EQ(res.codeword, c);
  EXPECT_EQ(res.message, u);
  EXPECT_EQ(res.teps_examined, 1u);
  EXPECT_TRUE(res.optimal);
  EXPECT_EQ(res.soft_weight, 0.0);
}

TEST(LcRosd, MatchesMlOnSmallCode) {
  SgmcCode code = sample_generator(nu_profile(16, 8, 4), 99);
  std::mt19937_64 frame_rng(7);
  for (int f = 0; f < 200; ++f) {
    BitVec u(8);
    for (int i = 0; i < 8; ++i) u.set(i, frame_rng() & 1);
    BitVec c = encode(u, code.generator);
    const auto obs = transmit(c, ChannelSpec::awgn(0.6), frame_rng());
    const auto rosd = lc_rosd_decode(code, obs, 8, std::uint64_t{1} << 16);
    const auto ml = ml_bruteforce(code.generator, obs);
    EXPECT_NEAR(rosd.soft_weight, ml.soft_weight, 1e-9);
    EXPECT_TRUE(rosd.optimal);
  }
}

TEST(LcRosd, Lmax1ReturnsFirstStreamCandidateReencoding) {
  // With lmax = 1 the decoder re-encodes the minimum partial-weight TEP; on a
  // clean enough channel that is the zero TEP, i.e. the order-0 estimate.
  SgmcCode code = sample_generator(nu_profile(12, 4, 6), 3);
  std::vector<double> llr(12);
  std::mt19937_64 rng(11);
  BitVec c = encode(BitVec::of({1, 0, 1, 1}), code.generator);
  for (int i = 0; i < 12; ++i) llr[i] = (c.get(i) ? -1 : 1) * (5.0 + 0.1 * (rng() % 10));
  const auto obs = observation_from_llrs(llr);
  auto res = lc_rosd_decode(code, obs, 0, 1);
  EXPECT_EQ(res.teps_examined, 1u);
  EXPECT_EQ(res.codeword, c);  // zero TEP re-encodes the hard decision basis
}

TEST(LcRosd, DeltaZeroExhaustiveEqualsBasisReencoding) {
  SgmcCode code = sample_generator(nu_profile(14, 6, 4), 8);
  std::mt19937_64 rng(13);
  const auto obs = random_obs(14, rng);
  auto res = lc_rosd_decode(code, obs, 0, std::uint64_t{1} << 6);
  // Exhaustive re-encoding over the representative basis.
  auto bp = select_representative_basis(code, obs.reliability, 0);
  BitMatrix gp = code.generator.select_columns(bp.perm);
  auto red = reduce_staircase(gp);
  double best = 1e300;
  for (std::uint64_t m = 0; m < 64; ++m) {
    BitVec v(6);
    for (int i = 0; i < 6; ++i)
      if (m >> i & 1) v.set(i, true);
    BitVec vp(14);
    for (int i = 0; i < 6; ++i)
      if (v.get(i)) red.gtilde.xor_row_into(i, vp);
    BitVec cw(14);
    for (int j = 0; j < 14; ++j)
      if (vp.get(j)) cw.set(bp.perm[j], true);
    best = std::min(best, soft_weight(cw ^ obs.hard, obs.reliability));
  }
  EXPECT_NEAR(res.soft_weight, best, 1e-9);
  EXPECT_TRUE(res.optimal);
}

TEST(LcOsd, NoiselessAndMlEquivalence) {
  SgmcCode code = sample_generator(nu_profile(16, 8, 3), 21);
  std::mt19937_64 rng(2);
  BitVec u(8);
  for (int i = 0; i < 8; ++i) u.set(i, rng() & 1);
  BitVec c = encode(u, code.generator);
  std::vector<double> llr(16);
  for (int i = 0; i < 16; ++i) llr[i] = c.get(i) ? -40.0 : 40.0;
  auto res = lc_osd_decode(code.generator, observation_from_llrs(llr), 4, 1 << 14);
  EXPECT_EQ(res.codeword, c);
  EXPECT_EQ(res.message, u);
  EXPECT_EQ(res.teps_examined, 1u);
  for (int f = 0; f < 100; ++f) {
    BitVec v(8);
    for (int i = 0; i < 8; ++i) v.set(i, rng() & 1);
    const auto obs = transmit(encode(v, code.generator), ChannelSpec::awgn(0.6), rng());
    const auto lc = lc_osd_decode(code.generator, obs, 8, std::uint64_t{1} << 16);
    const auto ml = ml_bruteforce(code.generator, obs);
    EXPECT_NEAR(lc.soft_weight, ml.soft_weight, 1e-9);
    EXPECT_GE(lc_rosd_decode(code, obs, 4, 64).soft_weight, ml.soft_weight - 1e-9);
  }
}

TEST(LcOsd, RankDeficientThrows) {
  BitMatrix g(3, 6);  // two equal rows
  g.set(0, 0, true);
  g.set(0, 3, true);
  g.set(1, 0, true);
  g.set(1, 3, true);
  g.set(2, 1, true);
  std::vector<double> llr(6, 1.0);
  EXPECT_THROW(lc_osd_decode(g, observation_from_llrs(llr), 1, 4), std::invalid_argument);
}

TEST(Osd, OrderZeroAndExhaustive) {
  SgmcCode code = sample_generator(nu_profile(14, 7, 2), 55);
  std::mt19937_64 rng(3);
  const auto obs = random_obs(14, rng);
  auto o0 = osd_decode(code.generator, obs, 0);
  EXPECT_EQ(o0.teps_examined, 1u);
  auto oful = osd_decode(code.generator, obs, 7);
  EXPECT_EQ(oful.teps_examined, 128u);
  auto ml = ml_bruteforce(code.generator, obs);
  EXPECT_NEAR(oful.soft_weight, ml.soft_weight, 1e-9);
  EXPECT_TRUE(oful.optimal);
  auto o2 = osd_decode(code.generator, obs, 2);
  EXPECT_EQ(o2.teps_examined, 1u + 7u + 21u);
  EXPECT_GE(o2.soft_weight, ml.soft_weight - 1e-9);
}

TEST(MlBruteforce, RepetitionAndOracle) {
  BitMatrix rep(1, 5);
  for (int i = 0; i < 5; ++i) rep.set(0, i, true);
  auto obs = observation_from_llrs({2.0, -0.5, 1.0, -0.3, 0.4});  // sum > 0
  auto res = ml_bruteforce(rep, obs);
  EXPECT_FALSE(res.codeword.any());

  std::mt19937_64 rng(19);
  SgmcCode code = sample_generator(nu_profile(12, 6, 3), 77);
  for (int f = 0; f < 100; ++f) {
    const auto o = random_obs(12, rng, 1.2);
    auto ml = ml_bruteforce(code.generator, o);
    EXPECT_NEAR(ml.soft_weight, ml_correlation_weight(code.generator, o), 1e-9);
    EXPECT_EQ(encode(ml.message, code.generator), ml.codeword);
  }
  BitMatrix big(25, 30);
  EXPECT_THROW(ml_bruteforce(big, observation_from_llrs(std::vector<double>(30, 1.0))),
               std::invalid_argument);
}

TEST(Decoders, OutputsAreCodewordsAndMlDominates) {
  std::mt19937_64 rng(41);
  SgmcCode code = sample_generator(nu_profile(18, 8, 4), 1001);
  for (int f = 0; f < 60; ++f) {
    const auto obs = random_obs(18, rng, 1.0);
    const auto ml = ml_bruteforce(code.generator, obs);
    for (int which = 0; which < 3; ++which) {
      DecodeResult r;
      if (which == 0)
        r = lc_rosd_decode(code, obs, 3, 32);
      else if (which == 1)
        r = lc_osd_decode(code.generator, obs, 3, 32);
      else
        r = osd_decode(code.generator, obs, 1);
      EXPECT_EQ(encode(r.message, code.generator), r.codeword);
      EXPECT_GE(r.soft_weight, ml.soft_weight - 1e-9);
      if (r.optimal) EXPECT_NEAR(r.soft_weight, ml.soft_weight, 1e-9);
    }
  }
}
