#include "sgmc/spectrum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sgmc/code.hpp"
#include "sgmc/mathutil.hpp"

using namespace sgmc;

TEST(SgmcSpectrum, HandExpandedProfile211) {
  WeightSpectrum ws = sgmc_spectrum(Profile({2, 1, 1}));
  const double want[5] = {1.0, 1.0, 3.5, 2.0, 0.5};
  for (int d = 0; d <= 4; ++d) EXPECT_DOUBLE_EQ(ws.coeff(d), want[d]) << "d=" << d;
}

TEST(SgmcSpectrum, RepetitionProfile) {
  WeightSpectrum ws = sgmc_spectrum(Profile({7}));
  for (int d = 0; d <= 7; ++d)
    EXPECT_DOUBLE_EQ(ws.coeff(d), (d == 0 || d == 7) ? 1.0 : 0.0);
}

TEST(SgmcSpectrum, ExactIdentities) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const int k = 1 + static_cast<int>(rng() % 24);
    std::vector<int> widths(k);
    for (auto& w : widths) w = 1 + static_cast<int>(rng() % 5);
    WeightSpectrum ws = sgmc_spectrum(Profile(widths));
    EXPECT_EQ(ws.exact_sum(), BigInt(1) << (k + ws.shift));  // sum_d A_d = 2^k
    EXPECT_EQ(ws.num[0], ws.denominator());                  // A_0 = 1
  }
}

TEST(SgmcSpectrum, MatchesEnsembleMonteCarlo) {
  const Profile p = rm_profile(1, 3);  // (4,2,1,1)
  WeightSpectrum ws = sgmc_spectrum(p);
  const int samples = 3000;
  std::vector<double> mean(p.n() + 1, 0.0), var(p.n() + 1, 0.0);
  std::vector<std::vector<int>> counts(samples, std::vector<int>(p.n() + 1, 0));
  for (int s = 0; s < samples; ++s) {
    SgmcCode code = sample_generator(p, 1000 + s);
    SubcodeStream st(code.generator, p.k());
    BitVec c;
    while (st.next(c)) counts[s][c.popcount()]++;
  }
  for (int d = 0; d <= p.n(); ++d) {
    for (int s = 0; s < samples; ++s) mean[d] += counts[s][d];
    mean[d] /= samples;
    for (int s = 0; s < samples; ++s)
      var[d] += (counts[s][d] - mean[d]) * (counts[s][d] - mean[d]);
    var[d] /= samples - 1;
    const double se = std::sqrt(var[d] / samples);
    EXPECT_NEAR(mean[d], ws.coeff(d), 3 * se + 1e-12) << "d=" << d;
  }
}

TEST(RandomCodeSpectrum, SmallCases) {
  WeightSpectrum ws = random_code_spectrum(1, 1);
  EXPECT_DOUBLE_EQ(ws.coeff(0), 1.5);
  EXPECT_DOUBLE_EQ(ws.coeff(1), 0.5);
  WeightSpectrum big = random_code_spectrum(12, 5);
  EXPECT_EQ(big.exact_sum(), BigInt(1) << (5 + big.shift));
  // A_0 = 1 + (2^k - 1) 2^{-n}.
  EXPECT_DOUBLE_EQ(big.coeff(0), 1.0 + 31.0 / 4096.0);
}

TEST(Spectra, SgmcTracksRandomCodeAtMidWeights) {
  WeightSpectrum sp = sgmc_spectrum(rm_profile(3, 7));
  WeightSpectrum rnd = random_code_spectrum(128, 64);
  for (int d = 48; d <= 80; ++d) {
    const double a = sp.coeff(d), b = rnd.coeff(d);
    EXPECT_NEAR(a / b, 1.0, 0.01) << "d=" << d;
  }
}

TEST(Dmin2, TwoOneCase) {
  Dmin2Pmf pmf = dmin2_pmf(2, 1);
  ASSERT_EQ(pmf.pmf.size(), 2u);
  EXPECT_DOUBLE_EQ(pmf.pmf[0], 0.5);  // d = 1
  EXPECT_DOUBLE_EQ(pmf.pmf[1], 0.5);  // d = 2
}

TEST(Dmin2, SupportEndAndNormalization) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 1000; ++t) {
    const int w1 = 1 + static_cast<int>(rng() % 20);
    const int w0 = w1 + static_cast<int>(rng() % 20);
    Dmin2Pmf pmf = dmin2_pmf(w0, w1);
    EXPECT_EQ(static_cast<int>(pmf.pmf.size()) - 1, std::min(w0 / 2, w0 - w1));
    double sum = 0;
    for (double p : pmf.pmf) {
      EXPECT_GE(p, 0.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_THROW(dmin2_pmf(3, 5), std::invalid_argument);
}

TEST(Dmin2, PaperFigureStatement) {
  // For w0 = 16, w1 = 8, over 90% of sampled codes have d_min,2 >= 13.
  EXPECT_GT(dmin2_pmf(16, 8).prob_at_least(13), 0.90);
}

TEST(UnionBound, RepetitionIsExactSingleTerm) {
  WeightSpectrum ws = sgmc_spectrum(Profile({9}));
  for (double sigma : {0.4, 0.8, 1.5})
    EXPECT_NEAR(union_bound(ws, sigma), q_func(3.0 / sigma), 1e-12);
}

TEST(UnionBound, MonotoneInNoise) {
  WeightSpectrum ws = sgmc_spectrum(rm_profile(1, 4));
  double prev = 0;
  for (double sigma = 0.3; sigma < 1.6; sigma += 0.1) {
    const double ub = union_bound(ws, sigma);
    EXPECT_GT(ub, prev);
    prev = ub;
  }
}

TEST(UnionBound, DeepTailStaysFinite) {
  WeightSpectrum ws = sgmc_spectrum(rm_profile(3, 7));
  const double ub = union_bound(ws, 0.1);
  EXPECT_GT(ub, 0.0);  // log-domain evaluation does not underflow to zero
  EXPECT_LT(ub, 1e-25);
}
