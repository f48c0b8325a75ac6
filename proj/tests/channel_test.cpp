#include "sgmc/channel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace sgmc;

TEST(Sigma, EbN0Conversions) {
  EXPECT_NEAR(sigma_from_ebn0(0.0, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(sigma_from_ebn0(3.0103, 0.5), 1.0 / std::sqrt(2.0), 1e-5);
  EXPECT_NEAR(sigma_from_ebn0(0.0, 1.0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(sigma_from_ebn0(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(sigma_from_ebn0(0.0, 1.5), std::invalid_argument);
}

TEST(Transmit, NearNoiselessLimitRecoversHardDecisions) {
  BitVec c = BitVec::of({0, 1, 1, 0, 1, 0, 0, 1});
  const SoftObservation obs = transmit(c, ChannelSpec::awgn(1e-3), 99);
  EXPECT_EQ(obs.hard, c);
  for (double r : obs.reliability) EXPECT_GT(r, 1e5);
}

TEST(Transmit, BscHasTwoValuedLlrs) {
  const double eps = 0.2;
  BitVec c(64);
  const SoftObservation obs = transmit(c, ChannelSpec::bsc(eps), 7);
  const double mag = std::log((1 - eps) / eps);
  for (int i = 0; i < 64; ++i) EXPECT_NEAR(obs.reliability[i], mag, 1e-12);
  // Some flips should occur at eps = 0.2 over 64 bits (p ~ 1 - 0.8^64).
  EXPECT_TRUE(obs.hard.any());
}

TEST(Transmit, Deterministic) {
  BitVec c = BitVec::of({1, 0, 1, 1, 0, 0, 1, 0, 1, 1});
  const auto a = transmit(c, ChannelSpec::awgn(0.8), 1234);
  const auto b = transmit(c, ChannelSpec::awgn(0.8), 1234);
  EXPECT_EQ(a.llr, b.llr);
  const auto d = transmit(c, ChannelSpec::awgn(0.8), 1235);
  EXPECT_NE(a.llr, d.llr);
}

TEST(Transmit, AwgnLlrMomentsMatchTheory) {
  // Given c_i = 0: lambda ~ N(2/sigma^2, 4/sigma^2).
  const double sigma = 0.9;
  const int n = 1 << 20;
  BitVec c(n);
  const SoftObservation obs = transmit(c, ChannelSpec::awgn(sigma), 5150);
  double mean = 0;
  for (double l : obs.llr) mean += l;
  mean /= n;
  double var = 0;
  for (double l : obs.llr) var += (l - mean) * (l - mean);
  var /= n - 1;
  const double want_mean = 2.0 / (sigma * sigma);
  const double want_var = 4.0 / (sigma * sigma);
  const double se_mean = std::sqrt(want_var / n);
  EXPECT_NEAR(mean, want_mean, 3 * se_mean);
  const double se_var = want_var * std::sqrt(2.0 / (n - 1));
  EXPECT_NEAR(var, want_var, 3 * se_var);
}

TEST(Transmit, BiosSymmetry) {
  // The law of lambda given c=1 mirrors the law given c=0: compare empirical
  // quantiles of -lambda|1 against lambda|0 at desk scale.
  const double sigma = 0.7;
  const int n = 1 << 16;
  const SoftObservation zero = transmit(BitVec(n), ChannelSpec::awgn(sigma), 42);
  BitVec ones(n);
  for (int i = 0; i < n; ++i) ones.set(i, true);
  const SoftObservation one = transmit(ones, ChannelSpec::awgn(sigma), 43);
  std::vector<double> a = zero.llr, b = one.llr;
  for (double& x : b) x = -x;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // Kolmogorov-style check on a grid of quantiles.
  for (int q = 1; q < 20; ++q) {
    const double qa = a[static_cast<std::size_t>(q / 20.0 * n)];
    const double qb = b[static_cast<std::size_t>(q / 20.0 * n)];
    EXPECT_NEAR(qa, qb, 0.15) << "quantile " << q / 20.0;
  }
}

TEST(Observation, HardAndReliabilityConsistent) {
  const auto obs = observation_from_llrs({0.5, -1.25, 0.0, -3.0});
  EXPECT_EQ(obs.hard.to_string(), "0101");  // z_i = 1 iff llr < 0
  EXPECT_EQ(obs.reliability, (std::vector<double>{0.5, 1.25, 0.0, 3.0}));
}
