#pragma once

// BPSK over AWGN (and BSC for closed-form cross-checks). LLRs use the natural
// sign convention lambda = ln P(y|0) / P(y|1), so lambda = 2y/sigma^2 for
// unit-energy BPSK (0 -> +1, 1 -> -1) with per-dimension noise variance
// sigma^2. SNR inputs are Eb/N0 in dB throughout.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sgmc/bits.hpp"
#include "sgmc/rng.hpp"

namespace sgmc {

inline constexpr const char* kConventionString =
    "snr=ebn0-db;bpsk=unit-energy(0->+1);sigma2=1/(2*R*10^(snr/10));llr=ln[P(y|0)/P(y|1)];pep(d)=Q(sqrt(d)/sigma)";

enum class ChannelKind { AwgnBpsk, Bsc };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::AwgnBpsk;
  double sigma = 1.0;    // AWGN noise std dev per dimension
  double epsilon = 0.0;  // BSC crossover

  static ChannelSpec awgn(double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("awgn: sigma must be positive");
    return {ChannelKind::AwgnBpsk, sigma, 0.0};
  }
  static ChannelSpec bsc(double eps) {
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("bsc: need 0 < eps < 1/2");
    return {ChannelKind::Bsc, 0.0, eps};
  }
};

inline double sigma_from_ebn0(double ebn0_db, double rate) {
  if (!(rate > 0 && rate <= 1)) throw std::invalid_argument("sigma_from_ebn0: rate out of (0,1]");
  return 1.0 / std::sqrt(2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

// Matching hard-decision crossover for a BSC driven at the same Eb/N0.
inline double bsc_epsilon_from_ebn0(double ebn0_db, double rate) {
  const double sigma = sigma_from_ebn0(ebn0_db, rate);
  return 0.5 * std::erfc(1.0 / (sigma * std::sqrt(2.0)));
}

struct SoftObservation {
  std::vector<double> llr;
  BitVec hard;                      // z_i = 1 iff llr_i < 0
  std::vector<double> reliability;  // |llr_i|

  int n() const { return static_cast<int>(llr.size()); }
};

inline SoftObservation observation_from_llrs(std::vector<double> llr) {
  SoftObservation obs;
  obs.hard = BitVec(static_cast<int>(llr.size()));
  obs.reliability.resize(llr.size());
  for (std::size_t i = 0; i < llr.size(); ++i) {
    if (llr[i] < 0) obs.hard.set(static_cast<int>(i), true);
    obs.reliability[i] = std::fabs(llr[i]);
  }
  obs.llr = std::move(llr);
  return obs;
}

inline SoftObservation transmit(const BitVec& c, const ChannelSpec& spec,
                                std::uint64_t frame_seed) {
  rng::Stream stream(frame_seed);
  std::vector<double> llr(c.size());
  if (spec.kind == ChannelKind::AwgnBpsk) {
    const double s2 = spec.sigma * spec.sigma;
    for (int i = 0; i < c.size(); ++i) {
      const double y = (c.get(i) ? -1.0 : 1.0) + spec.sigma * stream.next_gaussian();
      llr[i] = 2.0 * y / s2;
    }
  } else {
    const double mag = std::log((1.0 - spec.epsilon) / spec.epsilon);
    for (int i = 0; i < c.size(); ++i) {
      const bool flip = stream.next_unit() < spec.epsilon;
      const bool r = c.get(i) ^ flip;
      llr[i] = r ? -mag : mag;
    }
  }
  return observation_from_llrs(std::move(llr));
}

// Soft weight of an error pattern: sum of |llr_i| over its set bits.
inline double soft_weight(const BitVec& e, const std::vector<double>& reliability) {
  double g = 0;
  for (int i = 0; i < e.size(); ++i)
    if (e.get(i)) g += reliability[i];
  return g;
}

}  // namespace sgmc
