#pragma once

// Partially random coding union bound and the conventional RCU bound, both
// estimated by Monte Carlo over the received vector given the all-zero
// codeword, with the inner pairwise error probability evaluated exactly
// (Gray-code enumeration) for short prefixes and by a quantized subset-sum DP
// beyond.
//
// Deep-tail evaluation (target FERs down to 1e-9) uses mixture importance
// sampling: outputs are drawn from a defensive mixture of exponentially
// tilted channel laws f_s(lambda) ~ f0(lambda) exp(-s lambda), s on a grid in
// [0, 1], with half the mass on s = 0. The mixture weight for each subset
// term depends only on its prefix LLR sum, so one sample serves every term.
// Estimates are unbiased; fixed seeds make them deterministic and independent
// of the worker count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sgmc/bounds.hpp"
#include "sgmc/channel.hpp"
#include "sgmc/mathutil.hpp"
#include "sgmc/parallel.hpp"
#include "sgmc/profile.hpp"
#include "sgmc/rng.hpp"

namespace sgmc {

struct RcuOptions {
  std::uint64_t n_outer = 20000;
  std::uint64_t seed = 1;
  int workers = 0;                  // 0 = hardware concurrency
  bool importance_sampling = true;  // plain Monte-Carlo when off
  int max_exact_m = 12;             // exact enumeration up to this prefix size
  int dp_bins = 4096;               // grid cap for the value DP
};

struct RcuEstimate {
  double value = 0;  // clipped at 1
  double ci_low = 0;
  double ci_high = 0;  // 95% interval, clipped at [0,1]
  std::uint64_t n_outer = 0;
};

namespace detail {

struct RcuCheckpoint {
  int m;          // random-prefix length
  int block_len;  // fixed all-ones block length (0 for the conventional bound)
  double ln_mult; // ln(2^l - 1), the union multiplier
};

inline double ln_pow2_minus_1(int l) {
  if (l <= 0) return -kInf;
  if (l < 50) return std::log(std::exp2(l) - 1.0);
  return l * std::log(2.0) + std::log1p(-std::exp2(-l));
}

struct TiltFamily {
  ChannelKind kind = ChannelKind::AwgnBpsk;
  double mu = 0, var = 0;  // AWGN LLR ~ N(mu, var) given the zero codeword
  double mag = 0, eps = 0; // BSC LLR magnitude and crossover
  std::vector<double> s;
  std::vector<double> ln_alpha;
  std::vector<double> ln_z;  // ln E0[exp(-s lambda)]

  static TiltFamily make(const ChannelSpec& ch, int n, bool importance) {
    TiltFamily tf;
    tf.kind = ch.kind;
    double spread;  // per-coordinate LLR variance, for grid sizing
    if (ch.kind == ChannelKind::AwgnBpsk) {
      tf.mu = 2.0 / (ch.sigma * ch.sigma);
      tf.var = 4.0 / (ch.sigma * ch.sigma);
      spread = tf.var;
    } else {
      tf.mag = std::log((1.0 - ch.epsilon) / ch.epsilon);
      tf.eps = ch.epsilon;
      spread = 4.0 * tf.mag * tf.mag * ch.epsilon * (1.0 - ch.epsilon);
    }
    int count = 1;
    if (importance) {
      // Grid spacing 1/sqrt(n var) keeps the worst between-grid chi-square
      // inflation at exp(1/4); a quarter of the mass stays on s = 0 so bulk
      // weights are capped at 4.
      count = 1 + static_cast<int>(std::ceil(std::sqrt(n * spread)));
      count = std::clamp(count, 8, 400);
    }
    tf.s.resize(count);
    tf.ln_alpha.resize(count);
    tf.ln_z.resize(count);
    for (int j = 0; j < count; ++j) {
      tf.s[j] = count == 1 ? 0.0 : static_cast<double>(j) / (count - 1);
      tf.ln_alpha[j] = count == 1 ? 0.0
                       : j == 0  ? std::log(0.25)
                                 : std::log(0.75 / (count - 1));
      if (ch.kind == ChannelKind::AwgnBpsk) {
        tf.ln_z[j] = -tf.s[j] * tf.mu + 0.5 * tf.s[j] * tf.s[j] * tf.var;
      } else {
        tf.ln_z[j] = std::log((1.0 - tf.eps) * std::exp(-tf.s[j] * tf.mag) +
                              tf.eps * std::exp(tf.s[j] * tf.mag));
      }
    }
    return tf;
  }

  // Draw one LLR under tilt component j.
  double sample(int j, rng::Stream& st) const {
    if (kind == ChannelKind::AwgnBpsk)
      return mu - s[j] * var + std::sqrt(var) * st.next_gaussian();
    const double p_minus = eps * std::exp(s[j] * mag - ln_z[j]);
    return st.next_unit() < p_minus ? -mag : mag;
  }

  // Pick a component: a quarter of the mass on s=0, the rest uniform.
  int pick(rng::Stream& st) const {
    const int count = static_cast<int>(s.size());
    if (count == 1) return 0;
    if (st.next_u64() % 4 == 0) return 0;
    return 1 + static_cast<int>(st.next_u64() % (count - 1));
  }
};

// Nearest-rounding subset-sum CDF Pr{sum_i c_i |a_i| <= xp}, c uniform bits.
// Coordinates larger than the window contribute an exact factor 1/2 each.
inline double subset_sum_cdf_value(const double* a, int m, double xp, int bins,
                                   std::vector<double>& scratch) {
  const double q = xp / bins;
  const int t = bins;
  scratch.assign(t + 1, 0.0);
  scratch[0] = 1.0;
  int halvings = 0;
  for (int i = 0; i < m; ++i) {
    const double av = std::fabs(a[i]);
    if (av >= xp + 0.5 * q) {  // increment exceeds the window; inclusion is fatal
      ++halvings;
      continue;
    }
    const int di = static_cast<int>(std::lround(av / q));
    if (di == 0) continue;
    if (di > t) {
      ++halvings;
      continue;
    }
    for (int j = t; j >= di; --j) scratch[j] = 0.5 * scratch[j] + 0.5 * scratch[j - di];
    for (int j = di - 1; j >= 0; --j) scratch[j] *= 0.5;
  }
  double p = 0;
  for (int j = 0; j <= t; ++j) p += scratch[j];
  return std::ldexp(p, -halvings);
}

inline RcuEstimate rcu_monte_carlo(const std::vector<RcuCheckpoint>& cps, int n_total,
                                   const ChannelSpec& ch, const RcuOptions& opt) {
  RcuEstimate est;
  est.n_outer = opt.n_outer;
  if (cps.empty() || opt.n_outer == 0) return est;
  const TiltFamily tf = TiltFamily::make(ch, n_total, opt.importance_sampling);
  const int tilts = static_cast<int>(tf.s.size());
  const double ln2 = std::log(2.0);
  std::vector<double> totals(opt.n_outer, 0.0);

  parallel_for(opt.n_outer, opt.workers, [&](std::uint64_t i) {
    rng::Stream st(rng::derive(opt.seed, 0x5243ULL, i));
    const int j = tf.pick(st);
    std::vector<double> lam(n_total);
    std::vector<double> cum(n_total + 1, 0.0), cum_min(n_total + 1, 0.0),
        cum_abs(n_total + 1, 0.0), cum_sq(n_total + 1, 0.0);
    for (int t = 0; t < n_total; ++t) {
      const double l = tf.sample(j, st);
      lam[t] = l;
      cum[t + 1] = cum[t] + l;
      cum_min[t + 1] = cum_min[t] + std::min(l, 0.0);
      cum_abs[t + 1] = cum_abs[t] + std::fabs(l);
      cum_sq[t + 1] = cum_sq[t] + l * l;
    }
    std::vector<double> scratch;
    std::vector<double> wterms(tilts);
    double total = 0;
    for (const RcuCheckpoint& cp : cps) {
      const int ncp = cp.m + cp.block_len;
      // Mixture weight from the prefix marginal.
      double ln_w = 0;
      if (tilts > 1) {
        const double s_pref = cum[ncp];
        double mx = -kInf;
        for (int u = 0; u < tilts; ++u) {
          wterms[u] = tf.ln_alpha[u] - tf.s[u] * s_pref - ncp * tf.ln_z[u];
          mx = std::max(mx, wterms[u]);
        }
        double acc = 0;
        for (int u = 0; u < tilts; ++u)
          if (wterms[u] > mx - 40.0) acc += std::exp(wterms[u] - mx);
        ln_w = -(mx + std::log(acc));
      }
      // Inner pairwise error probability against the block sum.
      const double t_block = cum[ncp] - cum[cp.m];
      double ln_f;
      if (cp.m <= opt.max_exact_m) {
        const double p = pep_enumerate(lam.data(), cp.m, t_block);
        ln_f = p <= 0 ? -kInf : cp.ln_mult + std::log(p);
      } else {
        const double offset = cum_min[cp.m];
        const double abs_sum = cum_abs[cp.m] ;
        const double xp = -t_block - offset;
        if (xp < 0) {
          ln_f = -kInf;
        } else if (xp >= abs_sum) {
          ln_f = cp.ln_mult;
        } else if (cp.ln_mult >= ln2 - 1e-12 && xp >= 0.5 * abs_sum) {
          // The nonnegative subset-sum is symmetric about abs_sum/2, so the
          // CDF here is at least 1/2 and the min{1, .} clamp saturates.
          ln_f = 0.0;
        } else {
          const double sd = std::max(0.5 * std::sqrt(cum_sq[cp.m]), 1e-300);
          const double z = std::max(1.0, (0.5 * abs_sum - xp) / sd);
          int bins = static_cast<int>(5.0 * std::sqrt(double(cp.m)) * xp * z / sd);
          bins = std::clamp(bins, 256, opt.dp_bins);
          const double p = subset_sum_cdf_value(lam.data(), cp.m, xp, bins, scratch);
          ln_f = p <= 0 ? -kInf : cp.ln_mult + std::log(p);
        }
      }
      if (ln_f > 0) ln_f = 0;
      if (ln_f > -kInf) total += std::exp(ln_w + ln_f);
    }
    totals[i] = total;
  });

  double mean = 0;
  for (double t : totals) mean += t;
  mean /= static_cast<double>(opt.n_outer);
  double var = 0;
  for (double t : totals) var += (t - mean) * (t - mean);
  var /= std::max<std::uint64_t>(1, opt.n_outer - 1);
  const double half = 1.959963984540054 * std::sqrt(var / static_cast<double>(opt.n_outer));
  est.value = mean;
  est.ci_low = mean - half;
  est.ci_high = mean + half;
  return est;
}

}  // namespace detail

// Exact ML FER of the length-w repetition code (the tightened l=0 term).
inline double repetition_fer(int w, const ChannelSpec& ch) {
  if (w < 1) throw std::invalid_argument("repetition_fer: w >= 1");
  if (ch.kind == ChannelKind::AwgnBpsk)
    return q_func(std::sqrt(static_cast<double>(w)) / ch.sigma);
  // BSC with ties counted as errors: at least ceil(w/2) flips.
  double p = 0;
  std::vector<double> logc(w + 1, 0.0);
  for (int t = 1; t <= w; ++t)
    logc[t] = logc[t - 1] + std::log(double(w - t + 1)) - std::log(double(t));
  for (int t = (w + 1) / 2; t <= w; ++t)
    p += std::exp(logc[t] + t * std::log(ch.epsilon) + (w - t) * std::log1p(-ch.epsilon));
  return std::min(1.0, p);
}

// Partially RCU bound: sum_l RCU_l with the l = 0 term replaced by the exact
// repetition FER.
inline RcuEstimate partial_rcu(const Profile& profile, const ChannelSpec& ch,
                               const RcuOptions& opt = {}) {
  profile.validate();
  const auto nl = profile.partial_lengths();
  std::vector<detail::RcuCheckpoint> cps;
  for (int l = 1; l < profile.k(); ++l)
    cps.push_back({nl[l - 1], profile.widths[l], detail::ln_pow2_minus_1(l)});
  RcuEstimate est = detail::rcu_monte_carlo(cps, profile.n(), ch, opt);
  const double rep = repetition_fer(profile.widths[0], ch);
  est.value = std::min(1.0, est.value + rep);
  est.ci_low = std::clamp(est.ci_low + rep, 0.0, 1.0);
  est.ci_high = std::clamp(est.ci_high + rep, 0.0, 1.0);
  return est;
}

// Conventional RCU bound for the totally random [n, k] code.
inline RcuEstimate conventional_rcu(int n, int k, const ChannelSpec& ch,
                                    const RcuOptions& opt = {}) {
  if (n < 1 || k < 0) throw std::invalid_argument("conventional_rcu: bad shape");
  RcuEstimate est;
  est.n_outer = opt.n_outer;
  if (k == 0) return est;
  std::vector<detail::RcuCheckpoint> cps{{n, 0, detail::ln_pow2_minus_1(k)}};
  est = detail::rcu_monte_carlo(cps, n, ch, opt);
  est.value = std::min(1.0, est.value);
  est.ci_low = std::clamp(est.ci_low, 0.0, 1.0);
  est.ci_high = std::clamp(est.ci_high, 0.0, 1.0);
  return est;
}

// Finds the SNR (Eb/N0, dB) where a decreasing FER curve crosses the target.
inline double solve_snr_for_fer(const std::function<double(double)>& fer_at_snr,
                                double target, double lo, double hi,
                                double tol_db = 0.02) {
  if (!(fer_at_snr(lo) > target))
    throw std::runtime_error("solve_snr_for_fer: already below target at low edge");
  if (!(fer_at_snr(hi) < target))
    throw std::runtime_error("solve_snr_for_fer: target not reached at high edge");
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    (fer_at_snr(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Scans a decreasing FER curve on a coarse SNR grid and interpolates the
// crossing log-linearly. Cheaper than bisection when each evaluation is a
// Monte-Carlo run, and robust to its noise.
inline double scan_snr_for_fer(const std::function<double(double)>& fer_at_snr,
                               double target, double start, double step, double max_snr) {
  double prev_snr = start;
  double prev_fer = fer_at_snr(start);
  if (prev_fer <= target) return start;
  for (double snr = start + step; snr <= max_snr + 1e-9; snr += step) {
    const double fer = fer_at_snr(snr);
    if (fer <= target && fer < prev_fer) {
      const double la = std::log10(prev_fer);
      const double lb = std::log10(std::max(fer, 1e-300));
      const double lt = std::log10(target);
      return prev_snr + (snr - prev_snr) * (la - lt) / (la - lb);
    }
    if (fer < prev_fer) {
      prev_snr = snr;
      prev_fer = fer;
    }
  }
  throw std::runtime_error("scan_snr_for_fer: target not reached by max snr");
}

// Calibrated default for the design recipe's horizontal gap tolerance (dB).
inline constexpr double kDesignGapTolDb = 0.40;

struct DesignResult {
  int w0 = 0;
  double snr_partial_db = 0;
  double snr_conv_db = 0;
  double gap_db = 0;
};

// Design recipe: the smallest w0 whose NU-profile partially RCU bound crosses
// the target FER within gap_db_tol (horizontally) of the conventional RCU
// bound. The gap is nonincreasing in w0, so bisection applies.
inline DesignResult design_w0_detailed(int n, int k, double target_fer,
                                       double gap_db_tol, const RcuOptions& opt = {},
                                       double snr_lo = -4.0, double snr_hi = 16.0) {
  if (!(target_fer > 0 && target_fer < 1))
    throw std::invalid_argument("design_w0: target_fer out of (0,1)");
  const double rate = static_cast<double>(k) / n;
  auto sigma_at = [rate](double snr) { return sigma_from_ebn0(snr, rate); };
  auto conv_at = [&](double snr) {
    return conventional_rcu(n, k, ChannelSpec::awgn(sigma_at(snr)), opt).value;
  };
  const double snr_conv = scan_snr_for_fer(conv_at, target_fer, snr_lo, 0.5, snr_hi);
  auto snr_of_w0 = [&](int w0) {
    const Profile p = nu_profile(n, k, w0);
    auto part_at = [&](double snr) {
      return partial_rcu(p, ChannelSpec::awgn(sigma_at(snr)), opt).value;
    };
    // The partially RCU curve sits to the right of the conventional one, so
    // start the scan just below the conventional crossing.
    return scan_snr_for_fer(part_at, target_fer, snr_conv - 0.25, 0.5, snr_hi);
  };
  int lo = (n + k - 1) / k;
  int hi = n - (k - 1);
  if (snr_of_w0(hi) - snr_conv > gap_db_tol)
    throw std::runtime_error("design_w0: no feasible w0 meets the gap tolerance");
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (snr_of_w0(mid) - snr_conv <= gap_db_tol)
      hi = mid;
    else
      lo = mid + 1;
  }
  DesignResult res;
  res.w0 = lo;
  res.snr_partial_db = snr_of_w0(lo);
  res.snr_conv_db = snr_conv;
  res.gap_db = res.snr_partial_db - snr_conv;
  return res;
}

inline int design_w0(int n, int k, double target_fer,
                     double gap_db_tol = kDesignGapTolDb, const RcuOptions& opt = {}) {
  return design_w0_detailed(n, k, target_fer, gap_db_tol, opt).w0;
}

}  // namespace sgmc
