#pragma once

// Ensemble weight spectrum of random SGMCs, the totally random reference
// spectrum, the d_min,2 distribution, and the weight-enumerator union bound.
//
// Spectrum coefficients are dyadic rationals: the polynomial identity
//   B(X) = 1 + sum_l 2^l X^{w_l} (1/2 + X/2)^{n_l - w_l}
// is expanded exactly as big-integer numerators over a common power-of-two
// denominator; floating point only appears at the reporting boundary.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sgmc/mathutil.hpp"
#include "sgmc/profile.hpp"

namespace sgmc {

using BigInt = boost::multiprecision::cpp_int;

inline double log2_big(const BigInt& x) {
  if (x == 0) return -kInf;
  const long b = static_cast<long>(boost::multiprecision::msb(x));
  if (b <= 900) return std::log2(x.convert_to<double>());
  const BigInt top = x >> (b - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(b - 52);
}

inline std::vector<BigInt> binomial_row(int n) {
  std::vector<BigInt> c(n + 1);
  c[0] = 1;
  for (int j = 1; j <= n; ++j) c[j] = c[j - 1] * (n - j + 1) / j;
  return c;
}

struct WeightSpectrum {
  std::vector<BigInt> num;  // A_d = num[d] / 2^shift, d = 0..n
  int shift = 0;
  int n = 0;
  int k = 0;

  double coeff(int d) const {
    const BigInt& x = num[d];
    if (x == 0) return 0.0;
    if (boost::multiprecision::msb(x) < 1000 && shift < 1000)
      return std::ldexp(x.convert_to<double>(), -shift);
    return std::exp2(log2_big(x) - shift);
  }
  double log2_coeff(int d) const { return log2_big(num[d]) - shift; }

  // Exact identities for tests: sum_d A_d == 2^k and A_0 == 1.
  BigInt exact_sum() const {
    BigInt s = 0;
    for (const BigInt& v : num) s += v;
    return s;
  }
  BigInt denominator() const { return BigInt(1) << shift; }
};

inline WeightSpectrum sgmc_spectrum(const Profile& profile) {
  profile.validate();
  const int n = profile.n();
  const int k = profile.k();
  const auto nl = profile.partial_lengths();
  int shift = 0;
  for (int l = 0; l < k; ++l) shift = std::max(shift, (nl[l] - profile.widths[l]) - l);
  WeightSpectrum ws;
  ws.n = n;
  ws.k = k;
  ws.shift = shift;
  ws.num.assign(n + 1, 0);
  ws.num[0] = BigInt(1) << shift;
  for (int l = 0; l < k; ++l) {
    const int m = nl[l] - profile.widths[l];  // random prefix length n_{l-1}
    const int e = l + shift - m;              // 2^l / 2^m over the 2^shift denominator
    const auto binom = binomial_row(m);
    for (int j = 0; j <= m; ++j) ws.num[profile.widths[l] + j] += binom[j] << e;
  }
  return ws;
}

inline WeightSpectrum random_code_spectrum(int n, int k) {
  if (n < 1 || k < 0) throw std::invalid_argument("random_code_spectrum: bad shape");
  WeightSpectrum ws;
  ws.n = n;
  ws.k = k;
  ws.shift = n;
  ws.num.assign(n + 1, 0);
  const BigInt mult = (BigInt(1) << k) - 1;
  const auto binom = binomial_row(n);
  for (int d = 0; d <= n; ++d) ws.num[d] = binom[d] * mult;
  ws.num[0] += BigInt(1) << n;
  return ws;
}

// Distribution of d_min,2 = min weight of the 2-dimensional subcode, over the
// ensemble: d = w1 + i with i in [0, min(floor(w0/2), w0-w1)], remainder mass
// at the cap.
struct Dmin2Pmf {
  int w1 = 0;
  std::vector<double> pmf;  // index i corresponds to d = w1 + i

  double prob_at_least(int d) const {
    double p = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i)
      if (w1 + static_cast<int>(i) >= d) p += pmf[i];
    return p;
  }
};

inline Dmin2Pmf dmin2_pmf(int w0, int w1) {
  if (w1 < 1 || w0 < w1) throw std::invalid_argument("dmin2_pmf: need w0 >= w1 >= 1");
  const int cap = std::min(w0 / 2, w0 - w1);
  Dmin2Pmf out;
  out.w1 = w1;
  out.pmf.assign(cap + 1, 0.0);
  const auto binom = binomial_row(w0);
  double below = 0;
  for (int i = 0; i < cap; ++i) {
    out.pmf[i] = binom[i].convert_to<double>() * std::exp2(1 - w0);
    below += out.pmf[i];
  }
  out.pmf[cap] = 1.0 - below;
  return out;
}

// Union bound on the FER: sum_{d>=1} A_d Q(sqrt(d)/sigma), clipped at 1 and
// accumulated in the log domain.
inline double union_bound(const WeightSpectrum& ws, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("union_bound: sigma must be positive");
  std::vector<double> terms;
  terms.reserve(ws.num.size());
  for (int d = 1; d <= ws.n; ++d) {
    if (ws.num[d] == 0) continue;
    const double ln_ad = (log2_big(ws.num[d]) - ws.shift) * std::log(2.0);
    terms.push_back(ln_ad + log_q(std::sqrt(static_cast<double>(d)) / sigma));
  }
  const double ln_ub = log_sum_exp(terms);
  return ln_ub >= 0 ? 1.0 : std::exp(ln_ub);
}

}  // namespace sgmc
