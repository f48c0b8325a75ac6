#pragma once

// Finite-length analysis over BIOS channels: partial mutual information,
// Gallager exponents for the staircase ensemble, exact pairwise error
// probabilities, Craig-form single and pairwise codeword error integrals, and
// the second-order Bonferroni lower bound.
//
// All Gaussian-channel integrals use adaptive Gauss-Kronrod quadrature over
// y in [-1-10*sigma, 1+10*sigma]. Error probabilities follow the convention
// PEP(d) = Q(sqrt(d)/sigma) (unit-amplitude BPSK, per-dimension variance
// sigma^2); the literal integrand of the paper-form Craig integral,
// Q(sqrt(2d)/sigma), is kept available as an alternate mode.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "sgmc/bits.hpp"
#include "sgmc/channel.hpp"
#include "sgmc/code.hpp"
#include "sgmc/mathutil.hpp"
#include "sgmc/profile.hpp"

namespace sgmc {

namespace detail {

inline double gauss_pdf(double y, double mean, double sigma) {
  const double t = (y - mean) / sigma;
  return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * M_PI));
}

template <typename F>
double awgn_integral(const F& f, double sigma) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(f, -1.0 - 10.0 * sigma, 1.0 + 10.0 * sigma,
                                              15, 1e-11);
}

}  // namespace detail

struct MutualInfo {
  double i0, i1, i;
};

// Partial mutual information I0/I1 (base-2) for input distribution
// P(1) = p; i = (1-p) i0 + p i1.
inline MutualInfo partial_mutual_info(const ChannelSpec& ch, double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("partial_mutual_info: p out of [0,1]");
  const double q = 1.0 - p;
  if (ch.kind == ChannelKind::Bsc) {
    const double e = ch.epsilon;
    auto term = [](double cond, double marg) {
      return cond <= 0 ? 0.0 : cond * std::log2(cond / marg);
    };
    const double m0 = q * (1 - e) + p * e;  // P(y=0)
    const double m1 = q * e + p * (1 - e);
    const double i0 = p == 0 ? 0.0 : term(1 - e, m0) + term(e, m1);
    const double i1 = p == 1 ? 0.0 : term(e, m0) + term(1 - e, m1);
    return {i0, i1, q * i0 + p * i1};
  }
  const double s = ch.sigma;
  auto p0 = [s](double y) { return detail::gauss_pdf(y, 1.0, s); };
  auto p1 = [s](double y) { return detail::gauss_pdf(y, -1.0, s); };
  double i0 = 0, i1 = 0;
  if (p > 0)
    i0 = detail::awgn_integral(
        [&](double y) {
          const double a = p0(y);
          return a <= 0 ? 0.0 : a * std::log2(a / (q * a + p * p1(y)));
        },
        s);
  if (p < 1)
    i1 = detail::awgn_integral(
        [&](double y) {
          const double b = p1(y);
          return b <= 0 ? 0.0 : b * std::log2(b / (q * p0(y) + p * b));
        },
        s);
  return {i0, i1, q * i0 + p * i1};
}

// Gallager E0 (base-2) with mixed input weight p:
// -log2 sum_y P(y|0)^s [(1-p) P(y|0)^s + p P(y|1)^s]^gamma, s = 1/(1+gamma).
inline double gallager_e0(const ChannelSpec& ch, double p, double gamma) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("gallager_e0: p out of [0,1]");
  if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("gallager_e0: gamma out of [0,1]");
  if (gamma == 0) return 0.0;
  const double s = 1.0 / (1.0 + gamma);
  const double q = 1.0 - p;
  if (ch.kind == ChannelKind::Bsc) {
    const double e = ch.epsilon;
    double acc = 0;
    const double conds[2][2] = {{1 - e, e}, {e, 1 - e}};  // [y][x]
    for (int y = 0; y < 2; ++y) {
      const double a = std::pow(conds[y][0], s);
      const double b = std::pow(conds[y][1], s);
      acc += a * std::pow(q * a + p * b, gamma);
    }
    return -std::log2(acc);
  }
  const double sg = ch.sigma;
  const double acc = detail::awgn_integral(
      [&](double y) {
        const double a = std::pow(detail::gauss_pdf(y, 1.0, sg), s);
        const double b = std::pow(detail::gauss_pdf(y, -1.0, sg), s);
        return a * std::pow(q * a + p * b, gamma);
      },
      sg);
  return -std::log2(acc);
}

struct ExponentTerm {
  int nl = 0;
  double rate = 0;
  double gamma_star = 0;
  double exponent = 0;  // E(w_l, R_l), base-2
};

struct ExponentBound {
  std::vector<ExponentTerm> terms;
  double fer_bound = 1.0;   // min(1, sum_l 2^{-n_l E_l})
  double log2_sum = 0.0;    // log2 of the unclipped sum (monotonicity checks)
};

// Theorem-style ensemble FER bound: per-l exponents maximized over gamma by
// ternary search (the objective is concave in gamma).
inline ExponentBound staircase_exponent(const Profile& profile, const ChannelSpec& ch) {
  profile.validate();
  const auto nl = profile.partial_lengths();
  ExponentBound out;
  std::vector<double> exps;
  for (int l = 0; l < profile.k(); ++l) {
    const double w = profile.widths[l];
    const double n_l = nl[l];
    const double rate = static_cast<double>(l) / n_l;
    auto objective = [&](double g) {
      return ((n_l - w) / n_l) * gallager_e0(ch, 0.5, g) +
             (w / n_l) * gallager_e0(ch, 1.0, g) - g * rate;
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-6) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (objective(m1) < objective(m2))
        lo = m1;
      else
        hi = m2;
    }
    const double gs = 0.5 * (lo + hi);
    const double e = std::max(0.0, std::max(objective(gs), objective(0.0)));
    out.terms.push_back({nl[l], rate, gs, e});
    exps.push_back(-n_l * e * std::log(2.0));
  }
  const double ln_sum = log_sum_exp(exps);
  out.fer_bound = ln_sum >= 0 ? 1.0 : std::exp(ln_sum);
  out.log2_sum = ln_sum / std::log(2.0);
  return out;
}

// ---------------------------------------------------------------------------
// Pairwise error probability: Pr over uniform b in F2^m that
// sum_i b_i lambda_i + block_sum <= 0 (ties count as errors).

struct PepResult {
  double lower = 0, upper = 0;
  bool exact = false;
  double value() const { return 0.5 * (lower + upper); }
};

namespace detail {

inline double pep_enumerate(const double* lam, int m, double block_sum) {
  const std::uint64_t total = std::uint64_t{1} << m;
  std::uint64_t gray = 0, count = block_sum <= 0 ? 1 : 0;
  double sum = block_sum;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int b = std::countr_zero(i);
    gray ^= std::uint64_t{1} << b;
    sum += (gray >> b & 1) ? lam[b] : -lam[b];
    count += sum <= 0;
  }
  return static_cast<double>(count) / static_cast<double>(total);
}

// Directional-rounding DP over the equivalent nonnegative subset-sum
// (sum_i c_i |lambda_i| <= xp): returns rigorous-to-rounding brackets.
inline PepResult pep_dp_brackets(const double* lam, int m, double block_sum, int bins) {
  double offset = 0, sum_abs = 0;
  for (int i = 0; i < m; ++i) {
    offset += std::min(lam[i], 0.0);
    sum_abs += std::fabs(lam[i]);
  }
  const double xp = -block_sum - offset;
  if (xp < 0) return {0.0, 0.0, true};
  if (xp >= sum_abs) return {1.0, 1.0, true};
  if (xp == 0 || sum_abs == 0) {
    int nonzero = 0;
    for (int i = 0; i < m; ++i) nonzero += lam[i] != 0;
    const double p = std::exp2(-nonzero);
    return {p, p, true};
  }
  const double q = xp / bins;
  const int t = bins;
  std::vector<double> lo_pmf(t + 1, 0.0), hi_pmf(t + 1, 0.0);
  lo_pmf[0] = hi_pmf[0] = 1.0;
  int halvings = 0;
  for (int i = 0; i < m; ++i) {
    const double a = std::fabs(lam[i]);
    if (a >= (t + 1.5) * q) {  // out of the window for both roundings
      ++halvings;
      continue;
    }
    const long d_lo = static_cast<long>(std::floor(a / q + 1e-12));
    const long d_hi = static_cast<long>(std::ceil(a / q - 1e-12));
    for (int j = t; j >= 0; --j)
      lo_pmf[j] = 0.5 * lo_pmf[j] + (j >= d_lo ? 0.5 * lo_pmf[j - d_lo] : 0.0);
    for (int j = t; j >= 0; --j)
      hi_pmf[j] = 0.5 * hi_pmf[j] + (j >= d_hi ? 0.5 * hi_pmf[j - d_hi] : 0.0);
  }
  PepResult r;
  for (int j = 0; j <= t; ++j) {
    r.upper += lo_pmf[j];  // rounded-down increments overcount the event
    r.lower += hi_pmf[j];
  }
  r.upper = std::min(1.0, std::ldexp(r.upper, -halvings));
  r.lower = std::ldexp(r.lower, -halvings);
  r.exact = false;
  return r;
}

}  // namespace detail

inline PepResult pep_exact(const std::vector<double>& lambda_random, double block_sum,
                           int max_exact_m = 22, double rel_tol = 0.01) {
  const int m = static_cast<int>(lambda_random.size());
  if (m <= max_exact_m) {
    if (m > 30) throw std::invalid_argument("pep_exact: enumeration too large");
    const double p = detail::pep_enumerate(lambda_random.data(), m, block_sum);
    return {p, p, true};
  }
  int bins = 1 << 12;
  PepResult r;
  while (true) {
    r = detail::pep_dp_brackets(lambda_random.data(), m, block_sum, bins);
    if (r.exact || r.upper - r.lower <= rel_tol * std::max(r.value(), 1e-300)) break;
    if (bins >= (1 << 21)) break;
    bins *= 2;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Craig-form error integrals and the Bonferroni lower bound.

// Single-codeword pairwise error probability at Hamming weight w under the
// declared convention; equals Q(sqrt(w)/sigma).
inline double craig_pep(double w, double sigma) {
  using boost::math::quadrature::gauss_kronrod;
  const double c = w / (2.0 * sigma * sigma);
  auto f = [c](double th) {
    const double s = std::sin(th);
    return std::exp(-c / (s * s));
  };
  return gauss_kronrod<double, 31>::integrate(f, 0.0, M_PI / 2, 15, 1e-11) / M_PI;
}

// The literal paper-form integrand, exp(-w / (sigma^2 sin^2 theta)), i.e.
// Q(sqrt(2w)/sigma). Alternate mode only; not used by the toolkit's bounds.
inline double craig_pep_paper_form(double w, double sigma) {
  return craig_pep(2.0 * w, sigma);
}

// Joint probability Pr{X > x, Y > y} for standard bivariate normal variables
// with correlation rho (x, y >= 0), via the Craig-type single-integral form.
inline double psi_joint(double x, double y, double rho) {
  if (x < 0 || y < 0) throw std::invalid_argument("psi_joint: need x, y >= 0");
  if (rho >= 1.0 - 1e-12) return q_func(std::max(x, y));
  if (rho <= -1.0 + 1e-12) return std::max(0.0, q_func(x) + q_func(y) - 1.0);
  using boost::math::quadrature::gauss_kronrod;
  const double r2 = 1.0 - rho * rho;
  auto piece = [&](double v, double a, double b) {
    if (b <= a) return 0.0;
    auto f = [&](double th) {
      const double s2 = std::sin(th) * std::sin(th);
      const double d = 1.0 - rho * std::sin(2.0 * th);
      if (s2 <= 0) return 0.0;
      return std::sqrt(r2) / d * std::exp(-0.5 * v * v * d / (r2 * s2));
    };
    return gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-11);
  };
  const double split = std::atan2(y, x);
  return (piece(x, 0.0, M_PI / 2 - split) + piece(y, 0.0, split)) / (2.0 * M_PI);
}

struct BonferroniOptions {
  int count = 1023;          // requested number of codewords
  bool lowest_weight = false;  // pick lowest-weight codewords instead of a subcode
};

// Second-order Bonferroni lower bound on the ML FER of a fixed code:
// sum_i Pr{E_i} - sum_{i<j} Pr{E_i n E_j}, with codewords drawn from a
// low-dimensional subcode D_j (2^j - 1 <= count) by default.
inline double bonferroni_lb(const SgmcCode& code, double sigma,
                            const BonferroniOptions& opt = {}) {
  if (!(sigma > 0)) throw std::invalid_argument("bonferroni_lb: sigma must be positive");
  if (opt.count < 1 || opt.count > 4096)
    throw std::invalid_argument("bonferroni_lb: count out of [1, 4096]");
  std::vector<BitVec> words;
  if (!opt.lowest_weight) {
    int j = 0;
    while ((1 << (j + 1)) - 1 <= opt.count && j + 1 <= code.k()) ++j;
    SubcodeStream s(code.generator, j);
    BitVec c;
    s.next(c);  // skip the zero codeword
    while (s.next(c)) words.push_back(c);
  } else {
    const int j = std::min(code.k(), 18);
    std::vector<std::pair<int, int>> order;  // (weight, index)
    std::vector<BitVec> all;
    SubcodeStream s(code.generator, j);
    BitVec c;
    s.next(c);
    while (s.next(c)) {
      order.emplace_back(c.popcount(), static_cast<int>(all.size()));
      all.push_back(c);
    }
    std::stable_sort(order.begin(), order.end());
    const int take = std::min<int>(opt.count, static_cast<int>(all.size()));
    for (int i = 0; i < take; ++i) words.push_back(all[order[i].second]);
  }
  const int count = static_cast<int>(words.size());
  std::vector<int> weight(count);
  double singles = 0;
  for (int i = 0; i < count; ++i) {
    weight[i] = words[i].popcount();
    singles += q_func(std::sqrt(static_cast<double>(weight[i])) / sigma);
  }
  std::map<std::tuple<int, int, int>, double> memo;
  double pairs = 0;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const int wij = (words[i] ^ words[j]).popcount();
      if (wij == 0)
        throw std::invalid_argument("bonferroni_lb: identical codewords (rho = 1)");
      const int wa = std::min(weight[i], weight[j]);
      const int wb = std::max(weight[i], weight[j]);
      const auto key = std::make_tuple(wa, wb, wij);
      auto it = memo.find(key);
      if (it == memo.end()) {
        const double rho = (wa + wb - wij) / (2.0 * std::sqrt(double(wa) * wb));
        const double v = psi_joint(std::sqrt(double(wa)) / sigma,
                                   std::sqrt(double(wb)) / sigma, rho);
        it = memo.emplace(key, v).first;
      }
      pairs += it->second;
    }
  }
  return std::clamp(singles - pairs, 0.0, 1.0);
}

}  // namespace sgmc
