#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace sgmc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// ln Q(x), switching to the asymptotic series where erfc underflows.
inline double log_q(double x) {
  if (x < 36.0) return std::log(q_func(x));
  const double ix2 = 1.0 / (x * x);
  const double series = 1.0 + ix2 * (-1.0 + ix2 * (3.0 + ix2 * (-15.0 + ix2 * 105.0)));
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

inline double log_sum_exp(const std::vector<double>& xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Wilson 95% score interval for a binomial proportion.
struct Interval {
  double low, high;
};
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace sgmc
