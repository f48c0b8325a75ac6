#pragma once

// Staircase profiles: the k-tuple of staircase widths that defines an SGMC
// shape, plus the RM-derived and nearly uniform constructions.

#include <bit>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgmc {

struct Profile {
  std::vector<int> widths;

  Profile() = default;
  explicit Profile(std::vector<int> w) : widths(std::move(w)) { validate(); }

  int k() const { return static_cast<int>(widths.size()); }
  int n() const { return std::accumulate(widths.begin(), widths.end(), 0); }

  // n_l = w_0 + ... + w_l (inclusive partial lengths, size k).
  std::vector<int> partial_lengths() const {
    std::vector<int> nl(widths.size());
    int acc = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      acc += widths[i];
      nl[i] = acc;
    }
    return nl;
  }

  // R_l = l / n_l.
  std::vector<double> partial_rates() const {
    auto nl = partial_lengths();
    std::vector<double> r(nl.size());
    for (std::size_t l = 0; l < nl.size(); ++l)
      r[l] = static_cast<double>(l) / nl[l];
    return r;
  }

  double rate() const { return static_cast<double>(k()) / n(); }

  void validate() const {
    if (widths.empty()) throw std::invalid_argument("profile: empty");
    for (int w : widths)
      if (w < 1) throw std::invalid_argument("profile: width < 1");
  }

  friend bool operator==(const Profile&, const Profile&) = default;
};

// Profile of the length-2^m order-r RM (or polar) code. The polar kernel row
// with index i has its rightmost one at column i, so sorting the selected row
// indices (popcount(i) >= m-r) and taking consecutive gaps yields the
// staircase widths.
inline Profile rm_profile(int r, int m) {
  if (r < 0 || r > m) throw std::invalid_argument("rm_profile: need 0 <= r <= m");
  std::vector<int> widths;
  int prev = -1;
  for (int i = 0; i < (1 << m); ++i) {
    if (std::popcount(static_cast<unsigned>(i)) >= m - r) {
      widths.push_back(i - prev);
      prev = i;
    }
  }
  return Profile(std::move(widths));
}

// Nearly uniform profile: one wide first staircase, the rest split as evenly
// as possible (ceil widths first).
inline Profile nu_profile(int n, int k, int w0) {
  if (k < 2) throw std::invalid_argument("nu_profile: need k >= 2");
  if (w0 < (n + k - 1) / k) throw std::invalid_argument("nu_profile: w0 < ceil(n/k)");
  if (w0 > n - (k - 1)) throw std::invalid_argument("nu_profile: w0 too large");
  const int rest = n - w0;
  const int hi = (rest + k - 2) / (k - 1);
  const int lo = rest / (k - 1);
  // j copies of hi, k-1-j copies of lo, summing to rest.
  const int j = hi == lo ? 0 : rest - lo * (k - 1);
  std::vector<int> widths;
  widths.reserve(k);
  widths.push_back(w0);
  for (int i = 0; i < j; ++i) widths.push_back(hi);
  for (int i = j; i < k - 1; ++i) widths.push_back(lo);
  return Profile(std::move(widths));
}

// File format: a single line of comma-separated widths.
inline Profile parse_profile(const std::string& line) {
  std::vector<int> widths;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    widths.push_back(std::stoi(tok));
  }
  return Profile(std::move(widths));
}

inline std::string format_profile(const Profile& p) {
  std::string s;
  for (std::size_t i = 0; i < p.widths.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.widths[i]);
  }
  return s;
}

inline Profile load_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open profile file: " + path);
  std::string line;
  std::getline(f, line);
  return parse_profile(line);
}

}  // namespace sgmc
