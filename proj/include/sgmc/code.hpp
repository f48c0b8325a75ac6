#pragma once

// Sampled staircase generator matrix codes: random generator construction,
// message recovery by staircase back-substitution, and the hex import/export
// format.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sgmc/bits.hpp"
#include "sgmc/profile.hpp"
#include "sgmc/rng.hpp"

namespace sgmc {

struct SgmcCode {
  Profile profile;
  BitMatrix generator;  // k x n
  std::uint64_t seed = 0;

  int k() const { return generator.rows(); }
  int n() const { return generator.cols(); }
};

// Row l is (h_l, 1^{w_l}, 0...): ones on the staircase, random bits below it.
// The random words are keyed by (seed, row, word index), so the matrix is
// reproducible regardless of generation order.
inline SgmcCode sample_generator(const Profile& profile, std::uint64_t seed) {
  profile.validate();
  const int k = profile.k();
  const int n = profile.n();
  const auto nl = profile.partial_lengths();
  BitMatrix g(k, n);
  BitVec row(n);
  for (int l = 0; l < k; ++l) {
    const int h_len = l == 0 ? 0 : nl[l - 1];
    for (int j = 0; j < BitVec::words_for(h_len); ++j)
      row.set_word(j, rng::derive(seed, static_cast<std::uint64_t>(l), j));
    for (int i = h_len; i < n; ++i) row.set(i, false);
    for (int i = h_len; i < nl[l]; ++i) row.set(i, true);
    g.set_row(l, row);
  }
  return SgmcCode{profile, std::move(g), seed};
}

// Inverse of encode for staircase generators. Working from the last staircase
// backwards, column n_l - 1 of the residual is touched only by row l once the
// later rows have been subtracted, so each message bit can be read off
// directly. Throws if the residual is nonzero at the end (not a codeword).
inline BitVec recover_message(const SgmcCode& code, const BitVec& c) {
  if (c.size() != code.n())
    throw std::invalid_argument("recover_message: length mismatch");
  const auto nl = code.profile.partial_lengths();
  BitVec residual = c;
  BitVec u(code.k());
  for (int l = code.k() - 1; l >= 0; --l) {
    if (residual.get(nl[l] - 1)) {
      u.set(l, true);
      code.generator.xor_row_into(l, residual);
    }
  }
  if (residual.any()) throw std::invalid_argument("recover_message: not a codeword");
  return u;
}

// Text format: a header line "n k seed", then one hex-packed row per
// generator row. Hex digit j of a row packs bits 4j..4j+3 (bit 4j is the
// digit's least significant bit). The profile is implicit in the staircase
// structure and is reconstructed on load.
inline void save_generator(std::ostream& os, const SgmcCode& code) {
  os << code.n() << ' ' << code.k() << ' ' << code.seed << '\n';
  static const char* hex = "0123456789abcdef";
  for (int r = 0; r < code.k(); ++r) {
    std::string line((code.n() + 3) / 4, '0');
    for (std::size_t d = 0; d < line.size(); ++d) {
      int v = 0;
      for (int b = 0; b < 4; ++b) {
        const int c = static_cast<int>(d) * 4 + b;
        if (c < code.n() && code.generator.get(r, c)) v |= 1 << b;
      }
      line[d] = hex[v];
    }
    os << line << '\n';
  }
}

inline void save_generator(const std::string& path, const SgmcCode& code) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  save_generator(f, code);
}

inline SgmcCode load_generator(std::istream& is) {
  int n = 0, k = 0;
  std::uint64_t seed = 0;
  if (!(is >> n >> k >> seed)) throw std::runtime_error("generator file: bad header");
  std::string line;
  std::getline(is, line);  // rest of header line
  BitMatrix g(k, n);
  for (int r = 0; r < k; ++r) {
    if (!std::getline(is, line)) throw std::runtime_error("generator file: truncated");
    if (static_cast<int>(line.size()) < (n + 3) / 4)
      throw std::runtime_error("generator file: short row");
    for (int c = 0; c < n; ++c) {
      const char h = line[c / 4];
      const int v = h <= '9' ? h - '0' : (h | 0x20) - 'a' + 10;
      if (v >> (c & 3) & 1) g.set(r, c, true);
    }
  }
  // Recover the profile from the staircase shape: row l ends its ones run at
  // column n_l - 1, zeros follow, and the run starts right after n_{l-1} - 1.
  std::vector<int> widths(k);
  int prev_end = -1;
  for (int r = 0; r < k; ++r) {
    int last = -1;
    for (int c = n - 1; c >= 0; --c)
      if (g.get(r, c)) {
        last = c;
        break;
      }
    if (last <= prev_end) throw std::runtime_error("generator file: not a staircase matrix");
    for (int c = prev_end + 1; c <= last; ++c)
      if (!g.get(r, c)) throw std::runtime_error("generator file: broken staircase run");
    widths[r] = last - prev_end;
    prev_end = last;
  }
  if (prev_end != n - 1) throw std::runtime_error("generator file: staircase does not span n");
  return SgmcCode{Profile(std::move(widths)), std::move(g), seed};
}

inline SgmcCode load_generator_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open generator file: " + path);
  return load_generator(f);
}

}  // namespace sgmc
