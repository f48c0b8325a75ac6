#pragma once

// Soft-decision decoders for staircase generator matrix codes:
//
//  - lc_rosd_decode: representative basis (one most-reliable column per
//    staircase, so the basis block is unit lower triangular and reduces with
//    the row-local kernel), plus delta extra reliable columns that impose a
//    local constraint on the test error patterns.
//  - lc_osd_decode: same TEP search over a globally most-reliable extended
//    basis, established by serial Gaussian elimination with column pivoting.
//  - osd_decode: original reprocessing of all weight <= t patterns on the
//    most reliable basis.
//  - ml_bruteforce: exhaustive soft-weight minimization, the oracle.
//
// TEPs are streamed in non-decreasing partial soft weight by a serial list
// Viterbi search over the trellis whose 2^delta states are running e_L * P1
// prefixes. Minimizing the soft weight sum(e_i * |llr_i|) over
// codeword-consistent patterns is maximum-likelihood decoding.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "sgmc/bits.hpp"
#include "sgmc/channel.hpp"
#include "sgmc/code.hpp"

namespace sgmc {

struct BasisPermutation {
  std::vector<int> perm;  // perm[j] = original column placed at position j
  int k = 0;
  int delta = 0;
};

// Position i of the basis is the most reliable column of staircase i (ties to
// the lowest original index); the next delta positions are the most reliable
// remaining columns; the rest follow in decreasing reliability.
inline BasisPermutation select_representative_basis(const SgmcCode& code,
                                                    const std::vector<double>& reliability,
                                                    int delta) {
  const int n = code.n(), k = code.k();
  if (static_cast<int>(reliability.size()) != n)
    throw std::invalid_argument("select_representative_basis: reliability length");
  if (delta < 0 || delta > n - k)
    throw std::invalid_argument("select_representative_basis: delta out of range");
  const auto nl = code.profile.partial_lengths();
  BasisPermutation bp;
  bp.k = k;
  bp.delta = delta;
  bp.perm.reserve(n);
  std::vector<char> taken(n, 0);
  for (int i = 0; i < k; ++i) {
    const int lo = i == 0 ? 0 : nl[i - 1];
    int best = lo;
    for (int t = lo + 1; t < nl[i]; ++t)
      if (reliability[t] > reliability[best]) best = t;
    bp.perm.push_back(best);
    taken[best] = 1;
  }
  std::vector<int> rest;
  rest.reserve(n - k);
  for (int t = 0; t < n; ++t)
    if (!taken[t]) rest.push_back(t);
  std::stable_sort(rest.begin(), rest.end(),
                   [&](int a, int b) { return reliability[a] > reliability[b]; });
  bp.perm.insert(bp.perm.end(), rest.begin(), rest.end());
  return bp;
}

struct TepCandidate {
  BitVec e_basis;         // e_L, length k
  BitVec e_mid;           // e_M, length delta; e_L*P1 ^ e_M == s0
  double partial_weight;  // Gamma_LM over the first k+delta permuted positions
};

// Serial list Viterbi enumeration of all (e_L, e_M) satisfying the local
// constraint, in non-decreasing Gamma_LM. Exact best-completion costs come
// from one backward sweep; candidates are organized as a Lawler partition
// (each heap node fixes a prefix and one flipped branch), so every pattern is
// emitted exactly once and the heap top always carries the next weight.
class TepStream {
 public:
  TepStream(const BitMatrix& p1, const BitVec& s0, std::vector<double> reliability)
      : k_(p1.rows()), delta_(p1.cols()), r_(std::move(reliability)) {
    if (s0.size() != delta_) throw std::invalid_argument("TepStream: s0 length");
    if (static_cast<int>(r_.size()) != k_ + delta_)
      throw std::invalid_argument("TepStream: reliability length");
    if (delta_ > 24) throw std::invalid_argument("TepStream: delta too large");
    const std::size_t states = std::size_t{1} << delta_;
    if ((k_ + 1) * states > (std::size_t{1} << 24))
      throw std::invalid_argument("TepStream: trellis too large");
    s0_ = 0;
    for (int j = 0; j < delta_; ++j)
      if (s0.get(j)) s0_ |= 1u << j;
    p1row_.resize(k_);
    for (int i = 0; i < k_; ++i) {
      std::uint32_t m = 0;
      for (int j = 0; j < delta_; ++j)
        if (p1.get(i, j)) m |= 1u << j;
      p1row_[i] = m;
    }
    // Terminal cost of a state: soft weight of e_M = state ^ s0.
    std::vector<double> gcost(states, 0.0);
    for (std::uint32_t m = 1; m < states; ++m)
      gcost[m] = gcost[m & (m - 1)] + r_[k_ + std::countr_zero(m)];
    beta_.assign((k_ + 1) * states, 0.0);
    for (std::uint32_t s = 0; s < states; ++s) beta_[k_ * states + s] = gcost[s ^ s0_];
    for (int i = k_ - 1; i >= 0; --i) {
      const double* nxt = beta_.data() + (i + 1) * states;
      double* cur = beta_.data() + i * states;
      for (std::uint32_t s = 0; s < states; ++s) {
        const double stay = nxt[s];
        const double go = r_[i] + nxt[s ^ p1row_[i]];
        cur[s] = stay <= go ? stay : go;
      }
    }
    kw_ = BitVec::words_for(k_);
    push_node(beta_[0], 0, -1, 0);
  }

  bool exhausted() const { return heap_.empty(); }
  double next_weight() const { return heap_.top().cost; }
  std::uint64_t emitted() const { return emitted_; }

  // Candidates with Gamma_LM >= bound can be dropped before emission.
  void set_prune_bound(double bound) { prune_bound_ = bound; }

  TepCandidate next() {
    if (heap_.empty()) throw std::logic_error("TepStream: exhausted");
    const Node node = heap_.top();
    heap_.pop();
    // Materialize the full e_L: parent's bits below the branch, flipped bit at
    // it, best completion after it.
    scratch_bits_.assign(kw_, 0);
    std::vector<std::uint64_t>& bits = scratch_bits_;
    int start = 0;
    std::uint32_t state = 0;
    if (node.branch_pos >= 0) {
      const std::uint64_t* pb = &emitted_bits_[node.parent * kw_];
      for (int j = 0; j < kw_; ++j) bits[j] = pb[j];
      clear_from(bits, node.branch_pos);
      const bool parent_bit = (pb[node.branch_pos >> 6] >> (node.branch_pos & 63)) & 1;
      if (!parent_bit) bits[node.branch_pos >> 6] |= 1ULL << (node.branch_pos & 63);
      start = node.branch_pos + 1;
      state = node.state;
    }
    const std::size_t states = std::size_t{1} << delta_;
    for (int j = start; j < k_; ++j) {
      const double* nxt = beta_.data() + (j + 1) * states;
      const double go = r_[j] + nxt[state ^ p1row_[j]];
      if (go < nxt[state]) {
        bits[j >> 6] |= 1ULL << (j & 63);
        state ^= p1row_[j];
      }
    }
    const std::uint32_t emit_idx = static_cast<std::uint32_t>(emitted_);
    emitted_bits_.insert(emitted_bits_.end(), bits.begin(), bits.end());
    ++emitted_;
    // Children: detour at every position past this node's own branch.
    std::uint32_t st = 0;
    double cost = 0;
    for (int j = 0; j < k_; ++j) {
      const bool b = (bits[j >> 6] >> (j & 63)) & 1;
      if (j > node.branch_pos) {
        const std::uint32_t child_state = st ^ (b ? 0 : p1row_[j]);
        const double child_cost =
            cost + (b ? 0.0 : r_[j]) + beta_[(j + 1) * states + child_state];
        if (child_cost < prune_bound_) push_node(child_cost, child_state, j, emit_idx);
      }
      if (b) {
        st ^= p1row_[j];
        cost += r_[j];
      }
    }
    shrink_heap_if_needed();

    TepCandidate cand;
    cand.e_basis = BitVec(k_);
    for (int j = 0; j < kw_; ++j) cand.e_basis.set_word(j, bits[j]);
    cand.e_mid = BitVec(delta_);
    const std::uint32_t em = state ^ s0_;
    for (int j = 0; j < delta_; ++j)
      if (em >> j & 1) cand.e_mid.set(j, true);
    cand.partial_weight = node.cost;
    return cand;
  }

 private:
  struct Node {
    double cost;
    std::uint32_t state;   // state after the flipped branch
    std::int32_t branch_pos;
    std::uint32_t parent;  // emission index of the parent path
    std::uint64_t seq;     // deterministic tie-break
    bool operator>(const Node& o) const {
      return cost != o.cost ? cost > o.cost : seq > o.seq;
    }
  };

  void push_node(double cost, std::uint32_t state, std::int32_t pos, std::uint32_t parent) {
    heap_.push(Node{cost, state, pos, parent, seq_++});
  }

  static void clear_from(std::vector<std::uint64_t>& bits, int pos) {
    const int w = pos >> 6;
    bits[w] &= (1ULL << (pos & 63)) - 1;
    for (std::size_t j = w + 1; j < bits.size(); ++j) bits[j] = 0;
  }

  // The heap never needs more than the remaining emission budget; when it far
  // exceeds that, rebuild it from the smallest entries.
  void shrink_heap_if_needed() {
    const std::size_t cap = std::size_t{1} << 21;
    if (heap_.size() < cap) return;
    std::vector<Node> all;
    all.reserve(heap_.size());
    while (!heap_.empty()) {
      all.push_back(heap_.top());
      heap_.pop();
    }
    const std::size_t keep = cap / 2;
    all.resize(std::min(all.size(), keep));
    heap_ = Heap(all.begin(), all.end());
  }

  using Heap = std::priority_queue<Node, std::vector<Node>, std::greater<Node>>;

  int k_, delta_, kw_ = 0;
  std::vector<double> r_;
  std::uint32_t s0_ = 0;
  std::vector<std::uint32_t> p1row_;
  std::vector<double> beta_;
  Heap heap_;
  std::vector<std::uint64_t> emitted_bits_;
  std::vector<std::uint64_t> scratch_bits_;
  std::uint64_t emitted_ = 0;
  std::uint64_t seq_ = 0;
  double prune_bound_ = std::numeric_limits<double>::infinity();
};

struct DecodeResult {
  BitVec codeword;
  BitVec message;
  double soft_weight = 0;  // Gamma(z ^ codeword) against |llr|
  std::uint64_t teps_examined = 0;
  bool optimal = false;  // the sufficient stopping condition fired
};

namespace detail {

// Serial Gaussian elimination to [I | P] with row bookkeeping:
// transform * g == result. Requires the first g.rows() columns independent.
inline StaircaseReduction serial_systematize(BitMatrix g) {
  const int k = g.rows();
  BitMatrix t = BitMatrix::identity(k);
  for (int j = 0; j < k; ++j) {
    int pivot = -1;
    for (int r = j; r < k; ++r)
      if (g.get(r, j)) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::invalid_argument("systematize: dependent basis columns");
    g.swap_rows(j, pivot);
    t.swap_rows(j, pivot);
    for (int r = 0; r < k; ++r)
      if (r != j && g.get(r, j)) {
        g.row_xor_row(r, j);
        t.row_xor_row(r, j);
      }
  }
  return {std::move(g), std::move(t)};
}

// Order all columns by decreasing reliability (ties to the lowest index) and
// greedily take the first k that are linearly independent; delta more follow
// as the constraint columns, the rest trail in reliability order.
inline BasisPermutation select_reliability_basis(const BitMatrix& g,
                                                 const std::vector<double>& reliability,
                                                 int delta) {
  const int n = g.cols(), k = g.rows();
  if (delta < 0 || delta > n - k)
    throw std::invalid_argument("select_reliability_basis: delta out of range");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return reliability[a] > reliability[b]; });
  BitMatrix work = g;
  std::vector<char> row_used(k, 0), col_chosen(n, 0);
  std::vector<int> chosen;
  chosen.reserve(k);
  for (int c : order) {
    if (static_cast<int>(chosen.size()) == k) break;
    int pivot = -1;
    for (int r = 0; r < k; ++r)
      if (!row_used[r] && work.get(r, c)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    row_used[pivot] = 1;
    col_chosen[c] = 1;
    chosen.push_back(c);
    for (int r = 0; r < k; ++r)
      if (r != pivot && work.get(r, c)) work.row_xor_row(r, pivot);
  }
  if (static_cast<int>(chosen.size()) != k)
    throw std::invalid_argument("select_reliability_basis: generator is rank deficient");
  BasisPermutation bp;
  bp.k = k;
  bp.delta = delta;
  bp.perm = std::move(chosen);
  for (int c : order)
    if (!col_chosen[c]) bp.perm.push_back(c);
  return bp;
}

struct TepSearchOutcome {
  BitVec best_v_basis;  // z_L ^ e_L of the winner
  BitVec codeword;      // de-permuted
  double soft_weight;
  std::uint64_t teps_examined;
  bool optimal;
};

// Common LC search: stream TEPs under the local constraint, complete each to
// a full pattern through P2, keep the minimum full soft weight, and stop as
// soon as the next partial weight can no longer win.
inline TepSearchOutcome run_tep_search(const BitMatrix& gtilde,
                                       const std::vector<int>& perm,
                                       const SoftObservation& obs, int k, int delta,
                                       std::uint64_t lmax) {
  const int n = gtilde.cols();
  if (lmax < 1) throw std::invalid_argument("tep search: lmax must be >= 1");
  std::vector<double> rel_p(n);
  BitVec z_p(n);
  for (int j = 0; j < n; ++j) {
    rel_p[j] = obs.reliability[perm[j]];
    if (obs.hard.get(perm[j])) z_p.set(j, true);
  }
  // P1 and s0 = z_L * P1 ^ z_M.
  std::vector<int> mid_cols(delta), right_cols(n - k - delta);
  std::iota(mid_cols.begin(), mid_cols.end(), k);
  std::iota(right_cols.begin(), right_cols.end(), k + delta);
  const BitMatrix p1 = gtilde.select_columns(mid_cols);
  const BitMatrix p2 = gtilde.select_columns(right_cols);
  BitVec s0(delta);
  for (int i = 0; i < k; ++i)
    if (z_p.get(i)) p1.xor_row_into(i, s0);
  for (int j = 0; j < delta; ++j)
    if (z_p.get(k + j)) s0.flip(j);

  TepStream stream(p1, s0, std::vector<double>(rel_p.begin(), rel_p.begin() + k + delta));

  BitVec z_r(n - k - delta);
  for (int j = 0; j < n - k - delta; ++j)
    if (z_p.get(k + delta + j)) z_r.set(j, true);

  double best = std::numeric_limits<double>::infinity();
  BitVec best_v(k);
  std::uint64_t examined = 0;
  bool optimal = false;
  const int kw = BitVec::words_for(k);
  const int rw = p2.row_words();
  BitVec v(k);
  std::vector<std::uint64_t> acc(rw);
  while (true) {
    if (stream.exhausted()) {
      optimal = true;
      break;
    }
    if (examined > 0 && stream.next_weight() >= best) {
      optimal = true;
      break;
    }
    if (examined >= lmax) break;
    const TepCandidate cand = stream.next();
    ++examined;
    for (int j = 0; j < kw; ++j) v.set_word(j, z_p.word(j) ^ cand.e_basis.word(j));
    // e_R = v * P2 ^ z_R, accumulated word-wise; its soft weight completes
    // Gamma.
    for (int j = 0; j < rw; ++j) acc[j] = z_r.word(j);
    for (int i = 0; i < k; ++i)
      if (v.get(i)) {
        const std::uint64_t* row = p2.row_ptr(i);
        for (int j = 0; j < rw; ++j) acc[j] ^= row[j];
      }
    double gamma = cand.partial_weight;
    for (int j = 0; j < rw; ++j) {
      std::uint64_t bits = acc[j];
      while (bits) {
        const int b = std::countr_zero(bits);
        bits &= bits - 1;
        gamma += rel_p[k + delta + (j << 6) + b];
      }
    }
    if (gamma < best) {
      best = gamma;
      best_v = v;
      stream.set_prune_bound(best);
    }
  }

  TepSearchOutcome out;
  out.best_v_basis = best_v;
  BitVec v_full(n);
  for (int i = 0; i < k; ++i)
    if (best_v.get(i)) gtilde.xor_row_into(i, v_full);
  out.codeword = BitVec(n);
  for (int j = 0; j < n; ++j)
    if (v_full.get(j)) out.codeword.set(perm[j], true);
  BitVec e = out.codeword ^ obs.hard;
  out.soft_weight = soft_weight(e, obs.reliability);
  out.teps_examined = examined;
  out.optimal = optimal;
  return out;
}

}  // namespace detail

inline DecodeResult lc_rosd_decode(const SgmcCode& code, const SoftObservation& obs,
                                   int delta, std::uint64_t lmax) {
  if (obs.n() != code.n()) throw std::invalid_argument("lc_rosd: observation length");
  const BasisPermutation bp = select_representative_basis(code, obs.reliability, delta);
  const BitMatrix gp = code.generator.select_columns(bp.perm);
  const StaircaseReduction red = reduce_staircase(gp);
  auto out = detail::run_tep_search(red.gtilde, bp.perm, obs, code.k(), delta, lmax);
  DecodeResult res;
  res.message = recover_message(code, out.codeword);
  res.codeword = std::move(out.codeword);
  res.soft_weight = out.soft_weight;
  res.teps_examined = out.teps_examined;
  res.optimal = out.optimal;
  return res;
}

inline DecodeResult lc_osd_decode(const BitMatrix& g, const SoftObservation& obs,
                                  int delta, std::uint64_t lmax) {
  if (obs.n() != g.cols()) throw std::invalid_argument("lc_osd: observation length");
  const BasisPermutation bp = detail::select_reliability_basis(g, obs.reliability, delta);
  const BitMatrix gp = g.select_columns(bp.perm);
  const StaircaseReduction red = detail::serial_systematize(gp);
  auto out = detail::run_tep_search(red.gtilde, bp.perm, obs, g.rows(), delta, lmax);
  DecodeResult res;
  res.message = encode(out.best_v_basis, red.transform);
  res.codeword = std::move(out.codeword);
  res.soft_weight = out.soft_weight;
  res.teps_examined = out.teps_examined;
  res.optimal = out.optimal;
  return res;
}

// Original OSD of order t: re-encode every TEP of weight <= t on the most
// reliable basis.
inline DecodeResult osd_decode(const BitMatrix& g, const SoftObservation& obs, int t) {
  if (obs.n() != g.cols()) throw std::invalid_argument("osd: observation length");
  if (t < 0) throw std::invalid_argument("osd: order must be >= 0");
  const int k = g.rows(), n = g.cols();
  t = std::min(t, k);
  const BasisPermutation bp = detail::select_reliability_basis(g, obs.reliability, 0);
  const BitMatrix gp = g.select_columns(bp.perm);
  const StaircaseReduction red = detail::serial_systematize(gp);
  const BitMatrix& gt = red.gtilde;

  std::vector<double> rel_p(n);
  BitVec z_p(n);
  for (int j = 0; j < n; ++j) {
    rel_p[j] = obs.reliability[bp.perm[j]];
    if (obs.hard.get(bp.perm[j])) z_p.set(j, true);
  }
  BitVec z_l(k), z_r(n - k);
  for (int j = 0; j < k; ++j)
    if (z_p.get(j)) z_l.set(j, true);
  for (int j = 0; j < n - k; ++j)
    if (z_p.get(k + j)) z_r.set(j, true);
  std::vector<int> right_cols(n - k);
  std::iota(right_cols.begin(), right_cols.end(), k);
  const BitMatrix p = gt.select_columns(right_cols);

  double best = std::numeric_limits<double>::infinity();
  BitVec best_v(k);
  std::uint64_t examined = 0;

  auto consider = [&](const BitVec& e_l, double gamma_l) {
    ++examined;
    BitVec v = z_l ^ e_l;
    BitVec e_r(n - k);
    for (int i = 0; i < k; ++i)
      if (v.get(i)) p.xor_row_into(i, e_r);
    e_r ^= z_r;
    double gamma = gamma_l;
    for (int j = 0; j < n - k; ++j)
      if (e_r.get(j)) gamma += rel_p[k + j];
    if (gamma < best) {
      best = gamma;
      best_v = v;
    }
  };

  BitVec e_l(k);
  consider(e_l, 0.0);
  std::vector<int> idx;
  for (int w = 1; w <= t; ++w) {
    idx.resize(w);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      BitVec e(k);
      double gl = 0;
      for (int i : idx) {
        e.set(i, true);
        gl += rel_p[i];
      }
      consider(e, gl);
      int pos = w - 1;
      while (pos >= 0 && idx[pos] == k - w + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int j = pos + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  DecodeResult res;
  res.message = encode(best_v, red.transform);
  BitVec v_full(n);
  for (int i = 0; i < k; ++i)
    if (best_v.get(i)) gt.xor_row_into(i, v_full);
  res.codeword = BitVec(n);
  for (int j = 0; j < n; ++j)
    if (v_full.get(j)) res.codeword.set(bp.perm[j], true);
  res.soft_weight = soft_weight(res.codeword ^ obs.hard, obs.reliability);
  res.teps_examined = examined;
  res.optimal = t >= k;
  return res;
}

// Exhaustive ML oracle; ties broken by lexicographic codeword order.
inline DecodeResult ml_bruteforce(const BitMatrix& g, const SoftObservation& obs) {
  if (obs.n() != g.cols()) throw std::invalid_argument("ml: observation length");
  const int k = g.rows(), n = g.cols();
  if (k > 24) throw std::invalid_argument("ml_bruteforce: k > 24");
  BitVec c(n);
  double gamma = 0;
  for (int i = 0; i < n; ++i)
    if (obs.hard.get(i)) gamma += obs.reliability[i];  // e = z ^ 0 = z
  double best = gamma;
  BitVec best_c = c;
  std::uint64_t best_msg = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int r = std::countr_zero(i);
    // Flip row r into c, updating gamma by the toggled positions.
    for (int w = 0; w < g.row_words(); ++w) {
      std::uint64_t bits = g.row_ptr(r)[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        bits &= bits - 1;
        const int pos = (w << 6) + b;
        const bool now = !c.get(pos);
        c.set(pos, now);
        gamma += (now != obs.hard.get(pos)) ? obs.reliability[pos] : -obs.reliability[pos];
      }
    }
    if (gamma < best ||
        (gamma == best && BitVec::lex_compare(c, best_c) < 0)) {
      best = gamma;
      best_c = c;
      best_msg = i ^ (i >> 1);
    }
  }
  DecodeResult res;
  res.codeword = best_c;
  res.message = BitVec(k);
  for (int i = 0; i < k; ++i)
    if (best_msg >> i & 1) res.message.set(i, true);
  res.soft_weight = soft_weight(best_c ^ obs.hard, obs.reliability);
  res.teps_examined = total;
  res.optimal = true;
  return res;
}

}  // namespace sgmc
