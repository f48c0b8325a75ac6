#pragma once

// Bit-packed GF(2) vectors and matrices, plus the row-local triangular
// reduction used by the decoders. Values are immutable in spirit: every
// operation either returns a fresh object or mutates only its own scratch.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgmc {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(int n) : size_(n), w_(words_for(n), 0) {
    if (n < 0) throw std::invalid_argument("BitVec: negative length");
  }

  static BitVec of(std::initializer_list<int> bits) {
    BitVec v(static_cast<int>(bits.size()));
    int i = 0;
    for (int b : bits) v.set(i++, b != 0);
    return v;
  }

  int size() const { return size_; }

  bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }

  void set(int i, bool v) {
    const std::uint64_t m = 1ULL << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  void flip(int i) { w_[i >> 6] ^= 1ULL << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    if (o.size_ != size_) throw std::invalid_argument("BitVec xor: length mismatch");
    for (std::size_t j = 0; j < w_.size(); ++j) w_[j] ^= o.w_[j];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  int popcount() const {
    int c = 0;
    for (std::uint64_t x : w_) c += std::popcount(x);
    return c;
  }

  bool any() const {
    for (std::uint64_t x : w_)
      if (x) return true;
    return false;
  }

  friend bool operator==(const BitVec&, const BitVec&) = default;

  // Order as the binary string b0 b1 ... b_{n-1}; 0 sorts before 1.
  static int lex_compare(const BitVec& a, const BitVec& b) {
    if (a.size_ != b.size_) throw std::invalid_argument("lex_compare: length mismatch");
    for (std::size_t j = 0; j < a.w_.size(); ++j) {
      std::uint64_t d = a.w_[j] ^ b.w_[j];
      if (d) {
        const int bit = std::countr_zero(d);
        return a.w_[j] >> bit & 1ULL ? 1 : -1;
      }
    }
    return 0;
  }

  int word_count() const { return static_cast<int>(w_.size()); }
  std::uint64_t word(int j) const { return w_[j]; }

  // Bulk fill; trailing pad bits are re-zeroed.
  void set_word(int j, std::uint64_t v) {
    w_[j] = v;
    mask_tail();
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (int i = 0; i < size_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  static int words_for(int n) { return (n + 63) >> 6; }

 private:
  void mask_tail() {
    const int r = size_ & 63;
    if (r != 0 && !w_.empty()) w_.back() &= (1ULL << r) - 1;
  }

  int size_ = 0;
  std::vector<std::uint64_t> w_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), row_words_(BitVec::words_for(cols)),
        w_(static_cast<std::size_t>(rows) * row_words_, 0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("BitMatrix: negative shape");
  }

  static BitMatrix identity(int k) {
    BitMatrix m(k, k);
    for (int i = 0; i < k; ++i) m.set(i, i, true);
    return m;
  }

  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    BitMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c)
        throw std::invalid_argument("from_rows: ragged rows");
      int j = 0;
      for (int b : row) m.set(i, j++, b != 0);
      ++i;
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int row_words() const { return row_words_; }

  bool get(int r, int c) const {
    return (w_[idx(r) + (c >> 6)] >> (c & 63)) & 1ULL;
  }
  void set(int r, int c, bool v) {
    const std::uint64_t m = 1ULL << (c & 63);
    if (v)
      w_[idx(r) + (c >> 6)] |= m;
    else
      w_[idx(r) + (c >> 6)] &= ~m;
  }

  const std::uint64_t* row_ptr(int r) const { return w_.data() + idx(r); }
  std::uint64_t* row_ptr(int r) { return w_.data() + idx(r); }

  BitVec row(int r) const {
    BitVec v(cols_);
    for (int j = 0; j < row_words_; ++j) v.set_word(j, row_ptr(r)[j]);
    return v;
  }
  void set_row(int r, const BitVec& v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    for (int j = 0; j < row_words_; ++j) row_ptr(r)[j] = v.word(j);
  }

  void row_xor_row(int dst, int src) {
    std::uint64_t* d = row_ptr(dst);
    const std::uint64_t* s = row_ptr(src);
    for (int j = 0; j < row_words_; ++j) d[j] ^= s[j];
  }

  void xor_row_into(int r, BitVec& acc) const {
    const std::uint64_t* s = row_ptr(r);
    for (int j = 0; j < row_words_; ++j) acc.set_word(j, acc.word(j) ^ s[j]);
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    std::uint64_t* pa = row_ptr(a);
    std::uint64_t* pb = row_ptr(b);
    for (int j = 0; j < row_words_; ++j) std::swap(pa[j], pb[j]);
  }

  // Gather the listed columns, in order, into a new matrix.
  BitMatrix select_columns(const std::vector<int>& cols) const {
    BitMatrix out(rows_, static_cast<int>(cols.size()));
    for (int r = 0; r < rows_; ++r)
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (get(r, cols[j])) out.set(r, static_cast<int>(j), true);
    return out;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t idx(int r) const { return static_cast<std::size_t>(r) * row_words_; }

  int rows_ = 0;
  int cols_ = 0;
  int row_words_ = 0;
  std::vector<std::uint64_t> w_;
};

// u * G over GF(2): XOR of the rows of G selected by the set bits of u.
inline BitVec encode(const BitVec& u, const BitMatrix& g) {
  if (u.size() != g.rows()) throw std::invalid_argument("encode: dimension mismatch");
  BitVec c(g.cols());
  for (int i = 0; i < u.size(); ++i)
    if (u.get(i)) g.xor_row_into(i, c);
  return c;
}

inline BitMatrix matmul(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  BitMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    BitVec acc(b.cols());
    for (int i = 0; i < a.cols(); ++i)
      if (a.get(r, i)) b.xor_row_into(i, acc);
    out.set_row(r, acc);
  }
  return out;
}

// GF(2) rank by in-place elimination on a copy.
inline int gf2_rank(BitMatrix g) {
  int rank = 0;
  const int rows = g.rows(), cols = g.cols();
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (g.get(r, c)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    g.swap_rows(rank, pivot);
    for (int r = 0; r < rows; ++r)
      if (r != rank && g.get(r, c)) g.row_xor_row(r, rank);
    ++rank;
  }
  return rank;
}

struct StaircaseReduction {
  BitMatrix gtilde;     // [I | P], same row space as the input
  BitMatrix transform;  // k x k, transform * G == gtilde
};

// Reduce a matrix whose left k x k block is unit lower triangular to [I | P].
// Each output row is a function of the original rows only: row l starts as
// G(l,:) and clears columns l-1 .. 0 by adding the original row that owns the
// column. Rows are therefore independent of each other and may be computed in
// any order (or concurrently).
inline StaircaseReduction reduce_staircase(const BitMatrix& g) {
  const int k = g.rows();
  if (g.cols() < k) throw std::invalid_argument("reduce_staircase: cols < rows");
  for (int i = 0; i < k; ++i) {
    if (!g.get(i, i))
      throw std::invalid_argument("reduce_staircase: zero on the diagonal");
    for (int j = i + 1; j < k; ++j)
      if (g.get(i, j))
        throw std::invalid_argument("reduce_staircase: left block not lower triangular");
  }
  StaircaseReduction out{BitMatrix(k, g.cols()), BitMatrix(k, k)};
  for (int l = 0; l < k; ++l) {
    BitVec x = g.row(l);
    BitVec t(k);
    t.set(l, true);
    for (int i = l - 1; i >= 0; --i)
      if (x.get(i)) {
        g.xor_row_into(i, x);
        t.flip(i);
      }
    out.gtilde.set_row(l, x);
    out.transform.set_row(l, t);
  }
  return out;
}

// Streams the 2^j codewords spanned by the first j rows, all-zero first, each
// exactly once (Gray-code order, so successive outputs differ by one row).
class SubcodeStream {
 public:
  SubcodeStream(const BitMatrix& g, int j) : g_(&g), j_(j), current_(g.cols()) {
    if (j < 0 || j > g.rows())
      throw std::invalid_argument("SubcodeStream: j out of range");
    if (j >= 63) throw std::invalid_argument("SubcodeStream: j too large to enumerate");
    total_ = 1ULL << j;
  }

  bool next(BitVec& out) {
    if (count_ == total_) return false;
    if (count_ > 0) g_->xor_row_into(std::countr_zero(count_), current_);
    out = current_;
    ++count_;
    return true;
  }

  // Message index of the vector produced by the most recent next(): the Gray
  // code of count-1.
  std::uint64_t last_message() const { return (count_ - 1) ^ ((count_ - 1) >> 1); }

 private:
  const BitMatrix* g_;
  int j_;
  BitVec current_;
  std::uint64_t count_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace sgmc
