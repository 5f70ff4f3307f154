#pragma once

// Bit-packed linear algebra over GF(2).
//
// Vectors are stored as little-endian 64-bit words; bit i of the vector is
// bit (i % 64) of word (i / 64). Unused high bits of the last word are kept
// zero so that word-level popcount and equality are exact.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cyclespan {

class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

  static Gf2Vector from_support(std::size_t length, std::span<const std::size_t> support) {
    Gf2Vector v(length);
    for (std::size_t i : support) v.flip(i);
    return v;
  }

  /// Parses a string of '0'/'1' characters, position 0 first.
  static Gf2Vector from_bits(std::string_view bits) {
    Gf2Vector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i);
      } else if (bits[i] != '0') {
        throw std::invalid_argument("Gf2Vector::from_bits: expected only '0' and '1'");
      }
    }
    return v;
  }

  static Gf2Vector ones(std::size_t length) {
    Gf2Vector v(length);
    std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{0});
    v.clear_tail();
    return v;
  }

  std::size_t size() const noexcept { return length_; }
  std::size_t num_words() const noexcept { return words_.size(); }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  bool get(std::size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value = true) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) {
    check_index(i);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  std::size_t weight() const noexcept {
    std::size_t w = 0;
    for (std::uint64_t x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
  }

  bool is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t x) { return x == 0; });
  }

  /// Index of the lowest set bit, or size() when the vector is zero.
  std::size_t first_set() const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return length_;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w];
      while (x != 0) {
        out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return out;
  }

  /// Parity of |this ∩ other|.
  bool dot(const Gf2Vector& other) const {
    check_same_length(other);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  /// |this ∩ other|.
  std::size_t overlap(const Gf2Vector& other) const {
    check_same_length(other);
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
    }
    return c;
  }

  /// Weight of this ^ other without materializing it.
  std::size_t xor_weight(const Gf2Vector& other) const {
    check_same_length(other);
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      c += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
    }
    return c;
  }

  Gf2Vector& operator^=(const Gf2Vector& other) {
    check_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  Gf2Vector& operator&=(const Gf2Vector& other) {
    check_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }
  friend Gf2Vector operator^(Gf2Vector a, const Gf2Vector& b) { return a ^= b; }
  friend Gf2Vector operator&(Gf2Vector a, const Gf2Vector& b) { return a &= b; }
  friend bool operator==(const Gf2Vector&, const Gf2Vector&) = default;

  Gf2Vector complement() const {
    Gf2Vector c = *this;
    for (auto& w : c.words_) w = ~w;
    c.clear_tail();
    return c;
  }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i : support()) s[i] = '1';
    return s;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("Gf2Vector: bit index out of range");
  }
  void check_same_length(const Gf2Vector& other) const {
    if (other.length_ != length_) throw std::invalid_argument("Gf2Vector: dimension mismatch");
  }
  void clear_tail() noexcept {
    if (length_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (length_ % 64)) - 1;
    }
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Strict order used to break ties between equal-weight vectors: compares the
/// sorted support sequences lexicographically. For equal weights this reduces
/// to "whoever owns the lowest differing bit is smaller".
inline bool support_lex_less(const Gf2Vector& a, const Gf2Vector& b) {
  const auto wa = a.words();
  const auto wb = b.words();
  if (wa.size() != wb.size()) throw std::invalid_argument("support_lex_less: dimension mismatch");
  // Any set bit strictly above the bit `low` of word w?
  auto has_later = [](std::span<const std::uint64_t> x, std::size_t w, std::uint64_t low) {
    if (x[w] & ~(low | (low - 1))) return true;
    for (std::size_t k = w + 1; k < x.size(); ++k) {
      if (x[k] != 0) return true;
    }
    return false;
  };
  for (std::size_t w = 0; w < wa.size(); ++w) {
    const std::uint64_t diff = wa[w] ^ wb[w];
    if (diff == 0) continue;
    const std::uint64_t low = diff & (~diff + 1);
    // The owner of the lowest differing bit is smaller, unless the other
    // support stops before it (a proper prefix is smaller).
    if (wa[w] & low) return has_later(wb, w, low);
    return !has_later(wa, w, low);
  }
  return false;
}

/// Weight first, then support_lex_less.
inline bool lighter(const Gf2Vector& a, const Gf2Vector& b) {
  const std::size_t wa = a.weight();
  const std::size_t wb = b.weight();
  if (wa != wb) return wa < wb;
  return support_lex_less(a, b);
}

struct Gf2Matrix {
  std::size_t ambient = 0;
  std::vector<Gf2Vector> rows;

  Gf2Matrix() = default;
  explicit Gf2Matrix(std::size_t ambient_dim) : ambient(ambient_dim) {}
  Gf2Matrix(std::size_t ambient_dim, std::vector<Gf2Vector> r) : ambient(ambient_dim), rows(std::move(r)) {
    for (const auto& row : rows) {
      if (row.size() != ambient) throw std::invalid_argument("Gf2Matrix: row length differs from ambient");
    }
  }

  static Gf2Matrix from_bits(std::size_t ambient_dim, std::initializer_list<std::string_view> bits) {
    Gf2Matrix m(ambient_dim);
    for (auto b : bits) m.push_back(Gf2Vector::from_bits(b));
    return m;
  }

  void push_back(Gf2Vector row) {
    if (row.size() != ambient) throw std::invalid_argument("Gf2Matrix: row length differs from ambient");
    rows.push_back(std::move(row));
  }
};

/// Reduced row-echelon basis of a subspace of GF(2)^ambient.
class EchelonBasis {
 public:
  EchelonBasis() = default;
  explicit EchelonBasis(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  const std::vector<Gf2Vector>& rows() const noexcept { return rows_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Clears every pivot bit of v using the basis rows; the result is the
  /// canonical representative of v + rowspace.
  Gf2Vector residual(Gf2Vector v) const {
    check(v);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (v.get(pivots_[i])) v ^= rows_[i];
    }
    return v;
  }

  bool contains(const Gf2Vector& v) const { return residual(v).is_zero(); }

  /// Adds v to the span. Returns true when v was independent.
  bool insert(const Gf2Vector& v) {
    Gf2Vector r = residual(v);
    const std::size_t pivot = r.first_set();
    if (pivot == ambient_) return false;
    for (auto& row : rows_) {
      if (row.get(pivot)) row ^= r;
    }
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, pivot);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
  }

 private:
  void check(const Gf2Vector& v) const {
    if (v.size() != ambient_) throw std::invalid_argument("EchelonBasis: dimension mismatch");
  }

  std::size_t ambient_ = 0;
  std::vector<Gf2Vector> rows_;
  std::vector<std::size_t> pivots_;
};

inline EchelonBasis reduce(std::span<const Gf2Vector> rows, std::size_t ambient) {
  EchelonBasis b(ambient);
  for (const auto& r : rows) {
    if (b.rank() == ambient) break;
    b.insert(r);
  }
  return b;
}

inline EchelonBasis reduce(const Gf2Matrix& m) { return reduce(m.rows, m.ambient); }

inline bool in_rowspace(const EchelonBasis& b, const Gf2Vector& v) { return b.contains(v); }

/// Orthogonal complement with respect to <J,K> = |J ∩ K| mod 2.
inline EchelonBasis nullspace(const EchelonBasis& b) {
  const std::size_t m = b.ambient();
  std::vector<char> is_pivot(m, 0);
  for (std::size_t p : b.pivots()) is_pivot[p] = 1;
  EchelonBasis out(m);
  for (std::size_t f = 0; f < m; ++f) {
    if (is_pivot[f]) continue;
    Gf2Vector v(m);
    v.set(f);
    for (std::size_t i = 0; i < b.rank(); ++i) {
      if (b.rows()[i].get(f)) v.set(b.pivots()[i]);
    }
    out.insert(v);
  }
  return out;
}

/// Span of the union of both row sets.
inline EchelonBasis span_sum(const EchelonBasis& a, const EchelonBasis& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("span_sum: dimension mismatch");
  EchelonBasis out = a;
  for (const auto& r : b.rows()) out.insert(r);
  return out;
}

inline EchelonBasis intersect(const EchelonBasis& a, const EchelonBasis& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("intersect: dimension mismatch");
  return nullspace(span_sum(nullspace(a), nullspace(b)));
}

inline bool same_rowspace(const EchelonBasis& a, const EchelonBasis& b) {
  // RREF is canonical.
  return a.ambient() == b.ambient() && a.rows() == b.rows();
}

// ---------------------------------------------------------------------------
// Minimum- and maximum-weight coset members.

struct CosetOptions {
  std::size_t exact_dim_cap = 24;
  std::size_t restarts = 64;
  std::uint64_t seed = 0x5eed;
  /// Extra local moves (vectors in the subspace) tried during heuristic
  /// descent in addition to the basis rows of each restart.
  std::span<const Gf2Vector> moves = {};
};

struct CosetResult {
  Gf2Vector vector;
  bool certified = false;
};

namespace detail {

inline void keep_if_lighter(Gf2Vector& best, std::size_t& best_w, const Gf2Vector& x) {
  const std::size_t w = x.weight();
  if (w < best_w || (w == best_w && support_lex_less(x, best))) {
    best = x;
    best_w = w;
  }
}

/// Steepest single-move descent: apply any move that strictly lowers weight
/// until none does.
inline void descend(Gf2Vector& x, std::span<const Gf2Vector> moves_a, std::span<const Gf2Vector> moves_b) {
  std::size_t w = x.weight();
  bool improved = true;
  while (improved) {
    improved = false;
    for (auto moves : {moves_a, moves_b}) {
      for (const auto& mv : moves) {
        const std::size_t nw = x.xor_weight(mv);
        if (nw < w) {
          x ^= mv;
          w = nw;
          improved = true;
        }
      }
    }
  }
}

/// Re-echelonizes rows with pivots chosen in the given column order.
inline std::vector<std::pair<std::size_t, Gf2Vector>> echelon_in_order(std::vector<Gf2Vector> rows,
                                                                       std::span<const std::size_t> order) {
  std::vector<std::pair<std::size_t, Gf2Vector>> out;
  std::vector<char> used(rows.size(), 0);
  for (std::size_t col : order) {
    if (out.size() == rows.size()) break;
    std::size_t r = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!used[i] && rows[i].get(col)) {
        r = i;
        break;
      }
    }
    if (r == rows.size()) continue;
    used[r] = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && rows[i].get(col)) rows[i] ^= rows[r];
    }
    for (auto& [c, row] : out) {
      if (row.get(col)) row ^= rows[r];
    }
    out.emplace_back(col, rows[r]);
  }
  return out;
}

}  // namespace detail

/// Lightest member of v + rowspace(S). Exhaustive (Gray code) when
/// rank(S) <= exact_dim_cap, otherwise information-set restarts.
inline CosetResult coset_min_weight(const EchelonBasis& s, const Gf2Vector& v, const CosetOptions& opt = {}) {
  if (v.size() != s.ambient()) throw std::invalid_argument("coset_min_weight: dimension mismatch");
  const std::size_t k = s.rank();
  if (k <= opt.exact_dim_cap) {
    Gf2Vector x = v;
    Gf2Vector best = x;
    std::size_t best_w = x.weight();
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t i = 1; i < total; ++i) {
      x ^= s.rows()[static_cast<std::size_t>(std::countr_zero(i))];
      const std::size_t w = x.weight();
      if (w < best_w || (w == best_w && support_lex_less(x, best))) {
        best = x;
        best_w = w;
      }
    }
    return {std::move(best), true};
  }

  Gf2Vector best = s.residual(v);
  detail::descend(best, s.rows(), opt.moves);
  std::size_t best_w = best.weight();
  std::vector<std::size_t> order(s.ambient());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t r = 0; r < opt.restarts; ++r) {
    std::mt19937_64 rng(opt.seed + 0x9e3779b97f4a7c15ULL * (r + 1));
    std::shuffle(order.begin(), order.end(), rng);
    auto ech = detail::echelon_in_order(s.rows(), order);
    Gf2Vector x = v;
    for (const auto& [col, row] : ech) {
      if (x.get(col)) x ^= row;
    }
    std::vector<Gf2Vector> rows;
    rows.reserve(ech.size());
    for (auto& e : ech) rows.push_back(std::move(e.second));
    detail::descend(x, rows, opt.moves);
    detail::keep_if_lighter(best, best_w, x);
  }
  return {std::move(best), false};
}

/// Heaviest member of v + rowspace(S), via the lightest member of
/// (v + 1) + rowspace(S), complemented.
inline CosetResult coset_max_weight(const EchelonBasis& s, const Gf2Vector& v, const CosetOptions& opt = {}) {
  if (v.size() != s.ambient()) throw std::invalid_argument("coset_max_weight: dimension mismatch");
  auto r = coset_min_weight(s, v.complement(), opt);
  return {r.vector.complement(), r.certified};
}

// ---------------------------------------------------------------------------
// Sparse rank by peeling.
//
// Rows are given as coordinate lists. Rows that reduce to one live coordinate
// kill it (e_a is in the span); rows that reduce to two identify them (e_a +
// e_b is in the span, so a and b are equal in the quotient). Both are tracked
// with a union-find over coordinates. When no row of weight <= 2 remains, the
// leftover rows are solved densely over the surviving classes.

class PeelingRank {
 public:
  explicit PeelingRank(std::size_t ambient) : ambient_(ambient) { offsets_.push_back(0); }

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t num_rows() const noexcept { return offsets_.size() - 1; }

  void add_row(std::span<const std::uint32_t> coords) {
    for (auto c : coords) {
      if (c >= ambient_) throw std::out_of_range("PeelingRank: coordinate out of range");
      coords_.push_back(c);
    }
    offsets_.push_back(coords_.size());
    solved_ = false;
  }

  std::size_t rank() {
    solve();
    return peeled_ + residual_.rank();
  }

  /// Number of rank units found without dense elimination.
  std::size_t peeled() {
    solve();
    return peeled_;
  }
  std::size_t residual_rows() {
    solve();
    return residual_rows_;
  }

  /// Basis of all functionals f in GF(2)^ambient with <f,row> = 0 for every row.
  /// Its size is ambient - rank().
  std::vector<Gf2Vector> annihilator() {
    solve();
    std::vector<std::vector<std::uint32_t>> members(ambient_);
    for (std::uint32_t c = 0; c < ambient_; ++c) members[find(c)].push_back(c);
    std::vector<Gf2Vector> out;
    auto lift = [&](std::uint32_t root, Gf2Vector& f) {
      for (auto c : members[root]) f.flip(c);
    };
    for (std::uint32_t c = 0; c < ambient_; ++c) {
      if (find(c) != c || zero_[c]) continue;
      if (column_of_root_[c] != kNone) continue;
      Gf2Vector f(ambient_);
      lift(c, f);
      out.push_back(std::move(f));
    }
    const EchelonBasis null = nullspace(residual_);
    for (const auto& nv : null.rows()) {
      Gf2Vector f(ambient_);
      for (std::size_t col : nv.support()) lift(root_of_column_[col], f);
      out.push_back(std::move(f));
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void effective(std::size_t row, std::vector<std::uint32_t>& out) {
    out.clear();
    for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) {
      const std::uint32_t r = find(coords_[k]);
      if (!zero_[r]) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    std::size_t w = 0;
    for (std::size_t i = 0; i < out.size();) {
      if (i + 1 < out.size() && out[i] == out[i + 1]) {
        i += 2;
      } else {
        out[w++] = out[i++];
      }
    }
    out.resize(w);
  }

  void solve() {
    if (solved_) return;
    parent_.resize(ambient_);
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    size_.assign(ambient_, 1);
    zero_.assign(ambient_, 0);
    peeled_ = 0;

    std::vector<std::size_t> pending(num_rows());
    std::iota(pending.begin(), pending.end(), std::size_t{0});
    std::vector<std::size_t> next;
    std::vector<std::uint32_t> eff;
    bool progress = true;
    while (progress && !pending.empty()) {
      progress = false;
      next.clear();
      for (std::size_t row : pending) {
        effective(row, eff);
        if (eff.empty()) {
          progress = true;
        } else if (eff.size() == 1) {
          zero_[eff[0]] = 1;
          ++peeled_;
          progress = true;
        } else if (eff.size() == 2) {
          std::uint32_t a = eff[0], b = eff[1];
          if (size_[a] < size_[b]) std::swap(a, b);
          parent_[b] = a;
          size_[a] += size_[b];
          ++peeled_;
          progress = true;
        } else {
          next.push_back(row);
        }
      }
      pending.swap(next);
    }

    column_of_root_.assign(ambient_, kNone);
    root_of_column_.clear();
    std::vector<std::vector<std::uint32_t>> sparse_rows;
    for (std::size_t row : pending) {
      effective(row, eff);
      for (auto r : eff) {
        if (column_of_root_[r] == kNone) {
          column_of_root_[r] = static_cast<std::uint32_t>(root_of_column_.size());
          root_of_column_.push_back(r);
        }
      }
      sparse_rows.push_back(eff);
    }
    residual_ = EchelonBasis(root_of_column_.size());
    residual_rows_ = sparse_rows.size();
    for (const auto& sr : sparse_rows) {
      if (residual_.rank() == residual_.ambient()) break;
      Gf2Vector v(root_of_column_.size());
      for (auto r : sr) v.flip(column_of_root_[r]);
      residual_.insert(v);
    }
    solved_ = true;
  }

  std::size_t ambient_;
  std::vector<std::uint32_t> coords_;
  std::vector<std::size_t> offsets_;
  bool solved_ = false;

  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<char> zero_;
  std::size_t peeled_ = 0;
  std::size_t residual_rows_ = 0;
  std::vector<std::uint32_t> column_of_root_;
  std::vector<std::uint32_t> root_of_column_;
  EchelonBasis residual_;
};

}  // namespace cyclespan
