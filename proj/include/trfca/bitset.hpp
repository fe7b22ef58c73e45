#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace trfca {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// Runtime-sized packed bitset. Bits past size() are always zero.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(std::size_t n, bool value = false) : n_(n), w_(words_for(n), value ? ~Word{0} : Word{0}) {
    trim();
  }

  static Bitset full(std::size_t n) { return Bitset(n, true); }

  std::size_t size() const { return n_; }
  std::span<const Word> words() const { return w_; }
  std::span<Word> words() { return w_; }

  bool test(std::size_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  bool operator[](std::size_t i) const { return test(i); }
  void set(std::size_t i) { w_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { w_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  void set_all() {
    std::fill(w_.begin(), w_.end(), ~Word{0});
    trim();
  }
  void reset_all() { std::fill(w_.begin(), w_.end(), Word{0}); }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    return std::all_of(w_.begin(), w_.end(), [](Word w) { return w == 0; });
  }
  bool any() const { return !none(); }
  bool all() const { return count() == n_; }

  /// this ⊆ other
  bool subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~other.w_[i]) return false;
    return true;
  }
  bool intersects(const Bitset& other) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & other.w_[i]) return true;
    return false;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bitset& subtract(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

  Bitset operator~() const {
    Bitset r = *this;
    for (Word& w : r.w_) w = ~w;
    r.trim();
    return r;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

  /// Lexicographic order on the index sequence of set bits is not needed; this is
  /// an arbitrary strict total order for use in ordered containers.
  friend bool operator<(const Bitset& a, const Bitset& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      Word w = w_[wi];
      while (w) {
        const auto b = static_cast<std::size_t>(std::countr_zero(w));
        f(wi * kWordBits + b);
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  /// Index of the lowest set bit, or size() when empty.
  std::size_t first() const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi)
      if (w_[wi]) return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w_[wi]));
    return n_;
  }

  std::size_t hash() const {
    std::size_t h = n_ * 0x9E3779B97F4A7C15ULL;
    for (Word w : w_) h = (h ^ w) * 0x100000001B3ULL + (h >> 29);
    return h;
  }

private:
  void trim() {
    if (n_ % kWordBits != 0 && !w_.empty()) w_.back() &= (Word{1} << (n_ % kWordBits)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<Word> w_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

/// Boolean matrix stored as packed rows.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, Bitset(cols)) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const Bitset& row(std::size_t r) const { return rows_[r]; }
  Bitset& row(std::size_t r) { return rows_[r]; }
  bool test(std::size_t r, std::size_t c) const { return rows_[r].test(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].assign(c, v); }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r) rows_[r].for_each([&](std::size_t c) { t.set(c, r); });
    return t;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.count();
    return c;
  }

  bool subset_of(const BitMatrix& o) const {
    for (std::size_t r = 0; r < rows(); ++r)
      if (!rows_[r].subset_of(o.rows_[r])) return false;
    return true;
  }

  std::size_t hash() const {
    std::size_t h = rows();
    for (const auto& r : rows_) h = h * 0x9E3779B97F4A7C15ULL + r.hash();
    return h;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
  std::size_t cols_ = 0;
  std::vector<Bitset> rows_;
};

}  // namespace trfca
