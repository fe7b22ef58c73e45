#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "bitset.hpp"
#include "context.hpp"
#include "errors.hpp"

namespace trfca {

/// A formal concept: extent over objects, intent over attributes.
struct Concept {
  Bitset extent;
  Bitset intent;
  friend bool operator==(const Concept&, const Concept&) = default;
};

/// A↑: attributes shared by every object in A (all attributes when A is empty).
inline Bitset derive_up(const FormalContext& ctx, const Bitset& objects) {
  Bitset out = Bitset::full(ctx.cols());
  objects.for_each([&](std::size_t o) { out &= ctx.incidence.row(o); });
  return out;
}

/// B↓: objects having every attribute in B.
inline Bitset derive_down(const FormalContext& ctx, const Bitset& attributes) {
  Bitset out(ctx.rows());
  for (std::size_t o = 0; o < ctx.rows(); ++o)
    if (attributes.subset_of(ctx.incidence.row(o))) out.set(o);
  return out;
}

using ConceptCount = std::uint64_t;

struct CountOptions {
  unsigned workers = 1;
  unsigned split_depth = 0;
};

namespace detail {

inline ConceptCount checked_add(ConceptCount a, ConceptCount b) {
  ConceptCount r;
  if (__builtin_add_overflow(a, b, &r)) throw CounterOverflow("concept count exceeds 2^64-1");
  return r;
}

template <std::size_t W>
struct FixedBits {
  std::array<Word, W> w{};

  bool test(std::size_t i) const { return (w[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { w[i / kWordBits] |= Word{1} << (i % kWordBits); }
};

template <std::size_t W>
inline void and_into(FixedBits<W>& out, const FixedBits<W>& a, const FixedBits<W>& b) {
  for (std::size_t i = 0; i < W; ++i) out.w[i] = a.w[i] & b.w[i];
}

/// Close-by-One over a context packed into fixed-width bitsets.
///
/// Attributes are processed in column order. The child of (A, B) through
/// attribute j is (C, C↑) with C = A ∩ col(j); it is canonical when C↑ and B
/// agree on attributes before j.
template <std::size_t W>
class CbO {
public:
  using Bits = FixedBits<W>;

  struct State {
    Bits extent;
    Bits intent;
    std::size_t next;
  };

  explicit CbO(const FormalContext& ctx) : n_obj_(ctx.rows()), n_attr_(ctx.cols()) {
    rows_.resize(n_obj_);
    cols_.resize(n_attr_);
    for (std::size_t o = 0; o < n_obj_; ++o)
      ctx.incidence.row(o).for_each([&](std::size_t a) {
        rows_[o].set(a);
        cols_[a].set(o);
      });
    for (std::size_t a = 0; a < n_attr_; ++a) all_attrs_.set(a);
    for (std::size_t o = 0; o < n_obj_; ++o) all_objs_.set(o);
  }

  State root() const {
    State s{all_objs_, all_attrs_, 0};
    for (std::size_t o = 0; o < n_obj_; ++o) and_into(s.intent, s.intent, rows_[o]);
    return s;
  }

  /// Calls f(child) for every canonical child of s, in attribute order.
  template <class F>
  void children(const State& s, F&& f) const {
    State child;
    for (std::size_t j = s.next; j < n_attr_; ++j) {
      if (s.intent.test(j)) continue;
      if (!close(s, j, child)) continue;
      f(child);
    }
  }

  /// Counts s and all concepts below it in the CbO tree.
  ConceptCount count_subtree(const State& s) const {
    ConceptCount total = 1;
    State child;
    for (std::size_t j = s.next; j < n_attr_; ++j) {
      if (s.intent.test(j)) continue;
      if (!close(s, j, child)) continue;
      total = checked_add(total, count_subtree(child));
    }
    return total;
  }

  template <class F>
  void for_each_concept(const State& s, F&& f) const {
    f(s);
    State child;
    for (std::size_t j = s.next; j < n_attr_; ++j) {
      if (s.intent.test(j)) continue;
      if (!close(s, j, child)) continue;
      for_each_concept(child, f);
    }
  }

  Bitset to_extent(const Bits& b) const { return to_bitset(b, n_obj_); }
  Bitset to_intent(const Bits& b) const { return to_bitset(b, n_attr_); }

private:
  static Bitset to_bitset(const Bits& b, std::size_t n) {
    Bitset out(n);
    for (std::size_t i = 0; i < n; ++i)
      if (b.test(i)) out.set(i);
    return out;
  }

  /// Forms the child of s through attribute j into out; false if the new
  /// intent gains an attribute before j, i.e. the child is not canonical.
  bool close(const State& s, std::size_t j, State& out) const {
    and_into(out.extent, s.extent, cols_[j]);
    out.intent = all_attrs_;
    for (std::size_t wi = 0; wi < W; ++wi) {
      Word e = out.extent.w[wi];
      while (e) {
        const std::size_t o = wi * kWordBits + static_cast<std::size_t>(std::countr_zero(e));
        e &= e - 1;
        and_into(out.intent, out.intent, rows_[o]);
      }
    }
    const std::size_t jw = j / kWordBits;
    for (std::size_t wi = 0; wi < jw; ++wi)
      if (out.intent.w[wi] != s.intent.w[wi]) return false;
    const Word below_j = (Word{1} << (j % kWordBits)) - 1;
    if ((out.intent.w[jw] ^ s.intent.w[jw]) & below_j) return false;
    out.next = j + 1;
    return true;
  }

  std::size_t n_obj_;
  std::size_t n_attr_;
  std::vector<Bits> rows_;
  std::vector<Bits> cols_;
  Bits all_attrs_{};
  Bits all_objs_{};
};

template <std::size_t W>
ConceptCount count_with(const FormalContext& ctx, const CountOptions& opt) {
  using Algo = CbO<W>;
  const Algo algo(ctx);

  // Expand the tree breadth-first to split_depth; shallower concepts are
  // counted here, the frontier is handed to the workers.
  ConceptCount shallow = 0;
  std::vector<typename Algo::State> frontier{algo.root()};
  for (unsigned d = 0; d < opt.split_depth && !frontier.empty(); ++d) {
    std::vector<typename Algo::State> next;
    for (const auto& s : frontier) {
      ++shallow;
      algo.children(s, [&](const typename Algo::State& c) { next.push_back(c); });
    }
    frontier = std::move(next);
  }

  const unsigned workers = std::max(1U, std::min<unsigned>(opt.workers, static_cast<unsigned>(std::max<std::size_t>(frontier.size(), 1))));
  std::vector<ConceptCount> local(workers, 0);
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<std::size_t> cursor{0};
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = cursor.fetch_add(1); i < frontier.size(); i = cursor.fetch_add(1)) {
        local[w] = checked_add(local[w], algo.count_subtree(frontier[i]));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ConceptCount total = shallow;
  for (auto c : local) total = checked_add(total, c);
  return total;
}

template <class F>
decltype(auto) dispatch_width(std::size_t bits, F&& f) {
  const std::size_t w = words_for(std::max<std::size_t>(bits, 1));
  if (w <= 1) return f.template operator()<1>();
  if (w <= 2) return f.template operator()<2>();
  if (w <= 4) return f.template operator()<4>();
  if (w <= 8) return f.template operator()<8>();
  if (w <= 16) return f.template operator()<16>();
  if (w <= 32) return f.template operator()<32>();
  if (w <= 64) return f.template operator()<64>();
  throw CapExceeded("context dimension above 4096 is not supported");
}

}  // namespace detail

/// Number of formal concepts, by Close-by-One. The search tree is split at
/// `split_depth` and the subtrees are shared among `workers` threads, each
/// with a private counter. The result does not depend on either option.
inline ConceptCount count_concepts(const FormalContext& ctx, const CountOptions& opt = {}) {
  if (ctx.rows() == 0 && ctx.cols() == 0) throw std::invalid_argument("count_concepts: empty context");
  return detail::dispatch_width(std::max(ctx.rows(), ctx.cols()),
                                [&]<std::size_t W>() { return detail::count_with<W>(ctx, opt); });
}

inline ConceptCount count_concepts(const FormalContext& ctx, unsigned workers, unsigned split_depth) {
  return count_concepts(ctx, CountOptions{workers, split_depth});
}

/// All concepts in CbO order. Throws CapExceeded when there are more than `limit`.
inline std::vector<Concept> enumerate_concepts(const FormalContext& ctx, std::size_t limit) {
  return detail::dispatch_width(std::max(ctx.rows(), ctx.cols()), [&]<std::size_t W>() {
    const detail::CbO<W> algo(ctx);
    std::vector<Concept> out;
    algo.for_each_concept(algo.root(), [&](const typename detail::CbO<W>::State& s) {
      if (out.size() >= limit) throw CapExceeded("more than " + std::to_string(limit) + " concepts");
      out.push_back({algo.to_extent(s.extent), algo.to_intent(s.intent)});
    });
    return out;
  });
}

}  // namespace trfca
