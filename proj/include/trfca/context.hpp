#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bitset.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "rational.hpp"
#include "text.hpp"

namespace trfca {

/// A nontrivial relation x < y of a lattice.
struct RelationPair {
  Element x = 0;
  Element y = 0;
  friend auto operator<=>(const RelationPair&, const RelationPair&) = default;
};

/// Objects × attributes incidence matrix with labels.
///
/// Contexts built from a lattice also carry the relation pair behind each
/// row and column; imported or hand-written contexts leave those empty.
struct FormalContext {
  BitMatrix incidence;
  std::vector<std::string> object_labels;
  std::vector<std::string> attribute_labels;
  std::vector<RelationPair> object_pairs;
  std::vector<RelationPair> attribute_pairs;

  std::size_t rows() const { return incidence.rows(); }
  std::size_t cols() const { return incidence.cols(); }
  bool has(std::size_t obj, std::size_t attr) const { return incidence.test(obj, attr); }
  std::size_t ones() const { return incidence.count(); }

  /// Context from explicit 0/1 rows with synthetic labels x1.., y1...
  static FormalContext from_rows(const std::vector<std::vector<int>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = std::max(cols, rows.front().size());
    FormalContext c;
    c.incidence = BitMatrix(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw std::invalid_argument("ragged context rows");
      for (std::size_t a = 0; a < cols; ++a)
        if (rows[r][a]) c.incidence.set(r, a);
    }
    c.relabel();
    return c;
  }

  void relabel() {
    object_labels.resize(rows());
    attribute_labels.resize(cols());
    for (std::size_t i = 0; i < rows(); ++i) object_labels[i] = "x" + std::to_string(i + 1);
    for (std::size_t i = 0; i < cols(); ++i) attribute_labels[i] = "y" + std::to_string(i + 1);
  }
};

/// One representative per G-orbit of {(x,y) : x < y}: the lexicographically
/// least pair of its orbit. Returned in lexicographic order.
inline std::vector<RelationPair> nontrivial_relation_orbits(const GLattice& L) {
  std::vector<RelationPair> reps;
  for (Element x = 0; x < L.size(); ++x) {
    L.up(x).for_each([&](std::size_t yy) {
      const auto y = static_cast<Element>(yy);
      if (y == x) return;
      const RelationPair p{x, y};
      for (const auto& g : L.action())
        if (RelationPair{g[x], g[y]} < p) return;
      reps.push_back(p);
    });
  }
  return reps;
}

/// ⌊a→b⌋ ⊆ ⌈x→y⌉^⊞, i.e. for every g: g·a ≱ x or g·b ≱ y or g·a ≥ y.
inline bool transfer_incidence(const GLattice& L, RelationPair ab, RelationPair xy) {
  for (const auto& g : L.action()) {
    const Element ga = g[ab.x], gb = g[ab.y];
    if (L.leq(xy.x, ga) && L.leq(xy.y, gb) && !L.leq(xy.y, ga)) return false;
  }
  return true;
}

inline std::string pair_label(const GLattice& L, RelationPair p) {
  return L.label(p.x) + "->" + L.label(p.y);
}

/// The reduced context (J(Tr L), M(Tr L), ⊆) with rows and columns both
/// indexed by nontrivial_relation_orbits(L). Rows are independent and are
/// split across `workers` threads.
inline FormalContext build_reduced_context(const GLattice& L, unsigned workers = 1) {
  const auto reps = nontrivial_relation_orbits(L);
  const std::size_t n = reps.size();
  FormalContext ctx;
  ctx.incidence = BitMatrix(n, n);
  ctx.object_pairs = reps;
  ctx.attribute_pairs = reps;
  ctx.object_labels.reserve(n);
  for (auto p : reps) ctx.object_labels.push_back(pair_label(L, p));
  ctx.attribute_labels = ctx.object_labels;

  auto fill = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < n; r += stride)
      for (std::size_t c = 0; c < n; ++c)
        if (transfer_incidence(L, reps[r], reps[c])) ctx.incidence.set(r, c);
  };
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    fill(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill, w, workers);
    for (auto& t : pool) t.join();
  }
  return ctx;
}

inline ExactRational density(const FormalContext& ctx) {
  if (ctx.rows() == 0 || ctx.cols() == 0) throw std::invalid_argument("density of an empty context");
  return ExactRational(BigInt(static_cast<unsigned long>(ctx.ones())),
                       BigInt(static_cast<unsigned long>(ctx.rows())) * static_cast<unsigned long>(ctx.cols()));
}

inline ExactRational codensity(const FormalContext& ctx) { return ExactRational(1) - density(ctx); }

namespace detail {

/// No row equals the AND of the other rows containing it.
inline bool rows_irreducible(const BitMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Bitset meet = Bitset::full(m.cols());
    for (std::size_t s = 0; s < m.rows(); ++s)
      if (s != r && m.row(r).subset_of(m.row(s))) meet &= m.row(s);
    if (meet == m.row(r)) return false;
  }
  return true;
}

}  // namespace detail

/// True iff no row (column) is the intersection of other rows (columns).
/// The empty intersection is the full row, so an all-ones row counts as
/// reducible.
inline bool is_reduced(const FormalContext& ctx) {
  return detail::rows_irreducible(ctx.incidence) && detail::rows_irreducible(ctx.incidence.transposed());
}

/// Rows in decreasing order of their value as binary numbers whose most
/// significant digit is the last column. Stable; columns untouched.
inline FormalContext sort_rows_for_cbo(const FormalContext& ctx) {
  std::vector<std::size_t> order(ctx.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& m = ctx.incidence;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto wa = m.row(a).words(), wb = m.row(b).words();
    for (std::size_t i = wa.size(); i-- > 0;)
      if (wa[i] != wb[i]) return wa[i] > wb[i];
    return false;
  });
  FormalContext out;
  out.incidence = BitMatrix(ctx.rows(), ctx.cols());
  out.attribute_labels = ctx.attribute_labels;
  out.attribute_pairs = ctx.attribute_pairs;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.incidence.row(i) = m.row(order[i]);
    if (!ctx.object_labels.empty()) out.object_labels.push_back(ctx.object_labels[order[i]]);
    if (!ctx.object_pairs.empty()) out.object_pairs.push_back(ctx.object_pairs[order[i]]);
  }
  return out;
}

/// FIMI text: one line per object listing its attribute indices ascending,
/// space-separated, newline-terminated. Objects without attributes give
/// empty lines.
inline std::string export_fimi(const FormalContext& ctx) {
  std::string out;
  for (std::size_t r = 0; r < ctx.rows(); ++r) {
    bool first = true;
    ctx.incidence.row(r).for_each([&](std::size_t a) {
      if (!first) out += ' ';
      out += std::to_string(a);
      first = false;
    });
    out += '\n';
  }
  return out;
}

/// Inverse of export_fimi. The column count is 1 + the largest index seen,
/// raised to `min_cols` when given. Labels are synthetic.
inline FormalContext import_fimi(std::string_view text, std::size_t min_cols = 0) {
  std::vector<std::vector<std::size_t>> lines;
  std::size_t cols = min_cols;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::size_t> attrs;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      const auto v = detail::parse_uint(line.substr(i, j - i), "FIMI attribute index");
      attrs.push_back(static_cast<std::size_t>(v));
      cols = std::max<std::size_t>(cols, static_cast<std::size_t>(v) + 1);
      i = j;
    }
    lines.push_back(std::move(attrs));
    start = nl + 1;
  }
  FormalContext ctx;
  ctx.incidence = BitMatrix(lines.size(), cols);
  for (std::size_t r = 0; r < lines.size(); ++r)
    for (auto a : lines[r]) ctx.incidence.set(r, a);
  ctx.relabel();
  return ctx;
}

/// Plain PBM (P1). A context 1 is a white pixel, written as 0; a context 0
/// is black, written as 1. Layout: "P1\n<cols> <rows>\n" then one line per
/// row with pixels separated by single spaces.
inline std::string export_pbm(const FormalContext& ctx) {
  std::ostringstream os;
  os << "P1\n" << ctx.cols() << ' ' << ctx.rows() << '\n';
  for (std::size_t r = 0; r < ctx.rows(); ++r) {
    for (std::size_t c = 0; c < ctx.cols(); ++c) os << (c ? " " : "") << (ctx.has(r, c) ? '0' : '1');
    os << '\n';
  }
  return os.str();
}

}  // namespace trfca
