#pragma once

#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "errors.hpp"
#include "perm.hpp"

namespace trfca {

using Element = std::uint32_t;

/// A finite lattice with a finite group acting by lattice automorphisms.
///
/// Elements are the dense indices 0..size()-1. The order is held as packed
/// up-sets (row x = {y : x <= y}) and down-sets, so "x <= every element of S"
/// is a single subset test. Meet and join are precomputed tables. The action
/// is the full list of induced permutations with the identity first.
class GLattice {
public:
  /// Raw storage. Built directly only by tests that need invalid lattices;
  /// everything else goes through make_lattice().
  struct Parts {
    BitMatrix leq;                 // leq.test(x, y) <=> x <= y
    std::vector<Element> meet;     // row-major size*size
    std::vector<Element> join;
    std::vector<Perm> action;
    Element bottom = 0;
    Element top = 0;
    std::vector<std::string> labels;
  };

  GLattice() = default;
  explicit GLattice(Parts parts) : p_(std::move(parts)), down_(p_.leq.transposed()) {}

  std::size_t size() const { return p_.leq.rows(); }
  bool leq(Element x, Element y) const { return p_.leq.test(x, y); }
  bool lt(Element x, Element y) const { return x != y && leq(x, y); }
  /// {y : x <= y}
  const Bitset& up(Element x) const { return p_.leq.row(x); }
  /// {y : y <= x}
  const Bitset& down(Element x) const { return down_.row(x); }
  Element meet(Element x, Element y) const { return p_.meet[x * size() + y]; }
  Element join(Element x, Element y) const { return p_.join[x * size() + y]; }
  Element bottom() const { return p_.bottom; }
  Element top() const { return p_.top; }
  const std::vector<Perm>& action() const { return p_.action; }
  bool trivial_action() const { return p_.action.size() == 1; }
  Element act(std::size_t g, Element x) const { return p_.action[g][x]; }

  const std::string& label(Element x) const { return p_.labels[x]; }
  const std::vector<std::string>& labels() const { return p_.labels; }
  const Parts& parts() const { return p_; }

  friend bool operator==(const GLattice& a, const GLattice& b) {
    return a.p_.leq == b.p_.leq && a.p_.meet == b.p_.meet && a.p_.join == b.p_.join &&
           a.p_.action == b.p_.action && a.p_.bottom == b.p_.bottom && a.p_.top == b.p_.top;
  }

private:
  Parts p_;
  BitMatrix down_;
};

namespace detail {

inline std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

/// Removes duplicate permutations and moves the identity to the front.
inline std::vector<Perm> normalize_action(std::vector<Perm> action, std::size_t n) {
  std::set<Perm> seen;
  std::vector<Perm> out;
  out.push_back(identity_perm(n));
  seen.insert(out.front());
  for (auto& p : action)
    if (seen.insert(p).second) out.push_back(std::move(p));
  return out;
}

}  // namespace detail

/// Builds a GLattice from an order relation, computing meet/join tables.
/// Throws std::invalid_argument when the order is not a lattice.
inline GLattice make_lattice(BitMatrix leq, std::vector<Perm> action = {},
                             std::vector<std::string> labels = {}) {
  const std::size_t m = leq.rows();
  if (m == 0) throw std::invalid_argument("lattice must be nonempty");
  if (leq.cols() != m) throw std::invalid_argument("order relation must be square");
  const BitMatrix down = leq.transposed();

  GLattice::Parts parts;
  parts.meet.assign(m * m, 0);
  parts.join.assign(m * m, 0);
  auto least_in = [&](const Bitset& s, const BitMatrix& ups) -> std::size_t {
    // The least element of s is the one whose up-set contains all of s.
    std::size_t found = m;
    s.for_each([&](std::size_t u) {
      if (found == m && s.subset_of(ups.row(u))) found = u;
    });
    return found;
  };
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = x; y < m; ++y) {
      const std::size_t j = least_in(leq.row(x) & leq.row(y), leq);
      const std::size_t mt = least_in(down.row(x) & down.row(y), down);
      if (j == m || mt == m)
        throw std::invalid_argument("order is not a lattice at (" + std::to_string(x) + "," +
                                    std::to_string(y) + ")");
      parts.join[x * m + y] = parts.join[y * m + x] = static_cast<Element>(j);
      parts.meet[x * m + y] = parts.meet[y * m + x] = static_cast<Element>(mt);
    }
  }
  Element bottom = 0, top = 0;
  for (Element x = 1; x < m; ++x) {
    bottom = parts.meet[bottom * m + x];
    top = parts.join[top * m + x];
  }
  parts.bottom = bottom;
  parts.top = top;
  parts.action = detail::normalize_action(std::move(action), m);
  parts.labels = labels.size() == m ? std::move(labels) : detail::index_labels(m);
  parts.leq = std::move(leq);
  return GLattice(std::move(parts));
}

/// The chain [n] = {0 < 1 < ... < n}.
inline GLattice build_chain(std::size_t n) {
  const std::size_t m = n + 1;
  BitMatrix leq(m, m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = x; y < m; ++y) leq.set(x, y);
  return make_lattice(std::move(leq));
}

/// Componentwise product. The first factor is the most significant coordinate
/// of the element index. Factors must carry the trivial action.
inline GLattice build_product(const std::vector<GLattice>& factors) {
  if (factors.empty()) return build_chain(0);
  for (const auto& f : factors)
    if (!f.trivial_action())
      throw std::invalid_argument("build_product: factors must have trivial action");

  std::size_t m = 1;
  for (const auto& f : factors) m *= f.size();
  const std::size_t k = factors.size();
  std::vector<std::vector<std::size_t>> coords(m, std::vector<std::size_t>(k));
  for (std::size_t idx = 0; idx < m; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = k; i-- > 0;) {
      coords[idx][i] = rest % factors[i].size();
      rest /= factors[i].size();
    }
  }
  BitMatrix leq(m, m);
  std::vector<std::string> labels(m);
  for (std::size_t a = 0; a < m; ++a) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k; ++i) os << (i ? "," : "") << factors[i].label(static_cast<Element>(coords[a][i]));
    os << ')';
    labels[a] = os.str();
    for (std::size_t b = 0; b < m; ++b) {
      bool le = true;
      for (std::size_t i = 0; i < k && le; ++i)
        le = factors[i].leq(static_cast<Element>(coords[a][i]), static_cast<Element>(coords[b][i]));
      if (le) leq.set(a, b);
    }
  }
  return make_lattice(std::move(leq), {}, std::move(labels));
}

inline GLattice build_grid(const std::vector<std::size_t>& exponents) {
  std::vector<GLattice> f;
  for (auto n : exponents) f.push_back(build_chain(n));
  return build_product(f);
}

/// Boolean lattice with k atoms, [1]^k.
inline GLattice build_boolean(std::size_t k) {
  return build_grid(std::vector<std::size_t>(k, 1));
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Lattice of all subspaces of F_p^n ordered by inclusion.
///
/// Each subspace is enumerated once from its reduced row-echelon basis, so
/// distinct elements are distinct subspaces. Elements are ordered by
/// dimension; the zero subspace is element 0 and F_p^n is the last.
/// `cap` bounds the total number of subspaces.
inline GLattice build_subspace_lattice(std::uint32_t p, std::uint32_t n, std::size_t cap = 4096) {
  if (!is_prime(p)) throw std::invalid_argument("subspace lattice needs a prime p");
  if (n == 0) throw std::invalid_argument("subspace lattice needs n >= 1");
  std::size_t vectors = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    vectors *= p;
    if (vectors > (std::size_t{1} << 20)) throw CapExceeded("F_p^n too large to enumerate");
  }

  auto encode = [&](const std::vector<std::uint32_t>& v) {
    std::size_t code = 0;
    for (std::uint32_t i = 0; i < n; ++i) code = code * p + v[i];
    return code;
  };

  std::vector<Bitset> members;
  std::vector<std::string> labels;

  for (std::uint32_t d = 0; d <= n; ++d) {
    // pivot column sets as increasing d-subsets of {0..n-1}
    std::vector<std::uint32_t> piv(d);
    std::iota(piv.begin(), piv.end(), 0U);
    while (true) {
      // free positions: row r, column c > piv[r], c not a pivot column
      std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;
      std::vector<bool> is_piv(n, false);
      for (auto c : piv) is_piv[c] = true;
      for (std::uint32_t r = 0; r < d; ++r)
        for (std::uint32_t c = piv[r] + 1; c < n; ++c)
          if (!is_piv[c]) free_pos.emplace_back(r, c);

      std::vector<std::uint32_t> vals(free_pos.size(), 0);
      while (true) {
        std::vector<std::vector<std::uint32_t>> basis(d, std::vector<std::uint32_t>(n, 0));
        for (std::uint32_t r = 0; r < d; ++r) basis[r][piv[r]] = 1;
        for (std::size_t f = 0; f < free_pos.size(); ++f) basis[free_pos[f].first][free_pos[f].second] = vals[f];

        Bitset span(vectors);
        std::vector<std::uint32_t> coef(d, 0), v(n);
        while (true) {
          for (std::uint32_t i = 0; i < n; ++i) {
            std::uint64_t s = 0;
            for (std::uint32_t r = 0; r < d; ++r) s += std::uint64_t{coef[r]} * basis[r][i];
            v[i] = static_cast<std::uint32_t>(s % p);
          }
          span.set(encode(v));
          std::uint32_t r = 0;
          for (; r < d; ++r) {
            if (++coef[r] < p) break;
            coef[r] = 0;
          }
          if (r == d) break;
        }
        members.push_back(std::move(span));
        if (members.size() > cap) throw CapExceeded("subspace count exceeds cap " + std::to_string(cap));

        std::ostringstream os;
        os << '<';
        for (std::uint32_t r = 0; r < d; ++r) {
          if (r) os << ',';
          for (std::uint32_t i = 0; i < n; ++i) os << basis[r][i];
        }
        os << '>';
        labels.push_back(os.str());

        std::size_t f = 0;
        for (; f < vals.size(); ++f) {
          if (++vals[f] < p) break;
          vals[f] = 0;
        }
        if (f == vals.size()) break;
      }

      // next pivot combination
      std::int64_t i = static_cast<std::int64_t>(d) - 1;
      while (i >= 0 && piv[static_cast<std::size_t>(i)] == n - d + static_cast<std::uint32_t>(i)) --i;
      if (i < 0) break;
      ++piv[static_cast<std::size_t>(i)];
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
    }
  }

  const std::size_t m = members.size();
  BitMatrix leq(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (members[a].subset_of(members[b])) leq.set(a, b);
  return make_lattice(std::move(leq), {}, std::move(labels));
}

/// The opposite lattice: order reversed, meet/join and bottom/top swapped.
inline GLattice dual(const GLattice& L) {
  GLattice::Parts p = L.parts();
  p.leq = p.leq.transposed();
  std::swap(p.meet, p.join);
  std::swap(p.bottom, p.top);
  return GLattice(std::move(p));
}

/// Lists every violated GLattice invariant; empty means valid.
inline std::vector<std::string> validate(const GLattice& L) {
  std::vector<std::string> out;
  const std::size_t m = L.size();
  const auto& P = L.parts();
  if (m == 0) {
    out.emplace_back("empty lattice");
    return out;
  }
  if (P.leq.cols() != m) out.emplace_back("order relation is not square");
  if (P.meet.size() != m * m || P.join.size() != m * m) {
    out.emplace_back("meet/join tables have wrong size");
    return out;
  }

  for (Element x = 0; x < m; ++x)
    if (!L.leq(x, x)) {
      out.push_back("not reflexive at " + std::to_string(x));
      break;
    }
  [&] {
    for (Element x = 0; x < m; ++x)
      for (Element y = x + 1; y < m; ++y)
        if (L.leq(x, y) && L.leq(y, x)) {
          out.push_back("not antisymmetric at (" + std::to_string(x) + "," + std::to_string(y) + ")");
          return;
        }
  }();
  [&] {
    for (Element x = 0; x < m; ++x) {
      // every y above x must have its up-set inside x's up-set
      bool bad = false;
      L.up(x).for_each([&](std::size_t y) {
        if (!bad && !L.up(static_cast<Element>(y)).subset_of(L.up(x))) bad = true;
      });
      if (bad) {
        out.push_back("not transitive through " + std::to_string(x));
        return;
      }
    }
  }();

  [&] {
    for (Element x = 0; x < m; ++x)
      for (Element y = 0; y < m; ++y) {
        const Element mt = L.meet(x, y), jn = L.join(x, y);
        if (mt >= m || jn >= m) {
          out.emplace_back("meet/join table entry out of range");
          return;
        }
        const Bitset lower = L.down(x) & L.down(y);
        const Bitset upper = L.up(x) & L.up(y);
        if (!lower.test(mt) || !lower.subset_of(L.down(mt))) {
          out.push_back("meet(" + std::to_string(x) + "," + std::to_string(y) + ") is not the greatest lower bound");
          return;
        }
        if (!upper.test(jn) || !upper.subset_of(L.up(jn))) {
          out.push_back("join(" + std::to_string(x) + "," + std::to_string(y) + ") is not the least upper bound");
          return;
        }
      }
  }();

  if (L.bottom() >= m || !L.up(L.bottom()).all()) out.emplace_back("bottom is not below every element");
  if (L.top() >= m || !L.down(L.top()).all()) out.emplace_back("top is not above every element");

  const auto& act = L.action();
  if (act.empty() || !is_identity(act.front())) out.emplace_back("action does not start with the identity");
  std::set<Perm> actset(act.begin(), act.end());
  for (std::size_t g = 0; g < act.size(); ++g) {
    const Perm& pi = act[g];
    if (pi.size() != m || !is_permutation(pi)) {
      out.push_back("action entry " + std::to_string(g) + " is not a permutation");
      return out;
    }
    bool automorphism = true;
    for (Element x = 0; x < m && automorphism; ++x)
      for (Element y = 0; y < m && automorphism; ++y)
        if (L.leq(x, y) != L.leq(pi[x], pi[y])) automorphism = false;
    if (!automorphism) out.push_back("action entry " + std::to_string(g) + " is not a lattice automorphism");
    if (!actset.count(inverse(pi))) out.push_back("action not closed under inverse at " + std::to_string(g));
  }
  for (const auto& a : act) {
    bool closed = true;
    for (const auto& b : act)
      if (a.size() == m && b.size() == m && !actset.count(compose(a, b))) closed = false;
    if (!closed) {
      out.emplace_back("action not closed under composition");
      break;
    }
  }
  return out;
}

/// G-orbits of elements; each orbit listed by its least element, ascending.
inline std::vector<Element> element_orbit_reps(const GLattice& L) {
  std::vector<Element> reps;
  for (Element x = 0; x < L.size(); ++x) {
    bool least = true;
    for (const auto& g : L.action())
      if (g[x] < x) least = false;
    if (least) reps.push_back(x);
  }
  return reps;
}

}  // namespace trfca
