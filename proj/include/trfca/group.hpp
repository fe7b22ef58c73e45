#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bitset.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "perm.hpp"

namespace trfca {

inline constexpr std::size_t kDefaultGroupCap = 1024;

/// A finite permutation group with its full element list.
///
/// Elements are indexed in breadth-first discovery order from the
/// generators, identity first. A multiplication table over element indices
/// is precomputed; products are identified through the images of a base
/// (a point list whose images determine each element).
class PermGroup {
public:
  PermGroup() = default;

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Perm>& generators() const { return generators_; }
  const std::vector<Perm>& elements() const { return elements_; }
  const Perm& element(std::size_t i) const { return elements_[i]; }

  /// index of elements[a] * elements[b] (b applied first)
  std::uint32_t mul(std::size_t a, std::size_t b) const { return mul_[a * order() + b]; }
  std::uint32_t inv(std::size_t a) const { return inv_[a]; }

  /// Element index of a permutation, or order() if it is not in the group.
  std::size_t index_of(const Perm& p) const {
    auto it = by_key_.find(key_of(p));
    if (it == by_key_.end() || elements_[it->second] != p) return order();
    return it->second;
  }

  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = a + 1; b < order(); ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  friend PermGroup close_generators(const std::vector<Perm>& gens, std::size_t cap);

private:
  std::vector<std::uint32_t> key_of(const Perm& p) const {
    std::vector<std::uint32_t> k(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i) k[i] = p[base_[i]];
    return k;
  }

  std::size_t degree_ = 0;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;
  std::vector<std::uint32_t> base_;
  std::map<std::vector<std::uint32_t>, std::uint32_t> by_key_;
  std::vector<std::uint32_t> mul_;
  std::vector<std::uint32_t> inv_;
};

/// Breadth-first closure of a generator list. Throws CapExceeded once the
/// group order passes `cap`.
inline PermGroup close_generators(const std::vector<Perm>& gens, std::size_t cap = kDefaultGroupCap) {
  PermGroup G;
  std::size_t degree = 0;
  for (const auto& g : gens) degree = std::max(degree, g.size());
  for (const auto& g : gens)
    if (g.size() != degree || !is_permutation(g))
      throw std::invalid_argument("generators must be permutations of a common degree");
  if (degree == 0) degree = 1;
  G.degree_ = degree;
  G.generators_ = gens;

  std::map<Perm, std::uint32_t> seen;
  G.elements_.push_back(identity_perm(degree));
  seen.emplace(G.elements_.front(), 0);
  for (std::size_t head = 0; head < G.elements_.size(); ++head) {
    for (const auto& s : gens) {
      Perm p = compose(G.elements_[head], s);
      if (seen.emplace(p, static_cast<std::uint32_t>(G.elements_.size())).second) {
        G.elements_.push_back(std::move(p));
        if (G.elements_.size() > cap)
          throw CapExceeded("group order exceeds cap " + std::to_string(cap));
      }
    }
  }

  // Greedy base: add points until the image tuples separate all elements.
  const std::size_t n = G.elements_.size();
  std::vector<std::uint32_t> cls(n, 0);
  std::size_t classes = 1;
  while (classes < n) {
    std::size_t best_pt = 0, best_classes = classes;
    std::vector<std::uint32_t> best_cls;
    for (std::uint32_t pt = 0; pt < degree; ++pt) {
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
      std::vector<std::uint32_t> next(n);
      for (std::size_t e = 0; e < n; ++e) {
        auto [it, _] = ids.emplace(std::make_pair(cls[e], G.elements_[e][pt]), static_cast<std::uint32_t>(ids.size()));
        next[e] = it->second;
      }
      if (ids.size() > best_classes) {
        best_classes = ids.size();
        best_pt = pt;
        best_cls = std::move(next);
      }
    }
    if (best_cls.empty()) throw std::logic_error("duplicate group elements while choosing a base");
    G.base_.push_back(static_cast<std::uint32_t>(best_pt));
    cls = std::move(best_cls);
    classes = best_classes;
  }
  for (std::uint32_t e = 0; e < n; ++e) G.by_key_.emplace(G.key_of(G.elements_[e]), e);

  G.mul_.assign(n * n, 0);
  G.inv_.assign(n, 0);
  std::vector<std::uint32_t> k(G.base_.size());
  for (std::size_t a = 0; a < n; ++a) {
    const Perm& pa = G.elements_[a];
    for (std::size_t b = 0; b < n; ++b) {
      const Perm& pb = G.elements_[b];
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = pa[pb[G.base_[i]]];
      const std::uint32_t ab = G.by_key_.at(k);
      G.mul_[a * n + b] = ab;
      if (ab == 0) G.inv_[a] = static_cast<std::uint32_t>(b);
    }
  }
  return G;
}

/// A subgroup as a member set over the element indices of its ambient group.
using Subgroup = Bitset;

namespace detail {

/// <H ∪ gens>: right-multiplies by generators until closed.
inline Subgroup close_subgroup(const PermGroup& G, const Subgroup& H, const std::vector<std::uint32_t>& gens) {
  Subgroup K = H;
  std::vector<std::uint32_t> queue;
  H.for_each([&](std::size_t e) { queue.push_back(static_cast<std::uint32_t>(e)); });
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t x = queue[head];
    for (std::uint32_t s : gens) {
      const std::uint32_t y = G.mul(x, s);
      if (!K.test(y)) {
        K.set(y);
        queue.push_back(y);
      }
    }
  }
  return K;
}

}  // namespace detail

/// All subgroups of G, each once, ordered by (order, member set).
///
/// Seeds with the cyclic subgroups and joins every known subgroup with every
/// cyclic subgroup until no new subgroup appears. Every subgroup is an
/// iterated join of cyclic ones, so this reaches the same fixed point as
/// closing under all pairwise joins.
inline std::vector<Subgroup> enumerate_subgroups(const PermGroup& G, std::size_t cap = kDefaultGroupCap) {
  const std::size_t n = G.order();
  if (n > cap) throw CapExceeded("group order exceeds cap " + std::to_string(cap));

  Subgroup trivial(n);
  trivial.set(0);

  struct Entry {
    Subgroup members;
    std::vector<std::uint32_t> gens;
  };
  std::vector<Entry> found;
  std::unordered_map<Subgroup, std::size_t, BitsetHash> index;
  auto add = [&](Subgroup s, std::vector<std::uint32_t> gens) {
    if (index.emplace(s, found.size()).second) found.push_back({std::move(s), std::move(gens)});
  };
  add(trivial, {});

  std::vector<std::pair<Subgroup, std::uint32_t>> cyclics;
  {
    std::unordered_map<Subgroup, std::size_t, BitsetHash> cyc_index;
    for (std::uint32_t g = 1; g < n; ++g) {
      Subgroup c = detail::close_subgroup(G, trivial, {g});
      if (cyc_index.emplace(c, cyclics.size()).second) cyclics.emplace_back(std::move(c), g);
    }
  }
  for (const auto& [c, g] : cyclics) add(c, {g});

  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& [c, g] : cyclics) {
      if (c.subset_of(found[i].members)) continue;
      auto gens = found[i].gens;
      gens.push_back(g);
      Subgroup k = detail::close_subgroup(G, found[i].members, gens);
      add(std::move(k), std::move(gens));
    }
  }

  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (auto& e : found) out.push_back(std::move(e.members));
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    const auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a.indices() < b.indices();
  });
  return out;
}

/// Sub(G) with inclusion order and the conjugation action, together with the
/// group and subgroup list it was built from.
struct SubgroupLattice {
  PermGroup group;
  std::vector<Subgroup> subgroups;
  GLattice lattice;
};

inline SubgroupLattice build_subgroup_lattice(const PermGroup& G, std::size_t cap = kDefaultGroupCap) {
  SubgroupLattice out;
  out.group = G;
  out.subgroups = enumerate_subgroups(G, cap);
  const auto& subs = out.subgroups;
  const std::size_t m = subs.size();
  const std::size_t n = G.order();

  std::unordered_map<Subgroup, std::uint32_t, BitsetHash> index;
  for (std::uint32_t i = 0; i < m; ++i) index.emplace(subs[i], i);

  BitMatrix leq(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b)
      if (subs[a].subset_of(subs[b])) leq.set(a, b);

  std::vector<Perm> action;
  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t i = 0; i < m; ++i) members[i] = subs[i].indices();
  for (std::size_t g = 0; g < n; ++g) {
    const std::uint32_t gi = G.inv(g);
    Perm pi(m);
    for (std::size_t i = 0; i < m; ++i) {
      Subgroup conj(n);
      for (auto h : members[i]) conj.set(G.mul(G.mul(g, h), gi));
      pi[i] = index.at(conj);
    }
    action.push_back(std::move(pi));
  }

  std::vector<std::string> labels(m);
  for (std::size_t i = 0; i < m; ++i) labels[i] = "H" + std::to_string(i) + "[" + std::to_string(subs[i].count()) + "]";
  out.lattice = make_lattice(std::move(leq), std::move(action), std::move(labels));
  return out;
}

inline GLattice subgroup_lattice(const PermGroup& G, std::size_t cap = kDefaultGroupCap) {
  return build_subgroup_lattice(G, cap).lattice;
}

/// Number of conjugacy classes of subgroups.
inline std::size_t orbit_count_subgroups(const GLattice& sub) { return element_orbit_reps(sub).size(); }

}  // namespace trfca
