#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bitset.hpp"
#include "concepts.hpp"
#include "context.hpp"
#include "errors.hpp"
#include "lattice.hpp"

namespace trfca {

/// A relation x → y on a G-lattice. The lattice is borrowed and must
/// outlive the relation; identities are always present.
struct GRelation {
  const GLattice* lattice = nullptr;
  BitMatrix pairs;

  GRelation() = default;
  explicit GRelation(const GLattice& L) : lattice(&L), pairs(L.size(), L.size()) {
    for (std::size_t x = 0; x < L.size(); ++x) pairs.set(x, x);
  }

  std::size_t size() const { return pairs.rows(); }
  bool has(Element x, Element y) const { return pairs.test(x, y); }
  void add(Element x, Element y) { pairs.set(x, y); }
  /// Number of arrows x → y with x ≠ y.
  std::size_t nontrivial_count() const { return pairs.count() - size(); }
  bool subset_of(const GRelation& o) const { return pairs.subset_of(o.pairs); }

  std::vector<RelationPair> nontrivial_pairs() const {
    std::vector<RelationPair> out;
    for (Element x = 0; x < size(); ++x)
      pairs.row(x).for_each([&](std::size_t y) {
        if (y != x) out.push_back({x, static_cast<Element>(y)});
      });
    return out;
  }

  friend bool operator==(const GRelation& a, const GRelation& b) { return a.pairs == b.pairs; }
};

struct GRelationHash {
  std::size_t operator()(const GRelation& r) const { return r.pairs.hash(); }
};

inline GRelation identity_relation(const GLattice& L) { return GRelation(L); }

/// The relation ≤ itself.
inline GRelation complete_relation(const GLattice& L) {
  GRelation r(L);
  r.pairs = L.parts().leq;
  return r;
}

/// Violations of the G-relation invariants (refines ≤, reflexive,
/// G-stable, transitive); empty when R is a G-relation.
inline std::vector<std::string> relation_invariant_errors(const GRelation& R) {
  std::vector<std::string> errs;
  const GLattice& L = *R.lattice;
  if (R.size() != L.size()) return {"relation size does not match lattice"};
  for (Element x = 0; x < L.size(); ++x) {
    if (!R.has(x, x)) errs.push_back("not reflexive at " + L.label(x));
    if (!R.pairs.row(x).subset_of(L.up(x))) errs.push_back("arrow out of " + L.label(x) + " does not refine <=");
  }
  for (Element x = 0; x < L.size(); ++x)
    R.pairs.row(x).for_each([&](std::size_t yy) {
      const auto y = static_cast<Element>(yy);
      for (const auto& g : L.action())
        if (!R.has(g[x], g[y])) {
          errs.push_back("not G-stable at " + pair_label(L, {x, y}));
          return;
        }
      if (!R.pairs.row(y).subset_of(R.pairs.row(x))) errs.push_back("not transitive through " + pair_label(L, {x, y}));
    });
  return errs;
}

namespace detail {

inline void require_relation(const GRelation& R) {
  if (R.lattice == nullptr) throw std::invalid_argument("relation has no lattice");
  const auto errs = relation_invariant_errors(R);
  if (!errs.empty()) throw std::invalid_argument("not a G-relation: " + errs.front());
}

inline void require_strict(const GLattice& L, Element x, Element y) {
  if (x >= L.size() || y >= L.size() || !L.lt(x, y))
    throw std::invalid_argument("expected x < y, got " + std::to_string(x) + ", " + std::to_string(y));
}

/// Warshall on packed rows. Returns true if anything was added.
inline bool transitive_close(BitMatrix& m) {
  bool changed = false;
  for (std::size_t k = 0; k < m.rows(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != k && m.test(i, k) && !m.row(k).subset_of(m.row(i))) {
        m.row(i) |= m.row(k);
        changed = true;
      }
  return changed;
}

inline bool g_close(const GLattice& L, BitMatrix& m) {
  bool changed = false;
  if (L.trivial_action()) return false;
  for (Element x = 0; x < L.size(); ++x)
    for (auto y : m.row(x).indices())
      for (const auto& g : L.action())
        if (!m.test(g[x], g[y])) {
          m.set(g[x], g[y]);
          changed = true;
        }
  return changed;
}

inline void add_orbit(const GLattice& L, BitMatrix& m, Element x, Element y) {
  for (const auto& g : L.action()) m.set(g[x], g[y]);
}

inline GRelation reflexive_transitive(const GLattice& L, BitMatrix m) {
  for (std::size_t x = 0; x < L.size(); ++x) m.set(x, x);
  transitive_close(m);
  GRelation r(L);
  r.pairs = std::move(m);
  return r;
}

}  // namespace detail

/// Restriction axiom: x → y and x′ ≤ y imply x ∧ x′ → x′.
/// Throws std::invalid_argument if R is not a G-relation.
inline bool is_transfer_system(const GRelation& R) {
  detail::require_relation(R);
  const GLattice& L = *R.lattice;
  for (Element x = 0; x < L.size(); ++x)
    for (auto yy : R.pairs.row(x).indices()) {
      const auto y = static_cast<Element>(yy);
      if (y == x) continue;
      bool ok = true;
      L.down(y).for_each([&](std::size_t xp) {
        if (ok && !R.has(L.meet(x, static_cast<Element>(xp)), static_cast<Element>(xp))) ok = false;
      });
      if (!ok) return false;
    }
  return true;
}

/// Extension axiom: x → y and x ≤ y′ imply y′ → y ∨ y′.
inline bool is_cotransfer_system(const GRelation& R) {
  detail::require_relation(R);
  const GLattice& L = *R.lattice;
  for (Element x = 0; x < L.size(); ++x)
    for (auto yy : R.pairs.row(x).indices()) {
      const auto y = static_cast<Element>(yy);
      if (y == x) continue;
      bool ok = true;
      L.up(x).for_each([&](std::size_t yp) {
        if (ok && !R.has(static_cast<Element>(yp), L.join(y, static_cast<Element>(yp)))) ok = false;
      });
      if (!ok) return false;
    }
  return true;
}

/// Least transfer system containing the arrows of `m` (which must refine ≤),
/// by iterating G-stability, restriction and transitivity to a fixed point.
inline GRelation transfer_closure(const GLattice& L, BitMatrix m) {
  for (std::size_t x = 0; x < L.size(); ++x) m.set(x, x);
  bool changed = true;
  while (changed) {
    changed = detail::g_close(L, m);
    for (Element x = 0; x < L.size(); ++x)
      for (auto yy : m.row(x).indices())
        L.down(static_cast<Element>(yy)).for_each([&](std::size_t xp) {
          const Element r = L.meet(x, static_cast<Element>(xp));
          if (!m.test(r, xp)) {
            m.set(r, xp);
            changed = true;
          }
        });
    changed = detail::transitive_close(m) || changed;
  }
  GRelation out(L);
  out.pairs = std::move(m);
  return out;
}

/// Dual of transfer_closure: G-stability, extension and transitivity.
inline GRelation cotransfer_closure(const GLattice& L, BitMatrix m) {
  for (std::size_t x = 0; x < L.size(); ++x) m.set(x, x);
  bool changed = true;
  while (changed) {
    changed = detail::g_close(L, m);
    for (Element x = 0; x < L.size(); ++x)
      for (auto yy : m.row(x).indices())
        L.up(x).for_each([&](std::size_t yp) {
          const Element e = L.join(static_cast<Element>(yy), static_cast<Element>(yp));
          if (!m.test(yp, e)) {
            m.set(yp, e);
            changed = true;
          }
        });
    changed = detail::transitive_close(m) || changed;
  }
  GRelation out(L);
  out.pairs = std::move(m);
  return out;
}

/// ⌊x→y⌋, the least transfer system containing x → y: the
/// reflexive-transitive closure of {(g·x) ∧ z → z : g ∈ G, z ≤ g·y}.
inline GRelation floor_closure(const GLattice& L, Element x, Element y) {
  detail::require_strict(L, x, y);
  BitMatrix m(L.size(), L.size());
  for (const auto& g : L.action())
    L.down(g[y]).for_each([&](std::size_t z) { m.set(L.meet(g[x], static_cast<Element>(z)), z); });
  return detail::reflexive_transitive(L, std::move(m));
}

/// ⌈x→y⌉, the least cotransfer system containing x → y:
/// {z → (g·y) ∨ z : g ∈ G, z ≥ g·x}°.
inline GRelation ceil_closure(const GLattice& L, Element x, Element y) {
  detail::require_strict(L, x, y);
  BitMatrix m(L.size(), L.size());
  for (const auto& g : L.action())
    L.up(g[x]).for_each([&](std::size_t z) { m.set(z, L.join(g[y], static_cast<Element>(z))); });
  return detail::reflexive_transitive(L, std::move(m));
}

/// ⌈x→y⌉^⊞ = {a → b : for all g, x ≰ g·a or y ≰ g·b or y ≤ g·a}.
inline GRelation rlp_transfer(const GLattice& L, Element x, Element y) {
  detail::require_strict(L, x, y);
  GRelation r(L);
  for (Element a = 0; a < L.size(); ++a)
    L.up(a).for_each([&](std::size_t bb) {
      if (transfer_incidence(L, {a, static_cast<Element>(bb)}, {x, y})) r.add(a, static_cast<Element>(bb));
    });
  return r;
}

/// Join in Tr(L): (⋃ {a ∧ z → z : a → b ∈ T, z ≤ b})°.
inline GRelation join_transfer(const GLattice& L, const std::vector<GRelation>& systems) {
  BitMatrix m(L.size(), L.size());
  for (const auto& T : systems) {
    if (!is_transfer_system(T)) throw std::invalid_argument("join_transfer: input is not a transfer system");
    for (Element a = 0; a < L.size(); ++a)
      T.pairs.row(a).for_each([&](std::size_t b) {
        L.down(static_cast<Element>(b)).for_each([&](std::size_t z) { m.set(L.meet(a, static_cast<Element>(z)), z); });
      });
  }
  return detail::reflexive_transitive(L, std::move(m));
}

/// Meet in Tr(L) (and in any family closed under intersection).
inline GRelation meet_relations(const GLattice& L, const std::vector<GRelation>& systems) {
  GRelation r = complete_relation(L);
  for (const auto& T : systems)
    for (std::size_t x = 0; x < L.size(); ++x) r.pairs.row(x) &= T.pairs.row(x);
  return r;
}

/// All transfer systems on L by backtracking over the orbit representatives
/// of nontrivial pairs: each orbit is either excluded or added (together with
/// everything it forces), and branches that force an excluded orbit are cut.
/// Throws CapExceeded if there are more than `cap` orbits.
inline std::vector<GRelation> enumerate_transfer_systems(const GLattice& L, std::size_t cap = 20) {
  const auto reps = nontrivial_relation_orbits(L);
  if (reps.size() > cap)
    throw CapExceeded(std::to_string(reps.size()) + " orbit pairs exceed the oracle cap " + std::to_string(cap));
  std::vector<GRelation> floors;
  for (auto p : reps) floors.push_back(floor_closure(L, p.x, p.y));

  std::vector<GRelation> out;
  std::vector<bool> excluded(reps.size(), false);
  std::function<void(const GRelation&, std::size_t)> rec = [&](const GRelation& T, std::size_t i) {
    if (i == reps.size()) {
      out.push_back(T);
      return;
    }
    if (T.has(reps[i].x, reps[i].y)) {
      rec(T, i + 1);
      return;
    }
    excluded[i] = true;
    rec(T, i + 1);
    excluded[i] = false;

    // The union of two transfer systems is restriction-closed, so its
    // transitive closure is their join.
    GRelation U = T;
    for (std::size_t x = 0; x < L.size(); ++x) U.pairs.row(x) |= floors[i].pairs.row(x);
    detail::transitive_close(U.pairs);
    for (std::size_t k = 0; k < i; ++k)
      if (excluded[k] && U.has(reps[k].x, reps[k].y)) return;
    rec(U, i + 1);
  };
  rec(identity_relation(L), 0);
  return out;
}

/// Every set closed under `closure`, reached from closure(∅) by adding one
/// G-orbit of pairs at a time. Throws CapExceeded past `cap` members.
inline std::vector<GRelation> enumerate_closed_family(
    const GLattice& L, const std::function<GRelation(const GLattice&, BitMatrix)>& closure, std::size_t cap) {
  const auto reps = nontrivial_relation_orbits(L);
  std::vector<GRelation> out{closure(L, BitMatrix(L.size(), L.size()))};
  std::unordered_set<GRelation, GRelationHash> seen{out.front()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto p : reps) {
      if (out[i].has(p.x, p.y)) continue;
      BitMatrix m = out[i].pairs;
      detail::add_orbit(L, m, p.x, p.y);
      GRelation c = closure(L, std::move(m));
      if (seen.insert(c).second) {
        if (out.size() >= cap) throw CapExceeded("closed family exceeds cap " + std::to_string(cap));
        out.push_back(std::move(c));
      }
    }
  return out;
}

/// Indices of the join- and meet-irreducible members of a finite lattice of
/// relations ordered by inclusion.
struct Irreducibles {
  std::vector<std::size_t> joins;
  std::vector<std::size_t> meets;
};

/// A member is join-irreducible iff it has exactly one lower cover in the
/// family (this excludes the minimum), and dually for meets. Throws
/// std::invalid_argument when the family is not closed under intersection.
inline Irreducibles irreducibles_of_family(const std::vector<GRelation>& systems) {
  const std::size_t n = systems.size();
  std::unordered_set<GRelation, GRelationHash> members(systems.begin(), systems.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      GRelation m = systems[i];
      for (std::size_t x = 0; x < m.size(); ++x) m.pairs.row(x) &= systems[j].pairs.row(x);
      if (!members.count(m)) throw std::invalid_argument("family is not closed under meets");
    }

  // below[i][j]: systems[j] ⊊ systems[i]
  std::vector<Bitset> below(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && systems[j].subset_of(systems[i])) below[i].set(j);

  Irreducibles out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lower_covers = 0, upper_covers = 0;
    below[i].for_each([&](std::size_t j) {
      // j is a lower cover of i iff nothing lies strictly between
      Bitset between = below[i];
      between.reset(j);
      bool cover = true;
      between.for_each([&](std::size_t k) {
        if (cover && below[k].test(j)) cover = false;
      });
      if (cover) ++lower_covers;
    });
    for (std::size_t j = 0; j < n; ++j) {
      if (!below[j].test(i)) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (k != j && below[j].test(k) && below[k].test(i)) cover = false;
      if (cover) ++upper_covers;
    }
    if (lower_covers == 1) out.joins.push_back(i);
    if (upper_covers == 1) out.meets.push_back(i);
  }
  return out;
}

/// Two-out-of-three: for x ≤ y ≤ z, any two of x→y, y→z, x→z give the third.
inline bool is_saturated(const GRelation& R) {
  const GLattice& L = *R.lattice;
  for (Element x = 0; x < L.size(); ++x)
    for (auto yy : L.up(x).indices()) {
      const auto y = static_cast<Element>(yy);
      for (auto zz : L.up(y).indices()) {
        const auto z = static_cast<Element>(zz);
        const int n = R.has(x, y) + R.has(y, z) + R.has(x, z);
        if (n == 2) return false;
      }
    }
  return true;
}

namespace detail {

/// Adds the two non-transitive 2-of-3 consequences; true if anything changed.
inline bool two_of_three_step(const GLattice& L, BitMatrix& m) {
  bool changed = false;
  for (Element x = 0; x < L.size(); ++x) {
    // x→y and x→z with y ≤ z give y→z
    const Bitset out = m.row(x);
    out.for_each([&](std::size_t y) {
      const Bitset add = out & L.up(static_cast<Element>(y));
      if (!add.subset_of(m.row(y))) {
        m.row(y) |= add;
        changed = true;
      }
    });
    // y→z and x→z with x ≤ y give x→y
    L.up(x).for_each([&](std::size_t y) {
      if (!m.test(x, y) && m.row(x).intersects(m.row(y))) {
        m.set(x, y);
        changed = true;
      }
    });
  }
  return changed;
}

template <class Close>
GRelation alternate_with_two_of_three(const GLattice& L, BitMatrix m, Close&& close) {
  GRelation r = close(L, std::move(m));
  while (true) {
    BitMatrix next = r.pairs;
    if (!two_of_three_step(L, next)) return r;
    r = close(L, std::move(next));
  }
}

}  // namespace detail

/// Least saturated transfer system containing the arrows of m.
inline GRelation saturated_closure(const GLattice& L, BitMatrix m) {
  return detail::alternate_with_two_of_three(L, std::move(m), transfer_closure);
}

inline GRelation saturated_closure(const GRelation& R) { return saturated_closure(*R.lattice, R.pairs); }

/// Least cosaturated cotransfer system containing the arrows of m.
inline GRelation cosaturated_closure(const GLattice& L, BitMatrix m) {
  return detail::alternate_with_two_of_three(L, std::move(m), cotransfer_closure);
}

/// Covering pairs x ⋖ y of L.
inline std::vector<RelationPair> cover_relations(const GLattice& L) {
  std::vector<RelationPair> out;
  for (Element x = 0; x < L.size(); ++x)
    L.up(x).for_each([&](std::size_t yy) {
      const auto y = static_cast<Element>(yy);
      if (y == x) return;
      Bitset between = L.up(x) & L.down(y);
      if (between.count() == 2) out.push_back({x, y});
    });
  return out;
}

/// Lexicographically least representative of each G-orbit of covers.
inline std::vector<RelationPair> cover_orbit_reps(const GLattice& L) {
  std::vector<RelationPair> out;
  for (auto p : cover_relations(L)) {
    bool least = true;
    for (const auto& g : L.action())
      if (RelationPair{g[p.x], g[p.y]} < p) least = false;
    if (least) out.push_back(p);
  }
  return out;
}

/// J(coSat(L)): ⌊x→⊤⌋ for one x per orbit of L ∖ {⊤}.
inline std::vector<GRelation> cosat_join_irreducibles(const GLattice& L) {
  std::vector<GRelation> out;
  for (Element x : element_orbit_reps(L))
    if (x != L.top()) out.push_back(floor_closure(L, x, L.top()));
  return out;
}

/// M(Sat(L)): {A → B : g·x ≰ B or g·x ≤ A for all g}, one x per orbit of
/// L ∖ {⊥}.
inline std::vector<GRelation> sat_meet_irreducibles(const GLattice& L) {
  std::vector<GRelation> out;
  for (Element x : element_orbit_reps(L)) {
    if (x == L.bottom()) continue;
    GRelation r(L);
    for (Element a = 0; a < L.size(); ++a)
      L.up(a).for_each([&](std::size_t b) {
        for (const auto& g : L.action())
          if (L.leq(g[x], static_cast<Element>(b)) && !L.leq(g[x], a)) return;
        r.add(a, static_cast<Element>(b));
      });
    out.push_back(std::move(r));
  }
  return out;
}

/// Sat(L), generated from the saturated closures of the covers: starts at
/// the minimum and repeatedly takes saturated joins with those generators.
inline std::vector<GRelation> enumerate_saturated(const GLattice& L, std::size_t cap = 100000) {
  std::vector<GRelation> gens;
  for (auto c : cover_orbit_reps(L)) gens.push_back(saturated_closure(floor_closure(L, c.x, c.y)));
  std::vector<GRelation> out{identity_relation(L)};
  std::unordered_set<GRelation, GRelationHash> seen{out.front()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      if (g.subset_of(out[i])) continue;
      BitMatrix m = out[i].pairs;
      for (std::size_t x = 0; x < L.size(); ++x) m.row(x) |= g.pairs.row(x);
      GRelation j = saturated_closure(L, std::move(m));
      if (seen.insert(j).second) {
        if (out.size() >= cap) throw CapExceeded("saturated family exceeds cap " + std::to_string(cap));
        out.push_back(std::move(j));
      }
    }
  return out;
}

/// Saturated closures of the cover orbits and which of them are
/// join-irreducible in Sat(L).
struct SatCoverAnalysis {
  std::vector<RelationPair> covers;         // orbit representatives
  std::vector<GRelation> cover_closures;    // parallel to covers
  std::vector<GRelation> distinct;          // distinct closures, first-seen order
  std::vector<bool> join_irreducible;       // parallel to distinct
  std::size_t join_irreducible_count() const {
    return static_cast<std::size_t>(std::count(join_irreducible.begin(), join_irreducible.end(), true));
  }
};

/// Every saturated system is a saturated join of cover closures, so a
/// closure T is join-irreducible exactly when the closures strictly below
/// it do not already generate T.
inline SatCoverAnalysis analyze_saturated_covers(const GLattice& L) {
  SatCoverAnalysis a;
  a.covers = cover_orbit_reps(L);
  for (auto c : a.covers) {
    GRelation t = saturated_closure(floor_closure(L, c.x, c.y));
    if (std::find(a.distinct.begin(), a.distinct.end(), t) == a.distinct.end()) a.distinct.push_back(t);
    a.cover_closures.push_back(std::move(t));
  }
  for (const auto& T : a.distinct) {
    BitMatrix m(L.size(), L.size());
    for (const auto& S : a.distinct)
      if (S.subset_of(T) && !(S == T))
        for (std::size_t x = 0; x < L.size(); ++x) m.row(x) |= S.pairs.row(x);
    a.join_irreducible.push_back(!(saturated_closure(L, std::move(m)) == T));
  }
  return a;
}

/// Checks that T ↦ ({p : ⌊p⌋ ⊆ T}, {q : T ⊆ ⌈q⌉^⊞}) is an order isomorphism
/// from Tr(L) onto the concepts of build_reduced_context(L). Returns the
/// failures found; empty means the check passed.
inline std::vector<std::string> verify_canonical_isomorphism(const GLattice& L, std::size_t cap = 20) {
  std::vector<std::string> fails;
  const auto systems = enumerate_transfer_systems(L, cap);
  const FormalContext ctx = build_reduced_context(L);
  const auto reps = ctx.object_pairs;
  std::vector<GRelation> floors, rlps;
  for (auto p : reps) {
    floors.push_back(floor_closure(L, p.x, p.y));
    rlps.push_back(rlp_transfer(L, p.x, p.y));
  }
  const auto concepts = enumerate_concepts(ctx, systems.size() + 1);
  if (concepts.size() != systems.size())
    fails.push_back("|Tr(L)| = " + std::to_string(systems.size()) + " but the context has " +
                    std::to_string(concepts.size()) + " concepts");

  std::vector<Concept> image;
  for (const auto& T : systems) {
    Concept c{Bitset(reps.size()), Bitset(reps.size())};
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (floors[i].subset_of(T)) c.extent.set(i);
      if (T.subset_of(rlps[i])) c.intent.set(i);
    }
    if (!(derive_up(ctx, c.extent) == c.intent) || !(derive_down(ctx, c.intent) == c.extent)) {
      fails.push_back("image of a transfer system is not a concept");
      return fails;
    }
    image.push_back(std::move(c));
  }
  std::unordered_set<Bitset, BitsetHash> extents;
  for (const auto& c : image) extents.insert(c.extent);
  if (extents.size() != image.size()) fails.push_back("map is not injective");
  for (std::size_t i = 0; i < systems.size(); ++i)
    for (std::size_t j = 0; j < systems.size(); ++j)
      if (systems[i].subset_of(systems[j]) != image[i].extent.subset_of(image[j].extent)) {
        fails.push_back("map is not an order embedding");
        return fails;
      }
  return fails;
}

}  // namespace trfca
