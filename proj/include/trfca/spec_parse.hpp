#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "text.hpp"
#include "group.hpp"
#include "lattice.hpp"
#include "perm.hpp"

namespace trfca {

namespace detail {

inline std::pair<std::string_view, std::string_view> split_kind(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("spec '" + std::string(spec) + "' has no ':'");
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

inline Perm cycle_perm(std::size_t degree, const std::vector<std::uint32_t>& cycle) {
  Perm p = identity_perm(degree);
  for (std::size_t i = 0; i < cycle.size(); ++i) p[cycle[i]] = cycle[(i + 1) % cycle.size()];
  return p;
}

}  // namespace detail

/// Lattice spec grammar:
///   chain:<n> | grid:<n1>,<n2>,... | boolean:<k> | subspaces:<p>,<n>
inline GLattice parse_lattice_spec(std::string_view spec) {
  const auto [kind, args] = detail::split_kind(spec);
  if (kind == "chain") return build_chain(detail::parse_uint(args, "chain length"));
  if (kind == "grid") {
    std::vector<std::size_t> ns;
    for (auto v : detail::parse_uint_list(args, ',', "grid exponent")) ns.push_back(v);
    return build_grid(ns);
  }
  if (kind == "boolean") return build_boolean(detail::parse_uint(args, "atom count"));
  if (kind == "subspaces") {
    const auto v = detail::parse_uint_list(args, ',', "subspace parameter");
    if (v.size() != 2) throw ParseError("subspaces:<p>,<n> takes two parameters");
    if (!is_prime(v[0])) throw ParseError("subspaces: p must be prime");
    if (v[1] == 0) throw ParseError("subspaces: n must be positive");
    return build_subspace_lattice(static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1]));
  }
  throw ParseError("unknown lattice kind '" + std::string(kind) + "'");
}

/// Parses generators in cycle notation: generators separated by ';', each a
/// product of parenthesized cycles. Inside a cycle, points are single digits
/// unless commas are present, e.g. "(01)(23);(024)" or "(0,10,11)".
inline std::vector<Perm> parse_cycle_generators(std::string_view text) {
  std::vector<std::vector<std::vector<std::uint32_t>>> gens;
  std::uint32_t max_point = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto semi = text.find(';', start);
    const std::string_view g = text.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start);
    std::vector<std::vector<std::uint32_t>> cycles;
    std::size_t i = 0;
    while (i < g.size()) {
      if (g[i] != '(') throw ParseError("expected '(' in cycle notation '" + std::string(g) + "'");
      const auto close = g.find(')', i);
      if (close == std::string_view::npos) throw ParseError("unterminated cycle in '" + std::string(g) + "'");
      const std::string_view body = g.substr(i + 1, close - i - 1);
      std::vector<std::uint32_t> cyc;
      if (body.find(',') != std::string_view::npos) {
        for (auto v : detail::parse_uint_list(body, ',', "cycle point")) cyc.push_back(static_cast<std::uint32_t>(v));
      } else {
        for (char c : body) {
          if (c < '0' || c > '9') throw ParseError("bad point '" + std::string(1, c) + "' in cycle");
          cyc.push_back(static_cast<std::uint32_t>(c - '0'));
        }
      }
      for (std::size_t a = 0; a < cyc.size(); ++a)
        for (std::size_t b = a + 1; b < cyc.size(); ++b)
          if (cyc[a] == cyc[b]) throw ParseError("repeated point in cycle");
      for (auto v : cyc) max_point = std::max(max_point, v);
      cycles.push_back(std::move(cyc));
      i = close + 1;
    }
    gens.push_back(std::move(cycles));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  const std::size_t degree = max_point + 1;
  std::vector<Perm> out;
  for (const auto& cycles : gens) {
    Perm p = identity_perm(degree);
    for (const auto& c : cycles) p = compose(p, detail::cycle_perm(degree, c));
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

inline std::vector<Perm> quaternion_generators() {
  // elements: index = 4*sign + unit, unit 0..3 = 1,i,j,k
  // unit products u*v = sign * w
  static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int kNeg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  auto left_mul = [](int u) {
    Perm p(8);
    for (int e = 0; e < 8; ++e) {
      const int s = e / 4, v = e % 4;
      const int sign = s ^ kNeg[u][v];
      p[static_cast<std::size_t>(e)] = static_cast<std::uint32_t>(4 * sign + kUnit[u][v]);
    }
    return p;
  };
  return {left_mul(1), left_mul(2)};
}

}  // namespace detail

/// Group spec grammar:
///   cyclic:N | elem-abelian:p^n | S:n (n<=6) | A:n (n<=7) | D:n (order 2n)
///   | Q:8 | perm:<cycles;cycles;...>
inline PermGroup parse_group_spec(std::string_view spec, std::size_t cap = kDefaultGroupCap) {
  const auto [kind, args] = detail::split_kind(spec);
  std::vector<Perm> gens;
  auto cycle_0n = [](std::size_t first, std::size_t n, std::size_t degree) {
    std::vector<std::uint32_t> c;
    for (std::size_t i = first; i < n; ++i) c.push_back(static_cast<std::uint32_t>(i));
    return detail::cycle_perm(degree, c);
  };

  if (kind == "cyclic") {
    const auto n = detail::parse_uint(args, "cyclic order");
    if (n == 0) throw ParseError("cyclic:N needs N >= 1");
    if (n > cap) throw CapExceeded("group order exceeds cap " + std::to_string(cap));
    gens.push_back(cycle_0n(0, n, n));
  } else if (kind == "elem-abelian") {
    const auto caret = args.find('^');
    if (caret == std::string_view::npos) throw ParseError("elem-abelian:p^n expected");
    const auto p = detail::parse_uint(args.substr(0, caret), "prime");
    const auto n = detail::parse_uint(args.substr(caret + 1), "rank");
    if (!is_prime(p)) throw ParseError("elem-abelian: p must be prime");
    if (n == 0) throw ParseError("elem-abelian: n must be positive");
    const std::size_t degree = p * n;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint32_t> c;
      for (std::size_t j = 0; j < p; ++j) c.push_back(static_cast<std::uint32_t>(i * p + j));
      gens.push_back(detail::cycle_perm(degree, c));
    }
  } else if (kind == "S") {
    const auto n = detail::parse_uint(args, "degree");
    if (n < 1 || n > 6) throw ParseError("S:n supports 1 <= n <= 6");
    if (n >= 2) {
      gens.push_back(detail::cycle_perm(n, {0, 1}));
      gens.push_back(cycle_0n(0, n, n));
    }
  } else if (kind == "A") {
    const auto n = detail::parse_uint(args, "degree");
    if (n < 1 || n > 7) throw ParseError("A:n supports 1 <= n <= 7");
    if (n >= 3) {
      gens.push_back(detail::cycle_perm(n, {0, 1, 2}));
      if (n >= 4) gens.push_back(n % 2 ? cycle_0n(0, n, n) : cycle_0n(1, n, n));
    }
  } else if (kind == "D") {
    const auto n = detail::parse_uint(args, "dihedral parameter");
    if (n == 0) throw ParseError("D:n needs n >= 1");
    if (n == 1) {
      gens.push_back(detail::cycle_perm(2, {0, 1}));
    } else if (n == 2) {
      gens = parse_cycle_generators("(01)(23);(02)(13)");
    } else {
      gens.push_back(cycle_0n(0, n, n));
      Perm r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<std::uint32_t>((n - i) % n);
      gens.push_back(std::move(r));
    }
  } else if (kind == "Q") {
    if (detail::parse_uint(args, "quaternion order") != 8) throw ParseError("only Q:8 is supported");
    gens = detail::quaternion_generators();
  } else if (kind == "perm") {
    gens = parse_cycle_generators(args);
  } else {
    throw ParseError("unknown group kind '" + std::string(kind) + "'");
  }
  return close_generators(gens, cap);
}

}  // namespace trfca
