#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bitset.hpp"
#include "context.hpp"
#include "rational.hpp"

namespace trfca {

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt pow2(std::uint64_t e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

/// Gaussian binomial (n k)_p = Π_{i<k} (p^{n-i} − 1)/(p^{i+1} − 1); ordinary
/// binomial when p = 1. Zero when k > n.
inline BigInt gaussian_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("gaussian_binomial: p must be positive");
  if (k > n) return 0;
  if (p == 1) return binomial(n, k);
  BigInt num = 1, den = 1, pp = p;
  for (std::uint64_t i = 0; i < k; ++i) {
    BigInt a, b;
    mpz_pow_ui(a.get_mpz_t(), pp.get_mpz_t(), n - i);
    mpz_pow_ui(b.get_mpz_t(), pp.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

/// a_d = Σ_i (d i)_p, the number of subspaces of F_p^d.
inline BigInt a_total_subspaces(std::uint64_t d, std::uint64_t p) {
  BigInt s = 0;
  for (std::uint64_t i = 0; i <= d; ++i) s += gaussian_binomial(d, i, p);
  return s;
}

/// ρ(Tr([n])) = (n+2)(n+3) / (6n(n+1)).
inline ExactRational rho_chain(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("rho_chain: n must be positive");
  const BigInt N = n;
  return ExactRational((N + 2) * (N + 3), 6 * N * (N + 1));
}

/// ρ(Tr([n] × [m])) = (m+2)(m+3)(n+2)(n+3)(3mn+4m+4n) / (36(m+1)(n+1)(2m+2n+mn)²).
inline ExactRational rho_grid(std::uint64_t n, std::uint64_t m) {
  if (n == 0 && m == 0) throw std::invalid_argument("rho_grid: [0] x [0] has no nontrivial relation");
  const BigInt N = n, M = m;
  const BigInt q = 2 * M + 2 * N + M * N;
  return ExactRational((M + 2) * (M + 3) * (N + 2) * (N + 3) * (3 * M * N + 4 * M + 4 * N),
                       36 * (M + 1) * (N + 1) * q * q);
}

/// Numerator and denominator of the codensity of a product of chains before
/// reduction: the numerator is Π A_i − Π B_i with
///   A_i = Σ_{x≤y≤z≤n_i} (z−x+1) = Σ_d (n_i−d+1)(d+1)²,
///   B_i = Σ_{x≤y≤z≤n_i} (z−y+1) = Σ_d (d+1)(n_i−d+1)(n_i−d+2)/2,
/// and the denominator is (Π binom(n_i+2,2) − Π (n_i+1))².
struct CodensityParts {
  BigInt numerator;
  BigInt denominator;
  ExactRational value() const { return ExactRational(numerator, denominator); }
};

inline CodensityParts rho_cyclic_parts(const std::vector<std::uint64_t>& ns) {
  if (ns.empty() || std::all_of(ns.begin(), ns.end(), [](auto v) { return v == 0; }))
    throw std::invalid_argument("rho_cyclic: needs some positive exponent");
  BigInt pa = 1, pb = 1, pt = 1, pe = 1;
  for (auto n : ns) {
    BigInt a = 0, b = 0;
    for (std::uint64_t d = 0; d <= n; ++d) {
      const BigInt D = d, r = n - d;
      a += (r + 1) * (D + 1) * (D + 1);
      b += (D + 1) * (r + 1) * (r + 2) / 2;
    }
    pa *= a;
    pb *= b;
    pt *= binomial(n + 2, 2);
    pe *= n + 1;
  }
  const BigInt j = pt - pe;
  return {pa - pb, j * j};
}

/// ρ(Tr(Sub(C_N))) for N = p_1^{n_1} ⋯ p_k^{n_k}, i.e. ρ(Tr([n_1] × ⋯ × [n_k])).
inline ExactRational rho_cyclic(const std::vector<std::uint64_t>& ns) { return rho_cyclic_parts(ns).value(); }

/// ρ(Tr([1]^k)) = (6^k − 5^k)/(3^k − 2^k)².
inline ExactRational rho_boolean(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("rho_boolean: k must be positive");
  BigInt s6, s5, s3, s2;
  mpz_ui_pow_ui(s6.get_mpz_t(), 6, k);
  mpz_ui_pow_ui(s5.get_mpz_t(), 5, k);
  mpz_ui_pow_ui(s3.get_mpz_t(), 3, k);
  mpz_ui_pow_ui(s2.get_mpz_t(), 2, k);
  const BigInt j = s3 - s2;
  return ExactRational(s6 - s5, j * j);
}

/// |J(Tr(Sub(C_p^n)))| = Σ_{i<n} (n i)_p (a_{n−i} − 1).
inline BigInt elem_abelian_j(std::uint64_t p, std::uint64_t n) {
  BigInt s = 0;
  for (std::uint64_t i = 0; i < n; ++i) s += gaussian_binomial(n, i, p) * (a_total_subspaces(n - i, p) - 1);
  return s;
}

/// Unreduced numerator and denominator of ρ(Tr(Sub(C_p^n))):
///   Σ_{i<n} Σ_{1≤j≤n−i} Σ_{k≤n−i−j} (n i)_p (n−i j)_p (n−i−j k)_p (a_{j+k} − a_k)
/// over (Σ_{i<n} (n i)_p (a_{n−i} − 1))².
inline CodensityParts rho_elem_abelian_parts(std::uint64_t p, std::uint64_t n) {
  if (p == 0 || n == 0) throw std::invalid_argument("rho_elem_abelian: p and n must be positive");
  std::vector<BigInt> a(n + 1);
  for (std::uint64_t d = 0; d <= n; ++d) a[d] = a_total_subspaces(d, p);
  BigInt num = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const BigInt gi = gaussian_binomial(n, i, p);
    for (std::uint64_t j = 1; j <= n - i; ++j) {
      const BigInt gj = gi * gaussian_binomial(n - i, j, p);
      for (std::uint64_t k = 0; k <= n - i - j; ++k)
        num += gj * gaussian_binomial(n - i - j, k, p) * (a[j + k] - a[k]);
    }
  }
  const BigInt j = elem_abelian_j(p, n);
  return {num, j * j};
}

inline ExactRational rho_elem_abelian(std::uint64_t p, std::uint64_t n) { return rho_elem_abelian_parts(p, n).value(); }

/// |J(Tr(L))| = |Rel*(L)//G| in closed form for the families
/// chain {n}, grid {n, m}, cyclic {n_1, ..., n_k}, boolean {k},
/// elem-abelian {p, n}.
inline BigInt j_count(std::string_view family, const std::vector<std::uint64_t>& params) {
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw std::invalid_argument("j_count " + std::string(family) + " takes " + std::to_string(k) + " parameter(s)");
  };
  if (family == "chain") {
    need(1);
    return binomial(params[0] + 1, 2);
  }
  if (family == "grid") {
    need(2);
    const BigInt n = params[0], m = params[1];
    return (m + 1) * (n + 1) * (m * n + 2 * m + 2 * n) / 4;
  }
  if (family == "cyclic") {
    if (params.empty()) throw std::invalid_argument("j_count cyclic needs exponents");
    BigInt t = 1, e = 1;
    for (auto n : params) {
      t *= binomial(n + 2, 2);
      e *= n + 1;
    }
    return t - e;
  }
  if (family == "boolean") {
    need(1);
    BigInt s3, s2;
    mpz_ui_pow_ui(s3.get_mpz_t(), 3, params[0]);
    mpz_ui_pow_ui(s2.get_mpz_t(), 2, params[0]);
    return s3 - s2;
  }
  if (family == "elem-abelian") {
    need(2);
    return elem_abelian_j(params[0], params[1]);
  }
  throw std::invalid_argument("unknown family '" + std::string(family) + "'");
}

namespace detail {

/// floor(3·2^(t−1)) for t = √s, via interval evaluation in MPFR at
/// increasing precision until both ends of the enclosure share a floor.
inline BigInt floor_three_halves_pow2_sqrt(const BigInt& s) {
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), s.get_mpz_t());
  if (root * root == s) {
    // t integer ≥ 1: 3·2^(t−1) exactly
    return 3 * pow2(root.get_ui() - 1);
  }
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    mpfr_t lo, hi;
    mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_z(lo, s.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi, s.get_mpz_t(), MPFR_RNDU);
    mpfr_sqrt(lo, lo, MPFR_RNDD);
    mpfr_sqrt(hi, hi, MPFR_RNDU);
    mpfr_exp2(lo, lo, MPFR_RNDD);
    mpfr_exp2(hi, hi, MPFR_RNDU);
    mpfr_mul_ui(lo, lo, 3, MPFR_RNDD);
    mpfr_mul_ui(hi, hi, 3, MPFR_RNDU);
    mpfr_div_ui(lo, lo, 2, MPFR_RNDD);
    mpfr_div_ui(hi, hi, 2, MPFR_RNDU);
    BigInt flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDD);
    mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (flo == fhi) return flo;
  }
}

}  // namespace detail

/// ⌊(3/2)·2^√(ones+1)⌋ − 1, an upper bound on the number of concepts of a
/// context with `ones` incidences.
inline BigInt schuett_bound(const BigInt& ones) {
  if (ones < 0) throw std::invalid_argument("schuett_bound: negative input");
  return detail::floor_three_halves_pow2_sqrt(ones + 1) - 1;
}

inline BigInt trivial_bound(std::uint64_t rows, std::uint64_t cols) { return pow2(std::min(rows, cols)); }

/// Σ_{i<k} binom(rows, i): bound for contexts free of the k-contranomial scale.
inline BigInt ncfree_bound(std::uint64_t k, std::uint64_t rows) {
  BigInt s = 0;
  for (std::uint64_t i = 0; i < k; ++i) s += binomial(rows, i);
  return s;
}

struct ContranomialResult {
  std::size_t k = 0;
  bool exact = true;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> rows;  // witness, row i paired with cols[i]
  std::vector<std::size_t> cols;
};

/// Largest k such that the context contains the contranomial scale ℕᶜ(k):
/// rows r_1..r_k and columns c_1..c_k with R(r_i, c_j) = 0 iff i = j.
///
/// The witness cells (r_i, c_i) form a clique among the 0-cells, where two
/// cells (r, c), (r', c') are compatible iff R(r, c') = R(r', c) = 1. Solved
/// as maximum clique by branch and bound with a greedy colouring bound. If
/// `budget` search nodes are used up, the best clique found so far is
/// returned with exact = false.
inline ContranomialResult contranomial_max_k(const FormalContext& ctx, std::uint64_t budget = 50'000'000) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t r = 0; r < ctx.rows(); ++r)
    for (std::size_t c = 0; c < ctx.cols(); ++c)
      if (!ctx.has(r, c)) cells.emplace_back(r, c);
  const std::size_t n = cells.size();
  std::vector<Bitset> adj(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto [r, c] = cells[i];
      const auto [r2, c2] = cells[j];
      if (ctx.has(r, c2) && ctx.has(r2, c)) {
        adj[i].set(j);
        adj[j].set(i);
      }
    }

  ContranomialResult res;
  std::vector<std::size_t> current, best;
  bool out_of_budget = false;

  // Greedy colouring of the candidate set; returns vertices in colour order
  // with their colour numbers (an upper bound on the clique size reachable).
  auto colour = [&](const Bitset& cand, std::vector<std::size_t>& order, std::vector<std::size_t>& bound) {
    order.clear();
    bound.clear();
    Bitset left = cand;
    std::size_t k = 0;
    while (left.any()) {
      ++k;
      Bitset q = left;
      while (q.any()) {
        const std::size_t v = q.first();
        q.reset(v);
        q.subtract(adj[v]);
        left.reset(v);
        order.push_back(v);
        bound.push_back(k);
      }
    }
  };

  std::function<void(Bitset)> expand = [&](Bitset cand) {
    if (out_of_budget) return;
    if (++res.nodes > budget) {
      out_of_budget = true;
      return;
    }
    std::vector<std::size_t> order, bound;
    colour(cand, order, bound);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + bound[i] <= best.size()) return;
      const std::size_t v = order[i];
      current.push_back(v);
      Bitset next = cand & adj[v];
      if (next.none()) {
        if (current.size() > best.size()) best = current;
      } else {
        expand(std::move(next));
      }
      current.pop_back();
      cand.reset(v);
      if (out_of_budget) return;
    }
  };
  if (n > 0) expand(Bitset::full(n));

  res.k = best.size();
  res.exact = !out_of_budget;
  std::sort(best.begin(), best.end());
  for (auto v : best) {
    res.rows.push_back(cells[v].first);
    res.cols.push_back(cells[v].second);
  }
  return res;
}

/// (2^k − 1)/6^k, the conjectured limit of ρ(Tr([n]^k)) as n → ∞.
inline ExactRational conjectured_limit(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("conjectured_limit: k must be positive");
  BigInt s6;
  mpz_ui_pow_ui(s6.get_mpz_t(), 6, k);
  return ExactRational(pow2(k) - 1, s6);
}

/// |ρ(Tr([n]^k)) − (2^k − 1)/6^k| ≤ tol, evaluated exactly.
inline bool limit_table_check(std::uint64_t k, std::uint64_t n, const ExactRational& tol) {
  const auto v = rho_cyclic(std::vector<std::uint64_t>(k, n));
  return (v - conjectured_limit(k)).abs() <= tol;
}

}  // namespace trfca
