#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "trfca/concepts.hpp"
#include "trfca/formulas.hpp"
#include "trfca/spec_parse.hpp"

using namespace trfca;

namespace {

ExactRational q(long n, long d) { return ExactRational(BigInt(n), BigInt(d)); }

// Codensity of a product of chains straight from the lattice: zeros are
// counted as Σ_{x≤y≤z} (|[x,z]| − |[y,z]|) over pairs squared.
ExactRational rho_product_literal(const std::vector<std::size_t>& ns) {
  const auto L = build_grid(ns);
  auto interval = [&](Element a, Element b) { return (L.up(a) & L.down(b)).count(); };
  BigInt zeros = 0, pairs = 0;
  for (Element x = 0; x < L.size(); ++x)
    for (auto y : L.up(x).indices()) {
      if (y != x) ++pairs;
      for (auto z : L.up(static_cast<Element>(y)).indices())
        zeros += static_cast<long>(interval(x, static_cast<Element>(z))) -
                 static_cast<long>(interval(static_cast<Element>(y), static_cast<Element>(z)));
    }
  return ExactRational(zeros, pairs * pairs);
}

double log_big(const BigInt& v) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

// Exhaustive contranomial search for tiny contexts.
std::size_t brute_contranomial(const FormalContext& ctx) {
  const std::size_t n = ctx.rows(), m = ctx.cols();
  std::size_t best = 0;
  for (std::uint32_t rm = 1; rm < (1u << n); ++rm)
    for (std::uint32_t cm = 1; cm < (1u << m); ++cm) {
      const auto k = static_cast<std::size_t>(__builtin_popcount(rm));
      if (static_cast<std::size_t>(__builtin_popcount(cm)) != k || k <= best) continue;
      std::vector<std::size_t> rs, cs;
      for (std::size_t i = 0; i < n; ++i)
        if (rm >> i & 1) rs.push_back(i);
      for (std::size_t j = 0; j < m; ++j)
        if (cm >> j & 1) cs.push_back(j);
      do {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i)
          for (std::size_t j = 0; j < k && ok; ++j) ok = ctx.has(rs[i], cs[j]) == (i != j);
        if (ok) {
          best = k;
          break;
        }
      } while (std::next_permutation(cs.begin(), cs.end()));
    }
  return best;
}

FormalContext contranomial_scale(std::size_t k) {
  std::vector<std::vector<int>> m(k, std::vector<int>(k, 1));
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 0;
  return FormalContext::from_rows(m, k);
}

}  // namespace

TEST(Gaussian, Values) {
  EXPECT_EQ(gaussian_binomial(5, 0, 3), 1);
  EXPECT_EQ(gaussian_binomial(2, 1, 2), 3);
  EXPECT_EQ(gaussian_binomial(4, 2, 2), 35);
  EXPECT_EQ(gaussian_binomial(2, 3, 2), 0);
  EXPECT_EQ(gaussian_binomial(6, 3, 1), 20);
  EXPECT_THROW(gaussian_binomial(2, 1, 0), std::invalid_argument);
}

TEST(Gaussian, TotalsMatchSubspaceLattices) {
  EXPECT_EQ(a_total_subspaces(0, 2), 1);
  EXPECT_EQ(a_total_subspaces(1, 5), 2);
  for (std::uint32_t p : {2U, 3U})
    for (std::uint32_t n : {1U, 2U, 3U})
      EXPECT_EQ(a_total_subspaces(n, p), static_cast<long>(build_subspace_lattice(p, n).size())) << p << "," << n;
  EXPECT_EQ(a_total_subspaces(4, 2), 67);
}

TEST(Gaussian, CountsSubspacesByDimension) {
  // dimension of a subspace = length of a maximal chain from the bottom
  const auto L = build_subspace_lattice(2, 4);
  std::vector<std::size_t> by_dim(5, 0);
  for (Element x = 0; x < L.size(); ++x) {
    const auto below = L.down(x).count();  // 2^d-point spaces have a_d subspaces
    for (std::size_t d = 0; d <= 4; ++d)
      if (a_total_subspaces(d, 2) == static_cast<long>(below)) ++by_dim[d];
  }
  for (std::size_t d = 0; d <= 4; ++d) EXPECT_EQ(gaussian_binomial(4, d, 2), static_cast<long>(by_dim[d]));
}

TEST(Codensity, ChainForms) {
  EXPECT_EQ(rho_chain(1), ExactRational(1));
  EXPECT_EQ(rho_chain(2), q(5, 9));
  for (std::uint64_t n = 1; n <= 30; ++n) {
    const BigInt p = binomial(n + 1, 2);
    EXPECT_EQ(rho_chain(n), ExactRational(binomial(n + 3, 4), p * p)) << n;
  }
  EXPECT_LT((rho_chain(1'000'000) - q(1, 6)).abs(), q(1, 100000));
  EXPECT_THROW(rho_chain(0), std::invalid_argument);
}

TEST(Codensity, Grid) {
  EXPECT_EQ(rho_grid(1, 1), q(11, 25));
  EXPECT_EQ(rho_grid(1, 1), rho_boolean(2));
  for (std::uint64_t n = 1; n <= 10; ++n) EXPECT_EQ(rho_grid(n, 0), rho_chain(n));
  for (std::uint64_t n = 0; n <= 6; ++n)
    for (std::uint64_t m = 0; m <= 6; ++m)
      if (n + m) {
        EXPECT_EQ(rho_grid(n, m), rho_grid(m, n));
      }
  EXPECT_LT((rho_grid(2, 1'000'000) - q(25, 216)).abs(), q(1, 100000));
  EXPECT_THROW(rho_grid(0, 0), std::invalid_argument);
}

TEST(Codensity, CyclicSpecializations) {
  for (std::uint64_t n = 1; n <= 10; ++n) EXPECT_EQ(rho_cyclic({n}), rho_chain(n));
  for (std::uint64_t n = 1; n <= 5; ++n)
    for (std::uint64_t m = 1; m <= 5; ++m) EXPECT_EQ(rho_cyclic({n, m}), rho_grid(n, m));
  EXPECT_EQ(rho_cyclic({1, 1, 1}), q(91, 361));
  EXPECT_EQ(rho_cyclic({1, 1, 1}), rho_boolean(3));
  EXPECT_EQ(rho_cyclic({0, 3}), rho_chain(3));
  EXPECT_THROW(rho_cyclic({}), std::invalid_argument);
  EXPECT_THROW(rho_cyclic({0, 0}), std::invalid_argument);
}

TEST(Codensity, CyclicMatchesLiteralSum) {
  for (std::size_t a = 0; a <= 3; ++a)
    for (std::size_t b = 0; b <= 3; ++b) {
      if (a + b) {
        EXPECT_EQ(rho_cyclic({a, b}), rho_product_literal({a, b})) << a << "," << b;
      }
      for (std::size_t c = 0; c <= 3; ++c)
        if (a + b + c) {
          EXPECT_EQ(rho_cyclic({a, b, c}), rho_product_literal({a, b, c})) << a << b << c;
        }
    }
}

TEST(Codensity, Boolean) {
  EXPECT_EQ(rho_boolean(1), ExactRational(1));
  EXPECT_EQ(rho_boolean(2), q(11, 25));
  EXPECT_LT(rho_boolean(60), q(1, 1000));
  for (std::uint64_t k = 1; k <= 5; ++k) EXPECT_EQ(rho_boolean(k), rho_cyclic(std::vector<std::uint64_t>(k, 1)));
}

TEST(Codensity, ElementaryAbelian) {
  for (std::uint64_t p : {1, 2, 3, 5, 7}) EXPECT_EQ(rho_elem_abelian(p, 1), ExactRational(1));
  EXPECT_EQ(rho_elem_abelian(2, 2), q(19, 49));
  for (std::uint64_t n = 1; n <= 5; ++n) EXPECT_EQ(rho_elem_abelian(1, n), rho_boolean(n));
}

TEST(Codensity, ElementaryAbelianDenominatorCountsPairs) {
  for (std::uint32_t p : {2U, 3U})
    for (std::uint32_t n : {2U, 3U}) {
      const auto L = build_subspace_lattice(p, n);
      long pairs = 0;
      for (Element x = 0; x < L.size(); ++x)
        for (Element y = 0; y < L.size(); ++y) pairs += L.lt(x, y);
      EXPECT_EQ(elem_abelian_j(p, n), pairs);
      EXPECT_EQ(rho_elem_abelian_parts(p, n).denominator, BigInt(pairs) * pairs);
    }
}

TEST(Codensity, ElementaryAbelianSmallRankPolynomials) {
  for (long p = 2; p <= 7; ++p) {
    const BigInt P = p;
    // rank 2: the closed form is (p²+5p+5)/(2p+3)²; the polynomial
    // (1+3p+p²)/(2p+1)² is the same function one step later, at p−1
    EXPECT_EQ(rho_elem_abelian(p, 2), ExactRational(P * P + 5 * P + 5, (2 * P + 3) * (2 * P + 3)));
    EXPECT_EQ(rho_elem_abelian(p - 1, 2), ExactRational(1 + 3 * P + P * P, (2 * P + 1) * (2 * P + 1)));
    const BigInt d3 = 6 + 6 * P + 6 * P * P + P * P * P;
    EXPECT_EQ(rho_elem_abelian(p, 3),
              ExactRational(15 + 24 * P + 30 * P * P + 16 * P * P * P + 6 * P * P * P * P, d3 * d3));
    BigInt pw[9];
    pw[0] = 1;
    for (int i = 1; i < 9; ++i) pw[i] = pw[i - 1] * P;
    const BigInt n4 = 35 + 70 * pw[1] + 124 * pw[2] + 150 * pw[3] + 135 * pw[4] + 95 * pw[5] + 46 * pw[6] +
                      15 * pw[7] + pw[8];
    const BigInt d4 = 10 + 12 * pw[1] + 17 * pw[2] + 15 * pw[3] + 8 * pw[4] + 3 * pw[5];
    EXPECT_EQ(rho_elem_abelian(p, 4), ExactRational(n4, d4 * d4));
  }
}

TEST(Codensity, ElementaryAbelianDegrees) {
  for (std::uint64_t n = 1; n <= 4; ++n) {
    const auto lo = rho_elem_abelian_parts(1000, n), hi = rho_elem_abelian_parts(1'000'000, n);
    const double span = std::log(1e6) - std::log(1e3);
    const double num_slope = (log_big(hi.numerator) - log_big(lo.numerator)) / span;
    const double den_slope = (log_big(hi.denominator) - log_big(lo.denominator)) / span;
    EXPECT_NEAR(num_slope, static_cast<double>(n * n / 2), 0.1) << n;
    EXPECT_NEAR(den_slope, static_cast<double>(2 * (n * n / 3)), 0.1) << n;
    const auto huge = rho_elem_abelian_parts(1'000'000'000'000, n);
    EXPECT_NEAR(log_big(huge.numerator) / std::log(1e12), static_cast<double>(n * n / 2), 0.1) << n;
    EXPECT_NEAR(log_big(huge.denominator) / std::log(1e12), static_cast<double>(2 * (n * n / 3)), 0.1) << n;
  }
}

TEST(Codensity, AgreesWithContexts) {
  for (std::size_t n = 1; n <= 6; ++n)
    EXPECT_EQ(codensity(build_reduced_context(build_chain(n))), rho_chain(n)) << n;
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 0; m <= 3; ++m)
      if (n + m) {
        EXPECT_EQ(codensity(build_reduced_context(build_grid({n, m}))), rho_grid(n, m)) << n << "," << m;
      }
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_EQ(codensity(build_reduced_context(build_boolean(k))), rho_boolean(k));
  for (auto [p, n] : {std::pair{2U, 2U}, std::pair{3U, 2U}})
    EXPECT_EQ(codensity(build_reduced_context(build_subspace_lattice(p, n))), rho_elem_abelian(p, n));
  EXPECT_EQ(codensity(build_reduced_context(subgroup_lattice(parse_group_spec("cyclic:12")))), rho_cyclic({2, 1}));
}

TEST(JCount, Values) {
  EXPECT_EQ(j_count("chain", {21}), 231);
  EXPECT_EQ(j_count("grid", {7, 7}), 1232);
  EXPECT_EQ(j_count("boolean", {4}), 65);
  EXPECT_EQ(j_count("elem-abelian", {2, 2}), 7);
  EXPECT_EQ(j_count("cyclic", {2, 1}), static_cast<long>(nontrivial_relation_orbits(build_grid({2, 1})).size()));
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t m = 1; m <= 4; ++m)
      EXPECT_EQ(j_count("grid", {n, m}), static_cast<long>(nontrivial_relation_orbits(build_grid({n, m})).size()));
  EXPECT_THROW(j_count("torus", {1}), std::invalid_argument);
  EXPECT_THROW(j_count("grid", {1}), std::invalid_argument);
}

TEST(Bounds, SchuettSmallValues) {
  EXPECT_EQ(schuett_bound(0), 2);
  EXPECT_EQ(schuett_bound(3), 5);  // √4 = 2 exactly: 3·2 − 1
  EXPECT_EQ(schuett_bound(881), BigInt("1306850812"));
  EXPECT_THROW(schuett_bound(-1), std::invalid_argument);
}

TEST(Bounds, SchuettMatchesLongDouble) {
  // long double keeps about 19 digits, enough while the value stays below 1e12
  for (long s = 0; s <= 1500; ++s) {
    const long double v = 1.5L * std::exp2(std::sqrt(static_cast<long double>(s + 1)));
    const long double fl = std::floor(v);
    if (v - fl < 1e-4L || fl + 1 - v < 1e-4L) continue;
    BigInt expect;
    mpz_set_str(expect.get_mpz_t(), std::to_string(static_cast<unsigned long long>(fl)).c_str(), 10);
    EXPECT_EQ(schuett_bound(s), expect - 1) << s;
  }
}

TEST(Bounds, CountBelowBounds) {
  std::vector<GLattice> lattices;
  for (const char* spec : {"chain:1", "chain:2", "chain:4", "chain:6", "boolean:2", "boolean:3", "grid:2,2",
                           "subspaces:2,2", "subspaces:3,2"})
    lattices.push_back(parse_lattice_spec(spec));
  for (const char* spec : {"S:3", "D:4", "Q:8", "A:4", "S:4"}) lattices.push_back(subgroup_lattice(parse_group_spec(spec)));
  for (const auto& L : lattices) {
    const auto ctx = build_reduced_context(L);
    const BigInt count = static_cast<unsigned long>(count_concepts(ctx));
    EXPECT_LE(count, schuett_bound(static_cast<unsigned long>(ctx.ones())));
    EXPECT_LE(count, trivial_bound(ctx.rows(), ctx.cols()));
    const auto k = contranomial_max_k(ctx);
    ASSERT_TRUE(k.exact);
    EXPECT_LE(count, ncfree_bound(k.k + 1, ctx.rows()));
  }
  EXPECT_EQ(schuett_bound(0), 2);  // tight on chain(1)
}

TEST(Bounds, TrivialAndNcFree) {
  EXPECT_EQ(trivial_bound(3, 5), 8);
  EXPECT_EQ(ncfree_bound(2, 3), 4);
  EXPECT_EQ(ncfree_bound(3, 3), 7);
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto ctx = build_reduced_context(build_grid({n, m}));
      EXPECT_EQ(trivial_bound(ctx.rows(), ctx.cols()), pow2((m + 1) * (n + 1) * (m * n + 2 * m + 2 * n) / 4));
    }
}

TEST(Contranomial, KnownValues) {
  EXPECT_EQ(contranomial_max_k(build_reduced_context(build_chain(2))).k, 2u);
  EXPECT_EQ(contranomial_max_k(build_reduced_context(build_boolean(2))).k, 2u);
  EXPECT_EQ(contranomial_max_k(FormalContext::from_rows({{1, 1}, {1, 1}})).k, 0u);
  EXPECT_EQ(contranomial_max_k(FormalContext::from_rows({{0}})).k, 1u);
  for (std::size_t k = 1; k <= 7; ++k) EXPECT_EQ(contranomial_max_k(contranomial_scale(k)).k, k);
}

TEST(Contranomial, WitnessIsAScale) {
  const auto ctx = build_reduced_context(subgroup_lattice(parse_group_spec("D:4")));
  const auto r = contranomial_max_k(ctx);
  ASSERT_TRUE(r.exact);
  ASSERT_EQ(r.rows.size(), r.k);
  for (std::size_t i = 0; i < r.k; ++i)
    for (std::size_t j = 0; j < r.k; ++j) EXPECT_EQ(ctx.has(r.rows[i], r.cols[j]), i != j);
}

TEST(Contranomial, MatchesExhaustiveSearch) {
  std::mt19937 rng(3);
  std::bernoulli_distribution bit(0.6);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::vector<int>> m(6, std::vector<int>(6));
    for (auto& row : m)
      for (auto& v : row) v = bit(rng);
    const auto ctx = FormalContext::from_rows(m, 6);
    EXPECT_EQ(contranomial_max_k(ctx).k, brute_contranomial(ctx)) << t;
  }
  EXPECT_EQ(contranomial_max_k(build_reduced_context(build_chain(2))).k,
            brute_contranomial(build_reduced_context(build_chain(2))));
}

TEST(Contranomial, BudgetFlagsInexact) {
  const auto r = contranomial_max_k(build_reduced_context(subgroup_lattice(parse_group_spec("S:4"))), 5);
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.k, 9u);
}

TEST(Limits, ConjectureTable) {
  EXPECT_EQ(conjectured_limit(1), q(1, 6));
  EXPECT_EQ(conjectured_limit(2), q(1, 12));
  EXPECT_EQ(conjectured_limit(3), q(7, 216));
  EXPECT_EQ(conjectured_limit(4), q(5, 432));
  EXPECT_EQ(conjectured_limit(5), q(31, 7776));
  for (std::uint64_t k = 1; k <= 5; ++k) EXPECT_TRUE(limit_table_check(k, 10'000, q(1, 1000))) << k;
  EXPECT_FALSE(limit_table_check(2, 2, q(1, 1000)));
}
