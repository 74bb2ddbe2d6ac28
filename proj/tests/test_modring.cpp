#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sicx/modring.hpp"

using namespace sicx;

// ------------------------------------------------------------------------
// Brute-force oracles, deliberately naive.

static std::vector<ModMatrix> oracle_gl2(i64 m) {
  std::vector<ModMatrix> out;
  for (i64 a = 0; a < m; ++a)
    for (i64 b = 0; b < m; ++b)
      for (i64 c = 0; c < m; ++c)
        for (i64 d = 0; d < m; ++d) {
          i64 det = ((a * d - b * c) % m + m) % m;
          if (std::gcd(det, m) == 1) out.emplace_back(a, b, c, d, m);
        }
  return out;
}

static std::set<ModMatrix> oracle_centralizer(const ModMatrix& F) {
  std::set<ModMatrix> out;
  for (const auto& G : oracle_gl2(F.m))
    if (G * F == F * G) out.insert(G);
  return out;
}

// ------------------------------------------------------------------------

TEST(ModRing, DprimeExamples) {
  EXPECT_EQ(dprime(5), 5);
  EXPECT_EQ(dprime(4), 8);
  EXPECT_EQ(dprime(21), 21);
  EXPECT_THROW(dprime(3), std::invalid_argument);
}

TEST(ModRing, ZaunerExamples) {
  EXPECT_EQ(zauner_matrix(5), ModMatrix(0, 4, 1, 4, 5));
  EXPECT_EQ(zauner_matrix(4), ModMatrix(0, 3, 5, 3, 8));
  EXPECT_TRUE(zauner_matrix(5).pow(3).is_identity());
}

TEST(ModRing, ZaunerInvariantsUpTo50) {
  for (i64 d = 4; d <= 50; ++d) {
    ModMatrix F = zauner_matrix(d);
    EXPECT_EQ(F.det(), 1) << d;
    EXPECT_EQ(mod(F.trace(), d), d - 1) << d;
    if (d % 2)
      EXPECT_TRUE(F.pow(3).is_identity()) << d;
    else
      EXPECT_TRUE(F.pow(6).is_identity()) << d;
  }
}

TEST(ModRing, FaExamples) {
  EXPECT_EQ(fa_matrix(21), ModMatrix(1, 3, 6, 19, 21));
  ModMatrix f12 = fa_matrix(12);
  EXPECT_EQ(f12, ModMatrix(1, 15, 15, 10, 24));
  EXPECT_EQ(f12.det(), 1);
  EXPECT_EQ(fa_matrix(21).trace(), 20);
  EXPECT_THROW(fa_matrix(13), std::invalid_argument);
}

TEST(ModRing, ChiExamples) {
  auto [a, b] = chi_iso(fa_matrix(21), 21);
  EXPECT_EQ(a, ModMatrix(1, 2, 2, 5, 7));
  EXPECT_TRUE(b.is_identity());
  auto [i1, i2] = chi_iso(ModMatrix::identity(21), 21);
  EXPECT_TRUE(i1.is_identity());
  EXPECT_TRUE(i2.is_identity());
  ModMatrix F = fa_matrix(21);
  auto sq = chi_iso(F * F, 21);
  EXPECT_EQ(sq.first, a * a);
  EXPECT_EQ(sq.second, b * b);
  EXPECT_EQ(fa_bar(21), a);
}

TEST(ModRing, ChiInverseRoundTrip) {
  for (i64 d : {12, 21, 30}) {
    ChiSplit s = chi_split(d);
    std::mt19937_64 rng(d);
    for (int t = 0; t < 200; ++t) {
      ModMatrix M(rng() % s.dprime, rng() % s.dprime, rng() % s.dprime, rng() % s.dprime, s.dprime);
      auto [x, y] = chi_iso(M, d);
      EXPECT_EQ(chi_inverse(x, y, d), M);
    }
  }
}

TEST(ModRing, ChiHomomorphismProperty) {
  for (i64 d : {12, 21}) {
    ChiSplit s = chi_split(d);
    std::mt19937_64 rng(1000 + d);
    for (int t = 0; t < 1000; ++t) {
      ModMatrix A(rng() % s.dprime, rng() % s.dprime, rng() % s.dprime, rng() % s.dprime, s.dprime);
      ModMatrix B(rng() % s.dprime, rng() % s.dprime, rng() % s.dprime, rng() % s.dprime, s.dprime);
      auto ca = chi_iso(A, d), cb = chi_iso(B, d), cab = chi_iso(A * B, d);
      ASSERT_EQ(cab.first, ca.first * cb.first);
      ASSERT_EQ(cab.second, ca.second * cb.second);
    }
  }
}

TEST(ModRing, H2Examples) {
  EXPECT_EQ(h2_generator(21), ModMatrix(14, 15, 9, 20, 21));
  ModMatrix H2 = h2_generator(21);
  EXPECT_EQ(ModMatrix::identity(21) + 3 * H2, fa_matrix(21));
  MatGroup a = h2_group(21), b = linear_span_group(H2);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.is_abelian());
  EXPECT_TRUE(a.is_closed());
}

TEST(ModRing, H2BruteForce) {
  std::set<ModMatrix> brute;
  ModMatrix F = fa_matrix(21);
  for (i64 r = 0; r < 21; ++r)
    for (i64 s = 0; s < 21; ++s) {
      ModMatrix x(r + s * F.a, s * F.b, s * F.c, r + s * F.d, 21);
      if (std::gcd(x.det(), (i64)21) == 1) brute.insert(x);
    }
  MatGroup g = h2_group(21);
  EXPECT_EQ(std::set<ModMatrix>(g.elements().begin(), g.elements().end()), brute);
}

TEST(ModRing, HbarOrders) {
  EXPECT_EQ(hbar_group(4).order(), 4u);
  EXPECT_EQ(hbar_group(6).order(), 6u);
  EXPECT_EQ(hbar_group(8).order(), 8u);
}

TEST(ModRing, MaximalAbelianD21) {
  MaximalAbelian mx = maximal_abelian_subgroups(21);
  MatGroup h2 = h2_group(21);
  ModMatrix Fa = fa_matrix(21);
  for (const MatGroup* g : {&mx.h4, &mx.h6, &mx.h8}) {
    EXPECT_TRUE(g->contains(Fa));
    EXPECT_TRUE(g->is_abelian());
    EXPECT_TRUE(g->is_closed());
    EXPECT_TRUE(h2.subset_of(*g));
    EXPECT_GT(g->order(), h2.order());
  }
  EXPECT_FALSE(mx.h4 == mx.h6);
  EXPECT_FALSE(mx.h6 == mx.h8);
  EXPECT_FALSE(mx.h4 == mx.h8);
  MatGroup all = intersect(intersect(mx.h4, mx.h6), mx.h8);
  EXPECT_TRUE(h2.subset_of(all));
}

TEST(ModRing, CentralizerExamples) {
  EXPECT_EQ(centralizer(ModMatrix::identity(5), 5).order(), oracle_gl2(5).size());
  MatGroup c5 = centralizer(zauner_matrix(5), 5);
  EXPECT_EQ(c5.order(), 24u);
  EXPECT_TRUE(centralizer(zauner_matrix(4), 8).is_abelian());
}

TEST(ModRing, CentralizerMatchesOracle) {
  for (i64 d : {4, 5, 6, 7}) {
    ModMatrix F = zauner_matrix(d);
    MatGroup c = centralizer(F, dprime(d));
    std::set<ModMatrix> o = oracle_centralizer(F);
    EXPECT_EQ(std::set<ModMatrix>(c.elements().begin(), c.elements().end()), o) << d;
    // contains rI + sF; equal to it for the Zauner matrix
    EXPECT_EQ(linear_span_group(F), c) << d;
  }
}

TEST(ModRing, SymmetryImage) {
  ModMatrix F = zauner_matrix(5);
  EXPECT_EQ(symmetry_image(F), F);
  EXPECT_EQ(symmetry_image(j_matrix(5)), ModMatrix(-1, 0, 0, 1, 5));
  MatGroup s0 = MatGroup::generated(5, {F});
  for (const auto& x : s0.elements()) EXPECT_TRUE(s0.contains(symmetry_image(x)));
  EXPECT_THROW(symmetry_image(ModMatrix(2, 0, 0, 1, 5)), std::invalid_argument);
}

TEST(ModRing, OrbitExamples) {
  MatGroup triv(5, {ModMatrix::identity(5)});
  EXPECT_EQ(orbits(triv, 5).size(), 25u);
  MatGroup gl(5, gl2_elements(5));
  auto o = orbits(gl, 5);
  ASSERT_EQ(o.size(), 2u);
  EXPECT_EQ(o[0].size(), 1u);
  EXPECT_EQ(o[1].size(), 24u);
  std::size_t total = 0;
  for (const auto& orb : orbits(centralizer(zauner_matrix(5), 5), 5)) total += orb.size();
  EXPECT_EQ(total, 25u);
}

TEST(ModRing, OrbitPartitionProperty) {
  std::mt19937_64 rng(7);
  for (i64 d = 4; d <= 21; ++d) {
    i64 dp = dprime(d);
    for (int t = 0; t < 10; ++t) {
      std::vector<ModMatrix> gens;
      int ng = 1 + static_cast<int>(rng() % 2);
      while (static_cast<int>(gens.size()) < ng) {
        ModMatrix x(rng() % dp, rng() % dp, rng() % dp, rng() % dp, dp);
        if (x.invertible()) gens.push_back(x);
      }
      MatGroup G = MatGroup::generated(dp, gens);
      auto orb = orbits(G, dp);
      std::set<IndexPair> seen;
      std::size_t total = 0;
      for (const auto& o : orb) {
        std::set<IndexPair> os(o.begin(), o.end());
        for (const auto& p : o) {
          EXPECT_TRUE(seen.insert(p).second);
          for (const auto& g : gens) EXPECT_TRUE(os.count(g.apply(p)));
        }
        total += o.size();
        EXPECT_EQ(o.front(), *os.begin());
      }
      EXPECT_EQ(total, static_cast<std::size_t>(dp * dp));
    }
  }
}

TEST(ModRing, QuotientD5) {
  MatGroup C = centralizer(zauner_matrix(5), 5);
  MatGroup S = MatGroup::generated(5, {zauner_matrix(5)});
  Quotient q(C, S);
  EXPECT_EQ(q.order(), 8u);
  // cyclic of order 8
  std::size_t maxo = 0;
  for (std::size_t i = 0; i < q.order(); ++i) maxo = std::max(maxo, q.element_order(i));
  EXPECT_EQ(maxo, 8u);
}
