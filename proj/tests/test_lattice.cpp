#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "sicx/lattice.hpp"

using namespace sicx;

namespace {

IntRow ints(std::initializer_list<long> v) {
  IntRow r;
  for (long x : v) r.emplace_back(x);
  return r;
}

// 2 Re(z^{1/3}) for the principal cube root.
Real twice_re_cbrt(const Complex& z) { return nth_root(z, 3).re * 2L; }

// Root of an integer polynomial: double eigenvalue, then Newton at the
// working precision.
Complex polished_root(const IntRow& c, int which) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  const double lead = c.back().get_d();
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i].get_d() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  auto ev = es.eigenvalues()[which % n];
  Complex z(Real(ev.real()), Real(ev.imag()));
  for (int it = 0; it < 40; ++it) {
    Complex p(Real(0L), Real(0L)), dp(Real(0L), Real(0L));
    for (int i = n; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + Complex(Real(c[i]));
    }
    z -= p / dp;
  }
  return z;
}

// Eisenstein at 2, hence irreducible over Q.
IntRow eisenstein(int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(-4, 4);
  IntRow c(degree + 1);
  c[degree] = 2 * (rng() % 3) + 1;
  for (int i = 1; i < degree; ++i) c[i] = 2 * u(rng);
  c[0] = 2 * (2 * u(rng) + 1);
  return c;
}

bool is_reduced(const std::vector<IntRow>& b, double delta) {
  const std::size_t n = b.size(), dim = b[0].size();
  PrecisionScope ps(200);
  std::vector<std::vector<Real>> bs(n, std::vector<Real>(dim));
  std::vector<Real> B(n);
  std::vector<std::vector<Real>> mu(n, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < dim; ++l) bs[i][l] = Real(b[i][l]);
    for (std::size_t j = 0; j < i; ++j) {
      Real s(0L);
      for (std::size_t l = 0; l < dim; ++l) s += Real(b[i][l]) * bs[j][l];
      mu[i][j] = s / B[j];
      for (std::size_t l = 0; l < dim; ++l) bs[i][l] -= mu[i][j] * bs[j][l];
    }
    B[i] = Real(0L);
    for (std::size_t l = 0; l < dim; ++l) B[i] += bs[i][l] * bs[i][l];
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (abs(mu[i][j]) > Real(0.52)) return false;
    if (B[i] < (Real(delta) - mu[i][i - 1] * mu[i][i - 1]) * B[i - 1] * Real(0.999)) return false;
  }
  return true;
}

mpz_class det3(const std::vector<IntRow>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST(Lattice, LllReducesAndKeepsLattice) {
  std::vector<IntRow> b{ints({1, 1, 1}), ints({-1, 0, 2}), ints({3, 5, 6})};
  mpz_class before = abs(det3(b));
  lll_reduce(b, 0);
  EXPECT_EQ(abs(det3(b)), before);
  EXPECT_TRUE(is_reduced(b, 0.99));

  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    std::vector<IntRow> r(6, IntRow(8));
    for (auto& row : r)
      for (auto& v : row) v = static_cast<long>(rng() % 2000001) - 1000000;
    lll_reduce(r, 0);
    EXPECT_TRUE(is_reduced(r, 0.99));
  }
}

TEST(Lattice, CubicGeneratorPolynomials) {
  PrecisionScope ps(100);
  Real i15 = sqrt(Real(15L));
  struct Case {
    Complex z;
    IntRow expect;
  } cases[] = {
      {Complex(Real(10L), Real(30L)), ints({-20, -30, 0, 1})},
      {Complex(Real(38L * 13L), i15 * (38L * 3L)), ints({-988, -228, 0, 1})},
      {Complex(Real(7L), i15), ints({-14, -12, 0, 1})},
  };
  for (const auto& c : cases) {
    auto p = minimal_polynomial(twice_re_cbrt(c.z), 6);
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->c, c.expect) << p->str();
  }
}

TEST(Lattice, MinimalPolynomialSmallExamples) {
  PrecisionScope ps(60);
  auto p = minimal_polynomial(Real(3L), 4);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->c, ints({-3, 1}));
  EXPECT_EQ(p->str(), "x - 3");
  auto q = minimal_polynomial(sqrt(Real(2L)) + sqrt(Real(3L)), 6);
  ASSERT_TRUE(q);
  EXPECT_EQ(q->str(), "x^4 - 10*x^2 + 1");
  // primitive cube root of unity is not real
  auto w = minimal_polynomial(omega_root(3), 4);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->c, ints({1, 1, 1}));
}

TEST(Lattice, IntegerRelationExamples) {
  PrecisionScope ps(50);
  Real r2 = sqrt(Real(2L));
  auto a = integer_relation(std::vector<Real>{r2, Real(1L), r2}, 3);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->coefficients, ints({1, 0, 1}));
  EXPECT_EQ(a->precision_used, 25);

  Real phi = (Real(1L) + sqrt(Real(5L))) / 2L;
  auto b = integer_relation(std::vector<Real>{phi, Real(1L), phi}, 3);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->coefficients, ints({1, 0, 1}));
  auto c = integer_relation(std::vector<Real>{phi * phi, Real(1L), phi}, 3);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->coefficients, ints({1, 1, 1}));
}

TEST(Lattice, PiHasNoSmallRelation) {
  PrecisionScope ps(100);
  EXPECT_FALSE(integer_relation(std::vector<Real>{pi(), Real(1L)}, 10));
  PrecisionScope ps2(400);
  EXPECT_FALSE(minimal_polynomial(pi(), 12));
}

TEST(Lattice, RefusesInsufficientPrecision) {
  PrecisionScope ps(40);
  std::vector<Real> x{pi(), Real(1L), sqrt(Real(2L)), sqrt(Real(3L))};
  EXPECT_THROW(integer_relation(x, 30), PrecisionRefused);
  EXPECT_NO_THROW(integer_relation(x, 3));
}

TEST(Lattice, ExpressInBasisExamples) {
  PrecisionScope ps(60);
  Real s5 = sqrt(Real(5L));
  auto q = express_in_basis((Real(1L) + s5) / 2L, {Real(1L), s5});
  ASSERT_TRUE(q);
  EXPECT_EQ((*q)[0], mpq_class(1, 2));
  EXPECT_EQ((*q)[1], mpq_class(1, 2));
  auto u = express_in_basis(s5, {Real(1L), s5, sqrt(Real(7L))});
  ASSERT_TRUE(u);
  EXPECT_EQ((*u)[0], 0);
  EXPECT_EQ((*u)[1], 1);
  EXPECT_EQ((*u)[2], 0);
  EXPECT_THROW(express_in_basis(Real(3L), {Real(1L), s5, s5 * 2L}), DegenerateRelation);
  EXPECT_FALSE(express_in_basis(pi(), {Real(1L), s5}));
}

TEST(Lattice, BiquadraticRoundTrip) {
  PrecisionScope ps(120);
  std::mt19937_64 rng(23);
  const Real s3 = sqrt(Real(3L)), s5 = sqrt(Real(5L));
  std::vector<Real> basis{Real(1L), s3, s5, s3 * s5};
  for (int t = 0; t < 10; ++t) {
    std::vector<mpq_class> q(4);
    Real a(0L);
    for (int j = 0; j < 4; ++j) {
      q[j] = mpq_class(static_cast<long>(rng() % 201) - 100, static_cast<long>(rng() % 100) + 1);
      q[j].canonicalize();
      a += Real(q[j]) * basis[j];
    }
    mpz_class den = 1;
    for (const auto& v : q) den = lcm(den, v.get_den());
    auto got = express_in_basis(a, basis, 100 * 100 * 100 * 100);
    ASSERT_TRUE(got);
    EXPECT_EQ(*got, q);
    if (den > 1) EXPECT_FALSE(express_in_basis(a, basis, den - 1));
  }
}

TEST(Lattice, SoundnessOnConstructedAlgebraicNumbers) {
  std::mt19937_64 rng(31);
  int false_accepts = 0, misses = 0;
  for (int t = 0; t < 100; ++t) {
    const int degree = 1 + t % 12;
    IntRow c = eisenstein(degree, rng);
    const long r = 160;
    Complex fine;
    {
      PrecisionScope ps(2 * r);
      fine = polished_root(c, static_cast<int>(rng() % 12));
    }
    Complex a = fine;
    a.set_bits(digits_to_bits(r));
    auto p = minimal_polynomial(a, 12);
    if (!p) {
      ++misses;
      continue;
    }
    // re-check at twice the precision
    Complex v = p->eval(fine);
    PrecisionScope ps(2 * r);
    Real scale(0L), pw(1L);
    for (const auto& k : p->c) {
      scale += abs(Real(k)) * pw;
      pw *= abs(fine);
    }
    bool sound = abs(v) < pow10(-static_cast<long>(0.7 * 2 * r)) * max(scale, Real(1L));
    if (!sound || p->c != make_int_polynomial(c).c) ++false_accepts;
    EXPECT_TRUE(sound) << p->str();
    EXPECT_EQ(p->degree(), degree) << p->str();
  }
  EXPECT_EQ(false_accepts, 0);
  EXPECT_EQ(misses, 0);
}

TEST(Lattice, RelationCandidateForScoring) {
  PrecisionScope ps(200);
  std::vector<Complex> x{Complex(pi()), Complex(Real(1L)), Complex(sqrt(Real(2L)))};
  RelationOptions opt;
  opt.early_exit = false;
  RelationCandidate c = find_relation(x, opt);
  EXPECT_FALSE(c.accepted);
  // the best vector of an unrelated triple has norm about 10^{rs/3}
  EXPECT_GT(c.log10_norm, 20.0);
  std::vector<Complex> y{Complex(sqrt(Real(2L)) * 3L + Real(1L)), Complex(Real(1L)), Complex(sqrt(Real(2L)))};
  RelationCandidate d = find_relation(y, opt);
  EXPECT_TRUE(d.accepted);
  EXPECT_LT(d.log10_norm, 2.0);
}
