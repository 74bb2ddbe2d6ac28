#include <gtest/gtest.h>

#include <random>

#include "sicx/heisenberg.hpp"

using namespace sicx;

namespace {

double max_dev(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs().log10_abs(); }

// Tr(D_p A) by explicit matrices.
Complex trace_dp(const IndexPair& p, const CMatrix& A, i64 d) {
  return (displacement(p, d).matrix * A).trace();
}

// Finds c with A = c B; returns log10 of the residual.
double proportional(const CMatrix& A, const CMatrix& B, Complex* factor = nullptr) {
  std::size_t bi = 0, bj = 0;
  Real best(0L);
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j)
      if (abs(B(i, j)) > best) {
        best = abs(B(i, j));
        bi = i;
        bj = j;
      }
  Complex c = A(bi, bj) / B(bi, bj);
  if (factor) *factor = c;
  return max_dev(A, c * B);
}

CVector random_unit(i64 d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(d);
  for (auto& z : v) z = Complex(Real(g(rng)), Real(g(rng)));
  Real n = vector_norm(v);
  for (auto& z : v) z = z / n;
  return v;
}

ModMatrix random_sl(i64 m, std::mt19937_64& rng) {
  while (true) {
    ModMatrix x(rng() % m, rng() % m, rng() % m, rng() % m, m);
    if (x.det() == 1) return x;
  }
}

}  // namespace

TEST(Heisenberg, DisplacementExamples) {
  PrecisionScope ps(40);
  EXPECT_LT(max_dev(displacement({0, 0}, 5).matrix, CMatrix::identity(5)), -38);
  CMatrix X = displacement({1, 0}, 4).matrix;
  CMatrix shift(4, 4);
  for (int s = 0; s < 4; ++s) shift((s + 1) % 4, s) = Complex(1L);
  EXPECT_LT(max_dev(X, shift), -38);
}

TEST(Heisenberg, GroupLawAndUnitarity) {
  PrecisionScope ps(60);
  std::mt19937_64 rng(5);
  for (i64 d : {4, 5, 6, 7}) {
    i64 dp = dprime(d);
    TauPowers tw(d, working_bits());
    for (int t = 0; t < 20; ++t) {
      IndexPair p{(i64)(rng() % dp), (i64)(rng() % dp)}, q{(i64)(rng() % dp), (i64)(rng() % dp)};
      CMatrix Dp = displacement(p, d).matrix, Dq = displacement(q, d).matrix;
      CMatrix Dpq = displacement({p.p1 + q.p1, p.p2 + q.p2}, d).matrix;
      EXPECT_LT(max_dev(Dp * Dq, tw(symplectic_form(p, q)) * Dpq), -55);
      EXPECT_LT(max_dev(Dp.adjoint() * Dp, CMatrix::identity(d)), -55);
      // adjoint is D_{-p}
      EXPECT_LT(max_dev(Dp.adjoint(), displacement({-p.p1, -p.p2}, d).matrix), -55);
    }
  }
}

TEST(Heisenberg, ApplyMatchesMatrix) {
  PrecisionScope ps(50);
  std::mt19937_64 rng(9);
  i64 d = 6;
  TauPowers tw(d, working_bits());
  CVector v = random_unit(d, rng);
  for (i64 p1 = 0; p1 < 12; p1 += 5)
    for (i64 p2 = 0; p2 < 12; p2 += 3) {
      CVector a = apply_displacement({p1, p2}, v, tw);
      CVector b = displacement({p1, p2}, d).matrix * v;
      for (i64 r = 0; r < d; ++r) EXPECT_LT(abs(a[r] - b[r]).log10_abs(), -45);
    }
}

TEST(Heisenberg, SymplecticIdentityAndZauner) {
  PrecisionScope ps(60);
  CliffordOp u = symplectic_unitary(ModMatrix::identity(5), 5);
  EXPECT_LT(proportional(u.matrix, CMatrix::identity(5)), -55);
  CMatrix U = symplectic_unitary(zauner_matrix(5), 5).matrix;
  EXPECT_LT(proportional(U * U * U, CMatrix::identity(5)), -55);
  EXPECT_LT(max_dev(U.adjoint() * U, CMatrix::identity(5)), -55);
}

TEST(Heisenberg, ConjugationRelation) {
  PrecisionScope ps(60);
  std::mt19937_64 rng(13);
  for (i64 d : {4, 6, 7, 9}) {
    i64 dp = dprime(d);
    for (int t = 0; t < 6; ++t) {
      ModMatrix F = random_sl(dp, rng);
      CMatrix U = symplectic_unitary(F, d).matrix;
      EXPECT_LT(max_dev(U.adjoint() * U, CMatrix::identity(d)), -55) << F.str();
      IndexPair p{(i64)(rng() % dp), (i64)(rng() % dp)};
      CMatrix lhs = U * displacement(p, d).matrix * U.adjoint();
      CMatrix rhs = displacement(F.apply(p), d).matrix;
      EXPECT_LT(max_dev(lhs, rhs), -55) << F.str() << " d=" << d;
    }
  }
}

TEST(Heisenberg, SplitNeededForNonUnitCorner) {
  PrecisionScope ps(50);
  // neither corner entry is a unit mod 12
  ModMatrix F(2, 3, 1, 2, 12);
  ASSERT_EQ(F.det(), 1);
  CMatrix U = symplectic_unitary(F, 6).matrix;
  IndexPair p{1, 0}, q{0, 1};
  for (auto r : {p, q}) {
    CMatrix lhs = U * displacement(r, 6).matrix * U.adjoint();
    EXPECT_LT(max_dev(lhs, displacement(F.apply(r), 6).matrix), -45);
  }
}

TEST(Heisenberg, Antiunitary) {
  PrecisionScope ps(60);
  i64 d = 5;
  CliffordOp j = antiunitary_extend(j_matrix(5), d);
  EXPECT_TRUE(j.antiunitary);
  EXPECT_LT(proportional(j.matrix, CMatrix::identity(5)), -55);
  EXPECT_THROW(antiunitary_extend(zauner_matrix(5), d), std::invalid_argument);

  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    ModMatrix A = random_sl(5, rng) * j_matrix(5), B = random_sl(5, rng) * j_matrix(5);
    CliffordOp ua = antiunitary_extend(A, d), ub = antiunitary_extend(B, d);
    // composition of two antiunitaries: U_a conj(U_b conj(v)) = U_a conj(U_b) v
    CMatrix comp = ua.matrix * ub.matrix.conjugate();
    ASSERT_EQ((A * B).det(), 1);
    EXPECT_LT(proportional(comp, symplectic_unitary(A * B, d).matrix), -55);
    // action on displacements: U_a D_p^* U_a^dagger = D_{A p}
    IndexPair p{(i64)(rng() % 5), (i64)(rng() % 5)};
    CMatrix lhs = ua.matrix * displacement(p, d).matrix.conjugate() * ua.matrix.adjoint();
    EXPECT_LT(proportional(lhs, displacement(A.apply(p), d).matrix), -55);
  }
}

TEST(Heisenberg, OverlapBasics) {
  PrecisionScope ps(60);
  std::mt19937_64 rng(2);
  for (i64 d : {4, 5, 8}) {
    CVector v = random_unit(d, rng);
    OverlapTable t = overlaps(v, d);
    EXPECT_LT(abs(t.at(0, 0) - Complex(1L)).log10_abs(), -55);
    Real s(0L);
    for (i64 p1 = 0; p1 < d; ++p1)
      for (i64 p2 = 0; p2 < d; ++p2) s += norm(t.at(p1, p2));
    EXPECT_LT(abs(s - Real(d)).log10_abs(), -55);
    // orientation: chi_p = Tr(D_p Pi)
    CMatrix Pi(d, d);
    for (i64 r = 0; r < d; ++r)
      for (i64 c = 0; c < d; ++c) Pi(r, c) = v[r] * conj(v[c]);
    EXPECT_LT(abs(t.at(1, 2) - trace_dp({1, 2}, Pi, d)).log10_abs(), -55);
  }
}

TEST(Heisenberg, ReconstructRoundTrip) {
  PrecisionScope ps(80);
  std::mt19937_64 rng(4);
  for (i64 d : {4, 5, 6}) {
    // identity operator
    OverlapTable id(d, 80);
    for (i64 p1 = 0; p1 < dprime(d); ++p1)
      for (i64 p2 = 0; p2 < dprime(d); ++p2) id.at(p1, p2) = trace_dp({p1, p2}, CMatrix::identity(d), d);
    EXPECT_LT(max_dev(reconstruct_operator(id), CMatrix::identity(d)), -75);

    CVector v = random_unit(d, rng);
    OverlapTable t = overlaps(v, d);
    CMatrix Pi = reconstruct_operator(t);
    OverlapTable t2 = overlaps(v, d);
    for (i64 p1 = 0; p1 < dprime(d); ++p1)
      for (i64 p2 = 0; p2 < dprime(d); ++p2)
        EXPECT_LT(abs(trace_dp({p1, p2}, Pi, d) - t2.at(p1, p2)).log10_abs(), -(80 - 15));
    EXPECT_LT(abs(Pi.trace() - Complex(1L)).log10_abs(), -75);
    EXPECT_LT(max_dev(Pi * Pi, Pi), -75);
  }
}
