#include <gtest/gtest.h>

#include <map>
#include <random>

#include "sicx/exactify.hpp"

using namespace sicx;

namespace {

const Fiducial& fiducial(i64 d, long digits) {
  static std::map<std::pair<i64, long>, Fiducial> cache;
  auto key = std::make_pair(d, digits);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, refine(seed_search(d, SeedOptions{"fz", 20, 7}), digits)).first;
  return it->second;
}

const FieldData& fields5() {
  static FieldData fd = prepare_fields(fiducial(5, 1000));
  return fd;
}

const ExactCertificate& cert(i64 d, long digits, int method) {
  static std::map<std::tuple<i64, long, int>, ExactCertificate> cache;
  auto key = std::make_tuple(d, digits, method);
  auto it = cache.find(key);
  if (it == cache.end()) {
    ExactifyOptions o;
    o.method = method;
    it = cache.emplace(key, exactify(fiducial(d, digits), o)).first;
  }
  return it->second;
}

std::vector<std::string> coefficient_minpolys(const std::vector<OrbitPolynomial>& polys) {
  std::vector<std::string> out;
  for (const auto& q : polys)
    for (const auto& c : q.exact) out.push_back(rational_polynomial_str(exact_minimal_polynomial(c)));
  return out;
}

}  // namespace

TEST(Exactify, SquarefreePart) {
  EXPECT_EQ(squarefree_part(12), 3);
  EXPECT_EQ(squarefree_part(5), 5);
  EXPECT_EQ(squarefree_part(32), 2);
  EXPECT_EQ(squarefree_part(36), 1);
  EXPECT_EQ(squarefree_part(2 * 3 * 3 * 7), 14);
  EXPECT_THROW(squarefree_part(0), std::invalid_argument);
}

TEST(Exactify, TypeAOrbitGroup) {
  MatGroup g = typea_orbit_group(21);
  EXPECT_EQ(g, h2_group(21));
  EXPECT_TRUE(g.is_closed());
  EXPECT_TRUE(g.is_abelian());
  EXPECT_TRUE(g.contains(fa_matrix(21)));
  EXPECT_THROW(typea_orbit_group(22), std::invalid_argument);
}

TEST(Exactify, OrbitPolynomialsD5) {
  const FieldData& fd = fields5();
  // C(Pi) is cyclic of order 24 and acts transitively on the 24 nonzero points.
  EXPECT_EQ(fd.S.order(), 3u);
  EXPECT_EQ(fd.C.order(), 24u);
  EXPECT_EQ(fd.orbits.size(), 2u);
  EXPECT_EQ(fd.polys.size(), fd.orbits.size());
  std::size_t zero = fd.polys[0].representative == IndexPair{0, 0} ? 0 : 1;
  const auto& q0 = fd.polys[zero];
  ASSERT_EQ(q0.degree(), 1u);
  EXPECT_TRUE((q0.exact[0] + AlgebraicNumber::rational(q0.exact[0].tower(), 1)).is_zero());
  EXPECT_EQ(fd.polys[1 - zero].degree(), 8u);
  PrecisionScope ps(fd.digits);
  for (const auto& q : fd.polys)
    for (const auto& c : q.coeffs) EXPECT_LT(c.im.log10_abs(), -(fd.digits - 30));
}

TEST(Exactify, PolynomialsAreMonicAndVanishOnValues) {
  const FieldData& fd = fields5();
  PrecisionScope ps(fd.digits);
  for (const auto& q : fd.polys) {
    ASSERT_EQ(q.coeffs.size(), q.degree() + 1);
    EXPECT_TRUE(abs(q.coeffs.back() - Complex(1L)).is_zero());
    for (const auto& v : q.values) {
      Complex acc(0L);
      for (std::size_t i = q.coeffs.size(); i-- > 0;) acc = acc * v + q.coeffs[i];
      EXPECT_LT(abs(acc).log10_abs(), -(fd.digits - 20));
    }
  }
}

TEST(Exactify, E0ContainsSqrt3) {
  const FieldData& fd = fields5();
  EXPECT_EQ(fd.e0->degree(), 2u);
  PrecisionScope ps(fd.digits);
  auto y = recognize(fd.e0, Complex(sqrt(Real(3L))));
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(*y * *y, AlgebraicNumber::rational(fd.e0, 3));
}

TEST(Exactify, LiftIsStableUnderPrecision) {
  const FieldData& a = fields5();
  FieldData b = prepare_fields(fiducial(5, 1500));
  EXPECT_EQ(coefficient_minpolys(a.polys), coefficient_minpolys(b.polys));
  EXPECT_EQ(a.e1->degree(), b.e1->degree());
}

TEST(Exactify, NearlyEqualValuesAreRefused) {
  PrecisionScope ps(200);
  OverlapTable t = overlaps(fiducial(5, 200));
  OverlapTable bad = t;
  // Perturb one orbit member by 10^-70: closer than 10^-50, farther than 10^-100.
  bad.at({1, 0}) = t.at({1, 0}) + Complex(pow10(-70));
  std::vector<Orbit> orbs{{IndexPair{1, 0}, IndexPair{4, 4}}};
  bad.at({4, 4}) = t.at({1, 0});
  EXPECT_THROW(build_orbit_polynomials(bad, orbs, false), PrecisionRefused);
}

TEST(Exactify, GaloisGroupMatchesQuotientD5) {
  const FieldData& fd = fields5();
  EXPECT_EQ(fd.e1->degree() / fd.e0->degree(), 8u);
  EXPECT_EQ(fd.C.order() / fd.H.order(), 8u);
  auto autos = automorphisms(fd.e1, fd.e0->height());
  EXPECT_EQ(autos.size(), 8u);
}

TEST(Exactify, Method2D5Verifies) {
  const ExactCertificate& c = cert(5, 1000, 2);
  EXPECT_EQ(c.method, 2);
  EXPECT_TRUE(c.contains_sqrt_d);
  EXPECT_EQ(c.sqrt_d, 3);
  VerificationReport r = verify_exact(c);
  EXPECT_TRUE(r.passed) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GE(c.match.runner_up - c.match.score, 20.0);
}

TEST(Exactify, ExactOverlapsMatchNumerical) {
  const ExactCertificate& c = cert(5, 1000, 2);
  PrecisionScope ps(1000);
  OverlapTable t = overlaps(fiducial(5, 1000));
  for (const auto& [p, x] : exact_overlaps(c)) EXPECT_LT(abs(x.embed() - t.at(p)).log10_abs(), -900);
}

TEST(Exactify, MethodsAgreeD5) {
  const ExactCertificate& a = cert(5, 1000, 1);
  const ExactCertificate& b = cert(5, 1000, 2);
  EXPECT_TRUE(verify_exact(a).passed);
  EXPECT_EQ(a.overlaps.size(), 25u);
  EXPECT_EQ(overlap_minpoly_multiset(a), overlap_minpoly_multiset(b));
}

TEST(Exactify, TransportIdentityAndComposition) {
  const ExactCertificate& c = cert(5, 1000, 2);
  auto table = exact_overlaps(c);
  const auto& autos = c.match.automorphisms;
  for (std::size_t i = 0; i < autos.size(); ++i)
    if (autos[i].is_identity()) {
      auto t = galois_transport(c, autos[i]);
      for (const auto& [p, x] : table) EXPECT_EQ(t.at(p), x);
    }
  // g(h(chi_p)) = chi_{G_g G_h p}
  MatGroup C = centralizer(c.stabilizer, dprime(5));
  MatGroup H(dprime(5), c.kernel);
  Quotient Q(C, H);
  for (std::size_t i = 0; i < autos.size(); ++i)
    for (std::size_t j = 0; j < autos.size(); ++j) {
      ModMatrix G = c.match.matrices[i] * c.match.matrices[j];
      for (const auto& [p, x] : table) EXPECT_EQ(autos[i].apply(autos[j].apply(x)), table.at(G.apply(p)));
      EXPECT_NO_THROW(galois_transport(c, autos[i].compose(autos[j])));
    }
}

TEST(Exactify, TamperedCertificateFails) {
  ExactCertificate c = cert(5, 1000, 2);
  auto it = std::next(c.overlaps.begin());
  QVec v = it->second.coeffs();
  v[0] += mpq_class(1, 1000000);
  it->second = AlgebraicNumber(c.tower, v);
  EXPECT_FALSE(verify_exact(c).passed);
  EXPECT_FALSE(verify_certified(c, 1000).passed);
}

TEST(Exactify, RandomTableFailsCertified) {
  ExactCertificate c = cert(5, 1000, 1);
  std::mt19937_64 rng(5);
  for (auto& [p, x] : c.overlaps) {
    QVec v(c.tower->degree());
    for (auto& q : v) q = mpq_class(static_cast<long>(rng() % 2001) - 1000, 997);
    x = AlgebraicNumber(c.tower, v);
  }
  VerificationReport r = verify_certified(c, 500);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(verify_exact(c).passed);
}

TEST(Exactify, CertifiedRadiusShrinks) {
  const ExactCertificate& c = cert(5, 1000, 2);
  VerificationReport a = verify_certified(c, 1200);
  VerificationReport b = verify_certified(c, 2000);
  EXPECT_TRUE(a.passed);
  EXPECT_TRUE(b.passed);
  EXPECT_LT(b.radius_log10, -1000);
  EXPECT_LT(b.radius_log10, a.radius_log10 - 500);
}

TEST(Exactify, JsonRoundTrip) {
  const ExactCertificate& c = cert(5, 1000, 2);
  VerificationReport r = verify_exact(c);
  std::string text = certificate_to_json(c, &r);
  ExactCertificate back = certificate_from_json(text);
  EXPECT_EQ(certificate_to_json(back, &r), text);
  EXPECT_EQ(report(back), report(c));
  EXPECT_TRUE(verify_exact(back).passed);
  EXPECT_THROW(certificate_from_json("{\"format\":\"other\"}"), std::invalid_argument);
}

TEST(Exactify, PipelineD4) {
  const ExactCertificate& c = cert(4, 600, 2);
  VerificationReport r = verify_exact(c);
  EXPECT_TRUE(r.passed) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_TRUE(c.contains_sqrt_d);
  EXPECT_EQ(c.sqrt_d, 5);
}

TEST(Exactify, PipelineD6StronglyCentred) {
  const ExactCertificate& c = cert(6, 800, 2);
  EXPECT_EQ(c.sqrt_d, 21);
  EXPECT_TRUE(c.contains_sqrt_d);
  VerificationReport r = verify_exact(c);
  EXPECT_TRUE(r.passed) << (r.failures.empty() ? "" : r.failures.front());
}

TEST(Exactify, TypeAMethod2IsRefused) {
  Fiducial f = fiducial(5, 200);
  f.symmetry = "fa";
  FieldData fd;
  fd.digits = 200;
  try {
    method2_exactify(f, fd);
    FAIL() << "expected ExactifyError";
  } catch (const ExactifyError& e) {
    EXPECT_EQ(e.stage, "method2");
  }
}
