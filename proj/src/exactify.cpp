#include "sicx/exactify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sicx {

using json = nlohmann::json;

namespace {

std::vector<Complex> expand_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex(1L)};
  for (const auto& s : roots) {
    std::vector<Complex> n(c.size() + 1);
    for (auto& z : n) z = Complex(0L);
    for (std::size_t i = 0; i < c.size(); ++i) {
      n[i + 1] += c[i];
      n[i] -= s * c[i];
    }
    c = std::move(n);
  }
  return c;
}

bool in_dz2(const IndexPair& p, i64 d) { return mod(p.p1, d) == 0 && mod(p.p2, d) == 0; }

std::size_t orbit_index_of(const std::vector<Orbit>& orbs, const IndexPair& p) {
  for (std::size_t i = 0; i < orbs.size(); ++i)
    if (std::binary_search(orbs[i].begin(), orbs[i].end(), p)) return i;
  throw std::logic_error("index not in any orbit");
}

AlgebraicNumber unit_element(const TowerPtr& t, std::size_t flat) {
  QVec c(t->degree());
  c[flat] = 1;
  return AlgebraicNumber(t, c);
}

std::vector<std::size_t> closure(const std::vector<std::vector<std::size_t>>& mul, std::vector<std::size_t> set) {
  std::set<std::size_t> s(set.begin(), set.end());
  bool grown = true;
  while (grown) {
    grown = false;
    std::vector<std::size_t> cur(s.begin(), s.end());
    for (auto a : cur)
      for (auto b : cur)
        if (s.insert(mul[a][b]).second) grown = true;
  }
  return {s.begin(), s.end()};
}

std::size_t element_order(const std::vector<std::vector<std::size_t>>& mul, std::size_t id, std::size_t x) {
  std::size_t k = 1, y = x;
  while (y != id) {
    y = mul[x][y];
    ++k;
  }
  return k;
}

/// All bijective homomorphisms between two finite groups given by
/// multiplication tables, as image vectors.
std::vector<std::vector<std::size_t>> isomorphisms(const std::vector<std::vector<std::size_t>>& a, std::size_t ida,
                                                   const std::vector<std::vector<std::size_t>>& b, std::size_t idb) {
  const std::size_t n = a.size();
  std::vector<std::size_t> gens, sub{ida};
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(sub.begin(), sub.end(), i)) {
      gens.push_back(i);
      sub.push_back(i);
      sub = closure(a, sub);
    }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> img(gens.size());
  std::function<void(std::size_t)> rec = [&](std::size_t g) {
    if (g == gens.size()) {
      std::vector<std::size_t> phi(n, n);
      phi[ida] = idb;
      std::vector<std::size_t> queue{ida};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t x = queue[qi];
        for (std::size_t k = 0; k < gens.size(); ++k) {
          std::size_t y = a[gens[k]][x];
          std::size_t v = b[img[k]][phi[x]];
          if (phi[y] == n) {
            phi[y] = v;
            queue.push_back(y);
          } else if (phi[y] != v) {
            return;
          }
        }
      }
      std::vector<bool> seen(n, false);
      for (auto v : phi) {
        if (v == n || seen[v]) return;
        seen[v] = true;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (phi[a[i][j]] != b[phi[i]][phi[j]]) return;
      out.push_back(phi);
      return;
    }
    const std::size_t ord = element_order(a, ida, gens[g]);
    for (std::size_t c = 0; c < n; ++c)
      if (element_order(b, idb, c) == ord) {
        img[g] = c;
        rec(g + 1);
      }
  };
  rec(0);
  return out;
}

AlgebraicNumber combine(const TowerPtr& t, std::size_t D0, const std::vector<QVec>& s) {
  QVec c(t->degree());
  for (std::size_t k = 0; k < s.size(); ++k)
    for (std::size_t a = 0; a < D0 && a < s[k].size(); ++a) c[a + k * D0] = s[k][a];
  return AlgebraicNumber(t, c);
}

std::vector<ModMatrix> stabilizer_matrices(const Fiducial& fid, std::vector<std::string>& log) {
  const i64 dp = dprime(fid.d);
  std::vector<ModMatrix> Fs;
  bool displaced = false, order3 = false;
  for (const auto& e : detect_stabilizer(fid)) {
    if (e.p == IndexPair{0, 0}) {
      Fs.push_back(e.F);
      if (mod(e.F.trace() + 1, fid.d) == 0 && e.F.det() == 1 % dp) order3 = true;
    } else {
      displaced = true;
    }
  }
  if (displaced) log.push_back("stabilizer has elements with a displacement; only p = 0 elements form S");
  log.push_back(std::string("canonical order-3 element in S: ") + (order3 ? "yes" : "no"));
  return Fs;
}

}  // namespace

long squarefree_part(long n) {
  if (n <= 0) throw std::invalid_argument("squarefree_part: n must be positive");
  long out = 1;
  for (long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2) out *= p;
  }
  return out * n;
}

MatGroup typea_orbit_group(i64 d) {
  if (mod(d, 9) != 3) throw std::invalid_argument("typea_orbit_group: d must be 3 mod 9");
  return h2_group(d);
}

std::vector<OrbitPolynomial> build_orbit_polynomials(const OverlapTable& table, const std::vector<Orbit>& orbs,
                                                     bool cube) {
  if (table.digits() < 100) throw std::invalid_argument("build_orbit_polynomials: table needs at least 100 digits");
  PrecisionScope ps(table.digits());
  const Real eq = pow10(-(table.digits() / 2));
  const Real amb = pow10(-(table.digits() / 4));
  std::vector<OrbitPolynomial> out;
  for (std::size_t o = 0; o < orbs.size(); ++o) {
    OrbitPolynomial q;
    q.orbit = o;
    q.representative = orbs[o].front();
    q.cubed = cube;
    for (const auto& p : orbs[o]) {
      Complex v = table.at(p);
      if (cube) v = v * v * v;
      bool same = false;
      for (const auto& u : q.values) {
        Real dist = abs(v - u);
        if (dist < eq) {
          same = true;
          break;
        }
        if (dist < amb)
          throw PrecisionRefused("build_orbit_polynomials: two overlap values are nearly equal; increase the digits");
      }
      if (!same) q.values.push_back(v);
    }
    q.coeffs = expand_roots(q.values);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<OrbitPolynomial> build_orbit_polynomials(const OverlapTable& table, const MatGroup& group, bool cube) {
  return build_orbit_polynomials(table, orbits(group, table.dp()), cube);
}

LiftResult lift_coefficients(std::vector<OrbitPolynomial> polys, long digits, std::size_t max_field_degree) {
  PrecisionScope ps(digits);
  TowerPtr t = FieldTower::rationals(digits);
  LiftResult res;
  res.max_imag_log10 = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(polys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return polys[a].degree() < polys[b].degree(); });
  std::map<std::pair<std::size_t, std::size_t>, AlgebraicNumber> found;
  int generators = 0;
  for (std::size_t oi : order) {
    const auto& q = polys[oi];
    const std::size_t n = q.degree();
    for (std::size_t i = n; i-- > 0;) {
      const Complex& c = q.coeffs[i];
      double li = c.im.log10_abs();
      if (std::isfinite(li)) res.max_imag_log10 = std::max(res.max_imag_log10, li);
      std::optional<AlgebraicNumber> y = recognize(t, c);
      if (!y) {
        std::size_t room = max_field_degree / t->degree();
        std::optional<std::vector<AlgebraicNumber>> mp;
        if (room >= 2) mp = minimal_polynomial_over(t, c, static_cast<int>(room));
        if (!mp)
          throw ExactifyError("lift", "coefficient " + std::to_string(i) + " of orbit polynomial " +
                                          std::to_string(q.orbit) + " not recognized; increase --digits");
        if (mp->size() == 2) {
          y = -(*mp)[0];
        } else {
          t = adjoin(t, "e" + std::to_string(++generators), *mp, c);
          y = AlgebraicNumber::generator(t, t->height());
        }
      }
      found.emplace(std::make_pair(oi, i), *y);
    }
  }
  for (std::size_t oi = 0; oi < polys.size(); ++oi) {
    auto& q = polys[oi];
    q.exact.clear();
    for (std::size_t i = 0; i < q.degree(); ++i) q.exact.push_back(found.at({oi, i}).lift(t));
    q.exact.push_back(AlgebraicNumber::rational(t, 1));
  }
  res.e0 = t;
  res.polys = std::move(polys);
  return res;
}

FieldData prepare_fields(const Fiducial& fid, const ExactifyOptions& opt) {
  FieldData fd;
  fd.d = fid.d;
  fd.digits = fid.digits;
  const i64 dp = dprime(fid.d);
  PrecisionScope ps(fid.digits);
  fd.table = overlaps(fid);
  std::vector<ModMatrix> Fs = stabilizer_matrices(fid, fd.log);
  if (Fs.empty()) throw ExactifyError("symmetry", "no displacement-free stabilizer found");
  fd.S = MatGroup(dp, Fs);
  if (!fd.S.is_closed()) throw ExactifyError("symmetry", "stabilizer matrices do not form a group");
  fd.C = centralizer(Fs, dp);
  if (!fd.S.subset_of(fd.C)) throw ExactifyError("symmetry", "stabilizer is not Abelian");
  {
    const Real tol = pow10(-(fid.digits / 2));
    std::vector<ModMatrix> ker;
    for (const auto& G : fd.C.elements()) {
      bool fixes = true;
      for (i64 p1 = 0; p1 < dp && fixes; ++p1)
        for (i64 p2 = 0; p2 < dp && fixes; ++p2) {
          IndexPair p{p1, p2};
          if (abs(fd.table.at(G.apply(p)) - fd.table.at(p)) > tol) fixes = false;
        }
      if (fixes) ker.push_back(G);
    }
    fd.H = MatGroup(dp, ker);
    if (!fd.H.is_closed()) throw ExactifyError("symmetry", "overlap-fixing matrices do not form a group");
    if (!(fd.H == fd.S))
      fd.log.push_back("kernel H of the action on overlaps differs from S (|H| = " + std::to_string(fd.H.order()) +
                       ", |S| = " + std::to_string(fd.S.order()) + ")");
  }
  const bool typea = fid.symmetry == "fa";
  fd.orbits = orbits(typea ? typea_orbit_group(fid.d) : fd.C, dp);
  fd.polys = build_orbit_polynomials(fd.table, fd.orbits, false);

  LiftResult lr = lift_coefficients(fd.polys, fid.digits, opt.max_e0_degree);
  fd.polys = std::move(lr.polys);
  fd.e0 = lr.e0;
  {
    std::ostringstream os;
    os << "largest imaginary part of orbit polynomial coefficients: 10^" << std::lround(lr.max_imag_log10);
    fd.log.push_back(os.str());
  }

  const std::size_t n_expected = fd.C.order() / fd.H.order();
  TowerPtr t = fd.e0;
  std::vector<std::size_t> order(fd.polys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fd.polys[a].degree() < fd.polys[b].degree(); });
  int gen = 0;
  for (std::size_t oi : order) {
    const auto& q = fd.polys[oi];
    if (q.degree() < 2) continue;
    if (t->degree() / fd.e0->degree() >= n_expected) break;
    if (t->degree() >= opt.max_e1_degree) break;
    std::vector<AlgebraicNumber> ex;
    for (const auto& a : q.exact) ex.push_back(a.lift(t));
    const Complex& chi = q.values.front();
    auto y = recognize(t, chi);
    if (y && eval_poly(ex, *y).is_zero()) continue;
    const std::string tag = "x" + std::to_string(++gen);
    try {
      t = adjoin(t, tag, ex, chi);
    } catch (const NotIrreducible&) {
      auto mp = minimal_polynomial_over(t, chi, static_cast<int>(q.degree()) - 1);
      if (!mp) throw ExactifyError("extension", "factor of orbit polynomial not found; increase --digits");
      t = adjoin(t, tag, *mp, chi);
    }
  }
  fd.e1 = t;
  std::ostringstream os;
  os << "[E1:E0] = " << t->degree() / fd.e0->degree() << ", |C/H| = " << n_expected;
  fd.log.push_back(os.str());
  return fd;
}

ExactCertificate method2_exactify(const Fiducial& fid, const FieldData& fd, const ExactifyOptions& opt) {
  if (fid.symmetry == "fa")
    throw ExactifyError("method2", "type-a fiducials need the maximal Abelian subgroup M, which is not supported");
  PrecisionScope ps(fd.digits);
  const TowerPtr& T = fd.e1;
  const std::size_t h0 = fd.e0->height(), D0 = fd.e0->degree();
  const std::size_t n = T->degree() / D0;
  std::vector<EmbeddingAutomorphism> autos = automorphisms(T, h0);
  Quotient Q(fd.C, fd.H);
  if (autos.size() != n) throw ExactifyError("galois", "E1/E0 is not Galois (" + std::to_string(autos.size()) + " automorphisms)");
  if (Q.order() != n)
    throw ExactifyError("galois", "|Gal(E1/E0)| = " + std::to_string(n) + " differs from |C/H| = " +
                                      std::to_string(Q.order()));

  std::vector<std::vector<std::size_t>> gmul(n, std::vector<std::size_t>(n)), qmul(n, std::vector<std::size_t>(n));
  std::size_t gid = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (autos[i].is_identity()) gid = i;
    for (std::size_t j = 0; j < n; ++j) {
      EmbeddingAutomorphism c = autos[i].compose(autos[j]);
      auto it = std::find(autos.begin(), autos.end(), c);
      if (it == autos.end()) throw ExactifyError("galois", "automorphisms not closed under composition");
      gmul[i][j] = static_cast<std::size_t>(it - autos.begin());
      qmul[i][j] = Q.mul(i, j);
    }
  }
  auto perms = isomorphisms(gmul, gid, qmul, Q.identity());
  if (perms.empty()) throw ExactifyError("galois", "Gal(E1/E0) and C/H are not isomorphic");

  // B_{jk} = g_j(b_k), b_k the power-product basis of E1 over E0
  CMatrix B(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    AlgebraicNumber bk = unit_element(T, k * D0);
    for (std::size_t j = 0; j < n; ++j) B(j, k) = autos[j].apply_numeric(bk);
  }
  CMatrix Binv = inverse(B);
  std::vector<Complex> ebasis = basis_embeddings(*fd.e0, h0);

  auto solve_for = [&](const std::vector<std::size_t>& f, const IndexPair& p) {
    CVector V(n);
    for (std::size_t j = 0; j < n; ++j) V[j] = fd.table.at(Q.reps()[f[j]].apply(p));
    return Binv * V;
  };

  std::vector<std::size_t> scoring;
  std::size_t best_deg = 0;
  for (std::size_t o = 0; o < fd.polys.size(); ++o) best_deg = std::max(best_deg, fd.polys[o].degree());
  for (std::size_t o = 0; o < fd.polys.size() && scoring.size() < 3; ++o)
    if (fd.polys[o].degree() == best_deg) scoring.push_back(o);

  RelationOptions ro;
  ro.allow_low_precision = true;
  std::vector<double> scores;
  for (const auto& f : perms) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t o : scoring) {
      CVector s = solve_for(f, fd.polys[o].representative);
      for (const auto& sk : s) {
        std::vector<Complex> x{sk};
        x.insert(x.end(), ebasis.begin(), ebasis.end());
        RelationCandidate rc = find_relation(x, ro);
        worst = std::max(worst, rc.accepted ? rc.log10_norm : std::max(rc.log10_norm, 0.3 * fd.digits));
      }
    }
    scores.push_back(worst);
  }
  std::size_t win = static_cast<std::size_t>(std::min_element(scores.begin(), scores.end()) - scores.begin());
  double runner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (i != win) runner = std::min(runner, scores[i]);
  const double sep = opt.separation_log10 >= 0 ? opt.separation_log10 : 20.0 * static_cast<double>(fd.digits) / 1000.0;
  if (perms.size() > 1 && runner - scores[win] < sep) {
    std::ostringstream os;
    os << "no permutation separates: best 10^" << scores[win] << ", runner-up 10^" << runner
       << "; increase --digits";
    throw ExactifyError("galois-match", os.str());
  }
  const auto& f = perms[win];

  ExactCertificate cert;
  cert.d = fd.d;
  cert.digits = fd.digits;
  cert.method = 2;
  cert.symmetry = fid.symmetry;
  cert.tower = T;
  cert.e0_level = h0;
  cert.stabilizer = fd.S.elements();
  cert.kernel = fd.H.elements();
  cert.match.automorphisms = autos;
  for (std::size_t j = 0; j < n; ++j) cert.match.matrices.push_back(Q.reps()[f[j]]);
  cert.match.score = scores[win];
  cert.match.runner_up = runner;
  cert.match.candidates = perms.size();
  cert.log = fd.log;

  const Real tol = pow10(-(fd.digits / 2));
  for (std::size_t o = 0; o < fd.orbits.size(); ++o) {
    const IndexPair p = fd.polys[o].representative;
    CVector s = solve_for(f, p);
    std::vector<QVec> coords;
    for (const auto& sk : s) {
      auto q = express_in_basis(sk, ebasis);
      if (!q) throw ExactifyError("method2", "component of S not in E0 for orbit " + std::to_string(o) + "; increase --digits");
      coords.push_back(*q);
    }
    AlgebraicNumber chi = combine(T, D0, coords);
    if (abs(chi.embed() - fd.table.at(p)) > tol)
      throw ExactifyError("method2", "exact overlap disagrees with the numerical one at orbit " + std::to_string(o));
    std::vector<AlgebraicNumber> ex;
    for (const auto& a : fd.polys[o].exact) ex.push_back(a.lift(T));
    if (!eval_poly(ex, chi).is_zero())
      throw ExactifyError("method2", "exact overlap is not a root of its orbit polynomial at orbit " + std::to_string(o));
    cert.overlaps.emplace(p, chi);
  }
  return cert;
}

ExactCertificate method1_exactify(const Fiducial& fid, const FieldData& fd) {
  PrecisionScope ps(fd.digits);
  const TowerPtr& T = fd.e1;
  ExactCertificate cert;
  cert.d = fd.d;
  cert.digits = fd.digits;
  cert.method = 1;
  cert.symmetry = fid.symmetry;
  cert.tower = T;
  cert.e0_level = fd.e0->height();
  cert.stabilizer = fd.S.elements();
  cert.kernel = fd.H.elements();
  cert.log = fd.log;
  const i64 dp = dprime(fd.d);
  const Real eq = pow10(-(fd.digits / 2));
  std::vector<std::pair<Complex, AlgebraicNumber>> known;
  for (i64 p1 = 0; p1 < dp; ++p1)
    for (i64 p2 = 0; p2 < dp; ++p2) {
      IndexPair p{p1, p2};
      const Complex& v = fd.table.at(p);
      std::optional<AlgebraicNumber> hit;
      for (const auto& kv : known)
        if (abs(kv.first - v) < eq) {
          hit = kv.second;
          break;
        }
      if (!hit) {
        hit = recognize(T, v);
        if (!hit) throw ExactifyError("method1", "overlap not recognized in E1; increase --digits");
        const auto& q = fd.polys[orbit_index_of(fd.orbits, p)];
        std::vector<AlgebraicNumber> ex;
        for (const auto& a : q.exact) ex.push_back(a.lift(T));
        if (!eval_poly(ex, *hit).is_zero())
          throw ExactifyError("method1", "recognized overlap is not a root of its orbit polynomial");
        known.emplace_back(v, *hit);
      }
      cert.overlaps.emplace(p, *hit);
    }
  return cert;
}

ExactCertificate exactify(const Fiducial& fid, const ExactifyOptions& opt) {
  Fiducial f = fid;
  IndexPair shift{0, 0};
  if (fid.d % 3 == 0 && !opt.assume_centred) {
    CentringResult r = strongly_centre(fid);
    f = r.fid;
    shift = r.shift;
  }
  FieldData fd = prepare_fields(f, opt);
  ExactCertificate cert = opt.method == 1 ? method1_exactify(f, fd) : method2_exactify(f, fd, opt);
  cert.shift = shift;
  cert.sqrt_d = squarefree_part((fid.d - 3) * (fid.d + 1));
  {
    PrecisionScope ps(fd.digits);
    auto y = recognize(fd.e0, Complex(sqrt(Real(cert.sqrt_d))));
    cert.contains_sqrt_d = y && (*y * *y) == AlgebraicNumber::rational(fd.e0, cert.sqrt_d);
  }
  cert.log.push_back(std::string("E0 contains sqrt(") + std::to_string(cert.sqrt_d) +
                     "): " + (cert.contains_sqrt_d ? "yes" : "no (nonconforming)"));
  return cert;
}

// ------------------------------------------------------------ exact tables

std::map<IndexPair, AlgebraicNumber> exact_overlaps(const ExactCertificate& cert) {
  const i64 dp = dprime(cert.d);
  std::map<IndexPair, AlgebraicNumber> table;
  if (cert.match.automorphisms.empty()) {
    table = cert.overlaps;
  } else {
    MatGroup C = centralizer(cert.stabilizer, dp);
    MatGroup H(dp, cert.kernel);
    if (!H.is_closed() || !H.subset_of(C)) throw CertificateInvalid("kernel is not a subgroup of C(Pi)");
    Quotient Q(C, H);
    std::vector<std::size_t> aut_of_coset(Q.order(), Q.order());
    for (std::size_t j = 0; j < cert.match.matrices.size(); ++j) {
      const ModMatrix& G = cert.match.matrices[j];
      if (!C.contains(G)) throw CertificateInvalid("matched matrix " + G.str() + " is not in C(Pi)");
      aut_of_coset[Q.coset_of(G)] = j;
    }
    for (auto j : aut_of_coset)
      if (j == Q.order()) throw CertificateInvalid("Galois match does not cover C(Pi)/H");
    for (const auto& [p, chi] : cert.overlaps)
      for (const auto& G : C.elements()) {
        IndexPair q = G.apply(p);
        AlgebraicNumber v = cert.match.automorphisms[aut_of_coset[Q.coset_of(G)]].apply(chi);
        auto it = table.find(q);
        if (it == table.end())
          table.emplace(q, v);
        else if (!(it->second == v))
          throw CertificateInvalid("inconsistent transported overlap at (" + std::to_string(q.p1) + "," +
                                   std::to_string(q.p2) + ")");
      }
  }
  if (table.size() != static_cast<std::size_t>(dp * dp)) throw CertificateInvalid("overlap table does not cover (Z/d'Z)^2");
  return table;
}

std::map<IndexPair, AlgebraicNumber> galois_transport(const ExactCertificate& cert, const EmbeddingAutomorphism& g) {
  std::map<IndexPair, AlgebraicNumber> table = exact_overlaps(cert);
  std::size_t j = cert.match.automorphisms.size();
  for (std::size_t i = 0; i < cert.match.automorphisms.size(); ++i)
    if (cert.match.automorphisms[i] == g) j = i;
  if (j == cert.match.automorphisms.size()) throw CertificateInvalid("automorphism is not part of the Galois match");
  const ModMatrix& G = cert.match.matrices[j];
  std::map<IndexPair, AlgebraicNumber> out;
  for (const auto& [p, chi] : table) {
    IndexPair q = G.apply(p);
    AlgebraicNumber v = g.apply(chi);
    if (!(table.at(q) == v))
      throw CertificateInvalid("transport mismatch at (" + std::to_string(q.p1) + "," + std::to_string(q.p2) + ")");
    out.emplace(q, v);
  }
  return out;
}

// ------------------------------------------------------------ verification

namespace {

/// tau as an exact element, adjoining it when the tower lacks it.
std::pair<TowerPtr, AlgebraicNumber> exact_tau(const TowerPtr& t, i64 d) {
  PrecisionScope ps(t->digits());
  Complex tau = tau_root(d);
  auto y = recognize(t, tau);
  if (y && pow(*y, 2 * d) == AlgebraicNumber::rational(t, 1)) return {t, *y};
  auto mp = minimal_polynomial_over(t, tau, static_cast<int>(2 * d));
  if (!mp) throw CertificateInvalid("tau could not be adjoined to the tower");
  TowerPtr t2 = adjoin(t, "tau", *mp, tau);
  return {t2, AlgebraicNumber::generator(t2, t2->height())};
}

}  // namespace

VerificationReport verify_exact(const ExactCertificate& cert) {
  VerificationReport rep;
  rep.mode = "exact";
  const i64 d = cert.d, dp = dprime(d);
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
  std::map<IndexPair, AlgebraicNumber> table;
  try {
    table = exact_overlaps(cert);
    rep.checks.push_back("overlap table covers all " + std::to_string(dp * dp) + " indices");
    for (const auto& g : cert.match.automorphisms) galois_transport(cert, g);
    if (!cert.match.automorphisms.empty())
      rep.checks.push_back("Galois transport consistent for " + std::to_string(cert.match.automorphisms.size()) +
                           " automorphisms");
  } catch (const CertificateInvalid& e) {
    fail(e.what());
    return rep;
  }
  TowerPtr T;
  AlgebraicNumber tau;
  EmbeddingAutomorphism conj_op;
  try {
    std::tie(T, tau) = exact_tau(cert.tower, d);
    conj_op = conjugation_op(T);
  } catch (const std::exception& e) {
    fail(std::string("no exact conjugation available: ") + e.what());
    return rep;
  }
  rep.checks.push_back(T == cert.tower ? "tau lies in the certificate field" : "tau adjoined to the certificate field");
  for (auto& kv : table) kv.second = kv.second.lift(T);
  const AlgebraicNumber one = AlgebraicNumber::rational(T, 1);
  auto chi = [&](i64 a, i64 b) -> const AlgebraicNumber& { return table.at(IndexPair{mod(a, dp), mod(b, dp)}); };
  std::vector<AlgebraicNumber> tp;
  for (i64 k = 0; k < 2 * d; ++k) tp.push_back(pow(tau, k));
  auto taup = [&](i64 k) -> const AlgebraicNumber& { return tp[static_cast<std::size_t>(mod(k, 2 * d))]; };

  std::size_t conditions = 0;
  for (const auto& [p, x] : table) {
    if (in_dz2(p, d)) {
      if (!(x == taup(p.p1 * p.p2))) fail("overlap at (" + std::to_string(p.p1) + "," + std::to_string(p.p2) + ") is not the trivial value");
      continue;
    }
    AlgebraicNumber r = mpq_class(d + 1) * (x * conj_op.apply(x)) - one;
    ++conditions;
    if (!r.is_zero())
      fail("nonzero residue (d+1)|chi|^2 - 1 at (" + std::to_string(p.p1) + "," + std::to_string(p.p2) + ")");
  }
  if (!(chi(0, 0) == one)) fail("chi_0 != 1");
  rep.checks.push_back(std::to_string(conditions) + " overlap conditions (d+1)|chi_p|^2 = 1 checked exactly");

  // Pi_{jk} = (1/d) sum_{p2} chi_{-(p1,p2)} tau^{p1 p2 + 2 k p2}, p1 = j - k
  const std::size_t n = static_cast<std::size_t>(d);
  std::vector<AlgebraicNumber> Pi(n * n, AlgebraicNumber::rational(T, 0));
  for (i64 j = 0; j < d; ++j)
    for (i64 k = 0; k < d; ++k) {
      i64 p1 = mod(j - k, d);
      AlgebraicNumber acc = AlgebraicNumber::rational(T, 0);
      for (i64 p2 = 0; p2 < d; ++p2) acc = acc + chi(-p1, -p2) * taup(p1 * p2 + 2 * k * p2);
      Pi[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k)] = mpq_class(1, d) * acc;
    }
  AlgebraicNumber tr = AlgebraicNumber::rational(T, 0);
  for (std::size_t j = 0; j < n; ++j) tr = tr + Pi[j * n + j];
  if (!(tr == one)) fail("Tr Pi != 1");
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (!(conj_op.apply(Pi[k * n + j]) == Pi[j * n + k])) {
        fail("Pi is not Hermitian");
        j = n;
        break;
      }
  bool idem = true;
  for (std::size_t j = 0; j < n && idem; ++j)
    for (std::size_t k = 0; k < n && idem; ++k) {
      AlgebraicNumber s = AlgebraicNumber::rational(T, 0);
      for (std::size_t m = 0; m < n; ++m) s = s + Pi[j * n + m] * Pi[m * n + k];
      if (!(s == Pi[j * n + k])) idem = false;
    }
  if (!idem) fail("Pi^2 != Pi");
  rep.checks.push_back("Pi reconstructed; Tr Pi = 1, Pi Hermitian, Pi^2 = Pi checked exactly");
  rep.passed = rep.failures.empty();
  return rep;
}

namespace {

struct Ball {
  Complex mid;
  Real rad;
};

Real ulp_bound(const Complex& z) { return abs(z) * pow(Real(2L), Real(-(working_bits() - 2))); }

Ball badd(const Ball& a, const Ball& b) {
  Ball r{a.mid + b.mid, a.rad + b.rad};
  r.rad += ulp_bound(r.mid);
  return r;
}

Ball bmul(const Ball& a, const Ball& b) {
  Ball r{a.mid * b.mid, abs(a.mid) * b.rad + abs(b.mid) * a.rad + a.rad * b.rad};
  r.rad += ulp_bound(r.mid);
  return r;
}

}  // namespace

VerificationReport verify_certified(const ExactCertificate& cert, long digits) {
  VerificationReport rep;
  rep.mode = "certified";
  const i64 d = cert.d;
  std::map<IndexPair, AlgebraicNumber> table;
  try {
    table = exact_overlaps(cert);
  } catch (const CertificateInvalid& e) {
    rep.failures.push_back(e.what());
    return rep;
  }
  const TowerPtr& T = cert.tower;
  std::vector<Complex> r1 = refined_roots(*T, digits + 20);
  std::vector<Complex> r2 = refined_roots(*T, digits + 50);
  PrecisionScope ps(digits + 20);
  std::vector<Ball> gen;
  for (std::size_t l = 0; l < r1.size(); ++l)
    gen.push_back(Ball{r1[l], abs(r1[l] - r2[l]) * 4L + pow10(-(digits + 18))});
  // basis balls in flat order
  std::vector<Ball> basis{Ball{Complex(1L), Real(0L)}};
  for (std::size_t l = 1; l <= T->height(); ++l) {
    const std::size_t deg = T->level(l).degree, B = basis.size();
    std::vector<Ball> nb(deg * B);
    Ball pw{Complex(1L), Real(0L)};
    for (std::size_t e = 0; e < deg; ++e) {
      for (std::size_t i = 0; i < B; ++i) nb[e * B + i] = bmul(basis[i], pw);
      pw = bmul(pw, gen[l - 1]);
    }
    basis = std::move(nb);
  }
  Real worst(0L);
  bool excluded = false;
  const Real limit = pow10(-(digits / 2));
  Complex tau = tau_root(d);
  for (const auto& [p, x] : table) {
    Ball v{Complex(0L), Real(0L)};
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
      if (x.coeffs()[i] == 0) continue;
      Real q(x.coeffs()[i]);
      v = badd(v, bmul(basis[i], Ball{Complex(q), ulp_bound(Complex(q))}));
    }
    Ball res;
    if (in_dz2(p, d)) {
      res = badd(v, Ball{-pow(tau, mod(p.p1 * p.p2, 2 * d)), pow10(-(digits + 18))});
    } else {
      Ball c{conj(v.mid), v.rad};
      Ball m = bmul(v, c);
      res = Ball{m.mid * Complex(d + 1) - Complex(1L), m.rad * (d + 1)};
      res.rad += ulp_bound(res.mid) + ulp_bound(Complex(1L));
    }
    worst = max(worst, res.rad);
    if (abs(res.mid) > res.rad) {
      excluded = true;
      rep.failures.push_back("residue interval excludes 0 at (" + std::to_string(p.p1) + "," + std::to_string(p.p2) +
                             ")");
    }
  }
  rep.radius_log10 = worst.log10_abs();
  if (!excluded && worst > limit) rep.failures.push_back("residue radius above 10^-" + std::to_string(digits / 2));
  rep.checks.push_back("all SIC residues enclosed by balls of radius <= 10^" +
                       std::to_string(static_cast<long>(std::ceil(rep.radius_log10))));
  rep.checks.push_back("numerical evidence, not a proof");
  rep.passed = rep.failures.empty();
  return rep;
}

// ------------------------------------------------------------ report, json

std::string report(const ExactCertificate& cert) {
  std::ostringstream os;
  const i64 dp = dprime(cert.d);
  MatGroup S(dp, cert.stabilizer);
  MatGroup C = centralizer(cert.stabilizer, dp);
  MatGroup H(dp, cert.kernel);
  os << "dimension " << cert.d << " (d' = " << dp << "), method " << cert.method << ", " << cert.digits
     << " digits, symmetry " << cert.symmetry << "\n";
  os << "strongly centring shift: D_{" << cert.shift.p1 << "," << cert.shift.p2 << "}"
     << (cert.shift == IndexPair{0, 0} ? " (identity)" : "") << "\n";
  std::size_t D0 = cert.tower->degree(cert.e0_level);
  os << "[E0:Q] = " << D0 << ", [E1:Q] = " << cert.tower->degree() << ", [E1:E0] = " << cert.tower->degree() / D0
     << "\n";
  os << "sqrt(" << cert.sqrt_d << ") in E0: " << (cert.contains_sqrt_d ? "yes" : "no") << "\n";
  for (std::size_t l = 1; l <= cert.tower->height(); ++l) {
    const Level& lv = cert.tower->level(l);
    os << "  level " << l << " " << lv.tag << " (" << (l <= cert.e0_level ? "E0" : "E1") << "), degree " << lv.degree;
    AlgebraicNumber g = AlgebraicNumber::generator(cert.tower, l);
    os << ", minimal polynomial over Q: " << rational_polynomial_str(exact_minimal_polynomial(g)) << "\n";
  }
  os << "|S(Pi)| = " << S.order() << ", |C(Pi)| = " << C.order() << ", |H| = " << H.order()
     << ", |C/H| = " << C.order() / std::max<std::size_t>(H.order(), 1) << "\n";
  os << "S(Pi):";
  for (const auto& F : S.elements()) os << " " << F.str();
  os << "\n";
  if (!cert.match.automorphisms.empty()) {
    os << "Galois match (" << cert.match.candidates << " candidate isomorphisms, winner 10^"
       << std::lround(cert.match.score) << ", runner-up ";
    if (std::isfinite(cert.match.runner_up))
      os << "10^" << std::lround(cert.match.runner_up);
    else
      os << "none";
    os << "):\n";
    for (std::size_t j = 0; j < cert.match.automorphisms.size(); ++j) {
      const auto& g = cert.match.automorphisms[j];
      os << "  g" << j << " order " << g.order() << " <-> G = " << cert.match.matrices[j].str();
      for (std::size_t l = cert.e0_level + 1; l <= cert.tower->height(); ++l)
        os << "; " << cert.tower->level(l).tag << " -> " << g.image(l).str();
      os << "\n";
    }
  }
  os << "stored overlaps: " << cert.overlaps.size() << "\n";
  for (const auto& s : cert.log) os << "note: " << s << "\n";
  return os.str();
}

namespace {

json matrix_json(const ModMatrix& F) { return json::array({F.a, F.b, F.c, F.d}); }
ModMatrix matrix_from(const json& j, i64 m) {
  return ModMatrix(j.at(0).get<i64>(), j.at(1).get<i64>(), j.at(2).get<i64>(), j.at(3).get<i64>(), m);
}

}  // namespace

std::string certificate_to_json(const ExactCertificate& cert, const VerificationReport* verification) {
  json j;
  j["format"] = "SIC-CERTIFICATE v1";
  j["d"] = cert.d;
  j["digits"] = cert.digits;
  j["method"] = cert.method;
  j["symmetry"] = cert.symmetry;
  j["shift"] = {cert.shift.p1, cert.shift.p2};
  j["tower"] = json::parse(tower_to_json(*cert.tower));
  j["e0_level"] = cert.e0_level;
  j["stabilizer"] = json::array();
  for (const auto& F : cert.stabilizer) j["stabilizer"].push_back(matrix_json(F));
  j["kernel"] = json::array();
  for (const auto& F : cert.kernel) j["kernel"].push_back(matrix_json(F));
  j["overlaps"] = json::array();
  for (const auto& [p, x] : cert.overlaps)
    j["overlaps"].push_back({{"p", {p.p1, p.p2}}, {"value", coords_to_strings(x.coeffs())}});
  json m;
  m["score"] = cert.match.score;
  m["runner_up"] = std::isfinite(cert.match.runner_up) ? json(cert.match.runner_up) : json(nullptr);
  m["candidates"] = cert.match.candidates;
  m["pairs"] = json::array();
  for (std::size_t i = 0; i < cert.match.automorphisms.size(); ++i) {
    json imgs = json::array();
    for (std::size_t l = 1; l <= cert.tower->height(); ++l)
      imgs.push_back(coords_to_strings(cert.match.automorphisms[i].image(l).coeffs()));
    m["pairs"].push_back({{"G", matrix_json(cert.match.matrices[i])}, {"images", imgs}});
  }
  j["galois_match"] = m;
  j["sqrt_d"] = cert.sqrt_d;
  j["contains_sqrt_d"] = cert.contains_sqrt_d;
  j["log"] = cert.log;
  if (verification) {
    j["verification"] = {{"mode", verification->mode},
                         {"passed", verification->passed},
                         {"checks", verification->checks},
                         {"failures", verification->failures}};
  }
  return j.dump(1);
}

ExactCertificate certificate_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "SIC-CERTIFICATE v1") throw std::invalid_argument("not a SIC certificate");
  ExactCertificate c;
  c.d = j.at("d").get<i64>();
  const i64 dp = dprime(c.d);
  c.digits = j.at("digits").get<long>();
  c.method = j.at("method").get<int>();
  c.symmetry = j.at("symmetry").get<std::string>();
  c.shift = {j.at("shift").at(0).get<i64>(), j.at("shift").at(1).get<i64>()};
  c.tower = tower_from_json(j.at("tower").dump());
  c.e0_level = j.at("e0_level").get<std::size_t>();
  for (const auto& F : j.at("stabilizer")) c.stabilizer.push_back(matrix_from(F, dp));
  for (const auto& F : j.at("kernel")) c.kernel.push_back(matrix_from(F, dp));
  for (const auto& o : j.at("overlaps")) {
    IndexPair p{o.at("p").at(0).get<i64>(), o.at("p").at(1).get<i64>()};
    QVec v = coords_from_strings(o.at("value").get<std::vector<std::string>>());
    v.resize(c.tower->degree());
    c.overlaps.emplace(p, AlgebraicNumber(c.tower, v));
  }
  const json& m = j.at("galois_match");
  c.match.score = m.at("score").get<double>();
  c.match.runner_up =
      m.at("runner_up").is_null() ? std::numeric_limits<double>::infinity() : m.at("runner_up").get<double>();
  c.match.candidates = m.at("candidates").get<std::size_t>();
  for (const auto& pr : m.at("pairs")) {
    c.match.matrices.push_back(matrix_from(pr.at("G"), dp));
    std::vector<AlgebraicNumber> imgs;
    for (const auto& im : pr.at("images")) {
      QVec v = coords_from_strings(im.get<std::vector<std::string>>());
      v.resize(c.tower->degree());
      imgs.emplace_back(c.tower, v);
    }
    c.match.automorphisms.emplace_back(c.tower, c.e0_level, imgs);
  }
  c.sqrt_d = j.at("sqrt_d").get<long>();
  c.contains_sqrt_d = j.at("contains_sqrt_d").get<bool>();
  c.log = j.at("log").get<std::vector<std::string>>();
  return c;
}

std::vector<std::string> overlap_minpoly_multiset(const ExactCertificate& cert) {
  std::vector<std::string> out;
  for (const auto& [p, x] : exact_overlaps(cert)) out.push_back(rational_polynomial_str(exact_minimal_polynomial(x)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sicx
