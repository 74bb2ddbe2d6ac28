#include "sicx/heisenberg.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace sicx {

TauPowers::TauPowers(i64 d, long bits) : d_(d) {
  PrecisionScope ps(bits_to_digits(bits));
  pw_.reserve(static_cast<std::size_t>(2 * d));
  for (i64 k = 0; k < 2 * d; ++k) pw_.push_back(root_of_unity(k * (d + 1), 2 * d));
}

i64 symplectic_form(const IndexPair& p, const IndexPair& q) { return p.p2 * q.p1 - p.p1 * q.p2; }

DisplacementOp displacement(const IndexPair& p, i64 d) {
  dprime(d);
  TauPowers tw(d, working_bits());
  DisplacementOp op{p, d, CMatrix(static_cast<std::size_t>(d), static_cast<std::size_t>(d))};
  for (i64 s = 0; s < d; ++s) {
    i64 r = mod(s + p.p1, d);
    op.matrix(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) = tw(p.p1 * p.p2 + 2 * s * p.p2);
  }
  return op;
}

CVector apply_displacement(const IndexPair& p, const CVector& psi, const TauPowers& tw) {
  const i64 d = static_cast<i64>(psi.size());
  CVector out(psi.size());
  for (i64 r = 0; r < d; ++r) {
    i64 s = mod(r - p.p1, d);
    out[static_cast<std::size_t>(r)] = tw(p.p1 * p.p2 + 2 * s * p.p2) * psi[static_cast<std::size_t>(s)];
  }
  return out;
}

CVector CliffordOp::apply(const CVector& v) const {
  if (!antiunitary) return matrix * v;
  CVector c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = conj(v[i]);
  return matrix * c;
}

namespace {

using CacheKey = std::tuple<i64, i64, i64, i64, i64, i64, long>;
std::mutex g_cache_mu;
std::map<CacheKey, CliffordOp> g_cache;

Complex canonical_phase(i64 d) {
  if (d % 2 == 0) return root_of_unity(1, 8);
  return d % 4 == 1 ? Complex(1L) : Complex(Real(0L), Real(1L));
}

CMatrix direct_formula(const ModMatrix& F, i64 d) {
  const i64 dp = F.m;
  i64 binv = inv_mod(F.b, dp);
  TauPowers tw(d, working_bits());
  Complex pref = canonical_phase(d) / sqrt(Real(d));
  CMatrix U(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (i64 r = 0; r < d; ++r)
    for (i64 s = 0; s < d; ++s) {
      i64 e = mod(binv * mod(F.d * r * r - 2 * r * s + F.a * s * s, dp), dp);
      U(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) = pref * tw(e);
    }
  return U;
}

CMatrix symplectic_matrix(const ModMatrix& F, i64 d) {
  const i64 dp = F.m;
  if (F.is_identity()) return CMatrix::identity(static_cast<std::size_t>(d));
  if (gcd(F.b, dp) == 1) return direct_formula(F, d);
  for (i64 k = 0; k < dp; ++k) {
    ModMatrix F2(0, -1, 1, k, dp);
    ModMatrix F1 = F * F2.inverse();
    if (gcd(F1.b, dp) == 1) return direct_formula(F1, d) * direct_formula(F2, d);
  }
  for (i64 k = 0; k < dp; ++k) {
    ModMatrix F2(0, -1, 1, k, dp);
    ModMatrix F1 = F2.inverse() * F;
    if (gcd(F1.b, dp) == 1) return direct_formula(F2, d) * direct_formula(F1, d);
  }
  throw std::logic_error("no splitting found for " + F.str());
}

}  // namespace

CliffordOp symplectic_unitary(const ModMatrix& F, i64 d) {
  const i64 dp = dprime(d);
  if (F.m != dp) throw std::invalid_argument("symplectic_unitary: matrix must be mod d'");
  if (F.det() != 1) throw std::invalid_argument("symplectic_unitary: det must be 1");
  CacheKey key{F.a, F.b, F.c, F.d, dp, 1, working_bits()};
  {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  CliffordOp op{F, {0, 0}, false, symplectic_matrix(F, d)};
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_cache.emplace(key, op);
  return op;
}

CliffordOp antiunitary_extend(const ModMatrix& F, i64 d) {
  const i64 dp = dprime(d);
  if (F.m != dp) throw std::invalid_argument("antiunitary_extend: matrix must be mod d'");
  if (F.det() != mod(-1, dp)) throw std::invalid_argument("antiunitary_extend: det must be -1");
  CacheKey key{F.a, F.b, F.c, F.d, dp, -1, working_bits()};
  {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  ModMatrix Fp = F * j_matrix(dp);
  CliffordOp op{F, {0, 0}, true, symplectic_matrix(Fp, d)};
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_cache.emplace(key, op);
  return op;
}

CliffordOp clifford_op(const ModMatrix& F, i64 d) {
  return F.det() == 1 ? symplectic_unitary(F, d) : antiunitary_extend(F, d);
}

void clear_clifford_cache() {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_cache.clear();
}

OverlapTable::OverlapTable(i64 d, long digits)
    : d_(d), dp_(dprime(d)), digits_(digits), v_(static_cast<std::size_t>(dp_ * dp_)) {}

OverlapTable overlaps(const CVector& psi, i64 d) {
  if (static_cast<i64>(psi.size()) != d) throw std::invalid_argument("overlaps: vector length differs from d");
  long bits = psi.empty() ? working_bits() : psi[0].bits();
  PrecisionScope ps(bits_to_digits(bits));
  TauPowers tw(d, bits);
  OverlapTable t(d, bits_to_digits(bits));
  const i64 dp = t.dp();
  for (i64 p1 = 0; p1 < dp; ++p1)
    for (i64 p2 = 0; p2 < dp; ++p2) {
      Complex s;
      for (i64 r = 0; r < d; ++r) {
        i64 q = mod(r - p1, d);
        s += conj(psi[static_cast<std::size_t>(r)]) *
             (tw(p1 * p2 + 2 * q * p2) * psi[static_cast<std::size_t>(q)]);
      }
      t.at(p1, p2) = s;
    }
  return t;
}

OverlapTable overlaps(const Fiducial& fid) { return overlaps(fid.v, fid.d); }

CMatrix reconstruct_operator(const OverlapTable& table) {
  const i64 d = table.d();
  long bits = table.at(0, 0).bits();
  PrecisionScope ps(bits_to_digits(bits));
  TauPowers tw(d, bits);
  CMatrix A(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (i64 r = 0; r < d; ++r)
    for (i64 s = 0; s < d; ++s) {
      i64 p1 = mod(r - s, d);
      Complex acc;
      for (i64 p2 = 0; p2 < d; ++p2) acc += table.at(-p1, -p2) * tw(p1 * p2 + 2 * s * p2);
      A(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) = acc / Real(d);
    }
  return A;
}

Real sic_error(const OverlapTable& table) {
  const i64 d = table.d(), dp = table.dp();
  Real worst(0L);
  for (i64 p1 = 0; p1 < dp; ++p1)
    for (i64 p2 = 0; p2 < dp; ++p2) {
      if (p1 % d == 0 && p2 % d == 0) continue;
      Real e = abs(norm(table.at(p1, p2)) * (d + 1) - Real(1L));
      if (e > worst) worst = e;
    }
  return worst;
}

}  // namespace sicx
