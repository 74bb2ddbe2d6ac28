#include "sicx/fidsearch.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>

#include "sicx/lattice.hpp"

namespace sicx {

namespace {

using cd = std::complex<double>;

long matrix_order(const ModMatrix& F) {
  ModMatrix x = F;
  for (long k = 1; k <= 4 * F.m * F.m; ++k) {
    if (x.is_identity()) return k;
    x = x * F;
  }
  throw std::logic_error("matrix_order: no finite order found");
}

/// Adds the columns of P with the largest residual norms to an orthonormal
/// basis until `rank` columns are collected.
CMatrix column_basis(const CMatrix& P, std::size_t rank) {
  const std::size_t n = P.rows();
  std::vector<CVector> cols(n, CVector(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) cols[c][r] = P(r, c);
  std::vector<CVector> basis;
  auto project_out = [&](CVector& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        Complex s = dot(b, v);
        for (std::size_t r = 0; r < n; ++r) v[r] -= s * b[r];
      }
  };
  while (basis.size() < rank) {
    std::size_t best = 0;
    Real best_norm(-1L);
    for (std::size_t c = 0; c < n; ++c) {
      project_out(cols[c]);
      Real nr = vector_norm(cols[c]);
      if (nr > best_norm) {
        best_norm = nr;
        best = c;
      }
    }
    CVector v = cols[best];
    Real nr = vector_norm(v);
    for (auto& z : v) z = z / nr;
    basis.push_back(v);
  }
  CMatrix B(n, rank);
  for (std::size_t c = 0; c < rank; ++c)
    for (std::size_t r = 0; r < n; ++r) B(r, c) = basis[c][r];
  return B;
}

CVector adjoint_times(const CMatrix& B, const CVector& v) {
  CVector out(B.cols());
  for (std::size_t c = 0; c < B.cols(); ++c) {
    Complex s;
    s.set_bits(working_bits());
    for (std::size_t r = 0; r < B.rows(); ++r) s += conj(B(r, c)) * v[r];
    out[c] = s;
  }
  return out;
}

void normalize(CVector& v) {
  Real n = vector_norm(v);
  for (auto& z : v) z = z / n;
}

void raise_precision(CVector& v, long bits) {
  for (auto& z : v) z.set_bits(bits);
}

/// Real Gaussian elimination with partial pivoting; A is n x n row-major.
std::vector<Real> solve_real(std::vector<Real> A, std::vector<Real> b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (abs(A[r * n + k]) > abs(A[piv * n + k])) piv = r;
    if (A[piv * n + k].is_zero()) throw SingularMatrixError("solve_real: singular system");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A[k * n + c], A[piv * n + c]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      Real f = A[r * n + k] / A[k * n + k];
      if (f.is_zero()) continue;
      for (std::size_t c = k; c < n; ++c) A[r * n + c] -= f * A[k * n + c];
      b[r] -= f * b[k];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Real s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= A[k * n + c] * x[c];
    x[k] = s / A[k * n + k];
  }
  return x;
}

// ---------------------------------------------------------------------------
// double-precision frame potential

struct FrameModel {
  long d = 0;
  std::size_t k = 0;
  std::vector<cd> tau;  // tau^j, j mod 2d
  std::vector<cd> B;    // d x k, column-major
  std::vector<cd> psi, g;

  cd tw(long e) const { return tau[static_cast<std::size_t>(((e % (2 * d)) + 2 * d) % (2 * d))]; }

  void displace(long p1, long p2, const std::vector<cd>& v, std::vector<cd>& out) const {
    for (long r = 0; r < d; ++r) {
      long s = ((r - p1) % d + d) % d;
      out[static_cast<std::size_t>(r)] = tw(p1 * p2 + 2 * s * p2) * v[static_cast<std::size_t>(s)];
    }
  }

  void vec(const double* x, std::vector<cd>& c) const {
    c.assign(k, cd());
    for (std::size_t j = 0; j < k; ++j) c[j] = cd(x[j], x[k + j]);
  }

  void to_psi(const std::vector<cd>& c, std::vector<cd>& out) const {
    out.assign(static_cast<std::size_t>(d), cd());
    for (long r = 0; r < d; ++r)
      for (std::size_t j = 0; j < k; ++j) out[static_cast<std::size_t>(r)] += B[j * d + r] * c[j];
  }

  /// Normalized frame potential and optionally its gradient with respect
  /// to (Re c, Im c).
  double eval(const double* x, double* grad) {
    std::vector<cd> c;
    vec(x, c);
    to_psi(c, psi);
    double N = 0;
    for (const auto& z : c) N += std::norm(z);
    g.assign(static_cast<std::size_t>(d), cd());
    std::vector<cd> u(static_cast<std::size_t>(d));
    double S = 0;
    for (long p1 = 0; p1 < d; ++p1)
      for (long p2 = 0; p2 < d; ++p2) {
        displace(p1, p2, psi, u);
        cd chi;
        for (long r = 0; r < d; ++r) chi += std::conj(psi[static_cast<std::size_t>(r)]) * u[static_cast<std::size_t>(r)];
        double a = std::norm(chi);
        S += a * a;
        if (grad) {
          cd w = 4.0 * a * std::conj(chi);
          for (long r = 0; r < d; ++r) g[static_cast<std::size_t>(r)] += w * u[static_cast<std::size_t>(r)];
        }
      }
    double N4 = N * N * N * N;
    if (grad) {
      for (std::size_t j = 0; j < k; ++j) {
        cd bg;
        for (long r = 0; r < d; ++r) bg += std::conj(B[j * d + r]) * g[static_cast<std::size_t>(r)];
        cd gc = bg / N4 - 4.0 * S / (N4 * N) * c[j];
        grad[j] = 2 * gc.real();
        grad[k + j] = 2 * gc.imag();
      }
    }
    return S / N4;
  }

  double sic_error(const double* x) {
    std::vector<cd> c;
    vec(x, c);
    to_psi(c, psi);
    double N = 0;
    for (const auto& z : c) N += std::norm(z);
    std::vector<cd> u(static_cast<std::size_t>(d));
    double err = 0;
    for (long p1 = 0; p1 < d; ++p1)
      for (long p2 = 0; p2 < d; ++p2) {
        if (p1 == 0 && p2 == 0) continue;
        displace(p1, p2, psi, u);
        cd chi;
        for (long r = 0; r < d; ++r) chi += std::conj(psi[static_cast<std::size_t>(r)]) * u[static_cast<std::size_t>(r)];
        err = std::max(err, std::abs((d + 1) * std::norm(chi) / (N * N) - 1));
      }
    return err;
  }
};

double fm_f(const gsl_vector* x, void* p) { return static_cast<FrameModel*>(p)->eval(x->data, nullptr); }
void fm_df(const gsl_vector* x, void* p, gsl_vector* g) { static_cast<FrameModel*>(p)->eval(x->data, g->data); }
void fm_fdf(const gsl_vector* x, void* p, double* f, gsl_vector* g) {
  *f = static_cast<FrameModel*>(p)->eval(x->data, g->data);
}

std::vector<double> minimize_frame(FrameModel& m, std::vector<double> x0) {
  const std::size_t n = x0.size();
  gsl_multimin_function_fdf fn{&fm_f, &fm_df, &fm_fdf, n, &m};
  gsl_vector* x = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(s, &fn, x, 0.01, 0.1);
  for (int it = 0; it < 5000; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(s->gradient, 1e-13) == GSL_SUCCESS) break;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = gsl_vector_get(s->x, i);
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  return out;
}

// ---------------------------------------------------------------------------
// refinement

struct Linearization {
  std::vector<Real> J;  // rows x n
  std::vector<Real> r;
  std::size_t rows = 0, n = 0;
};

/// Residual rows (d+1)|chi_p|^2 - 1 for p != 0 mod d, then |c|^2 - 1 and
/// Im c_{j0}, with derivatives in (Re c, Im c).
/// D_p^dagger psi: component s is conj(tau^{p1 p2 + 2 s p2}) psi_{s+p1}.
CVector apply_displacement_adjoint(const IndexPair& p, const CVector& psi, const TauPowers& tw) {
  const i64 d = static_cast<i64>(psi.size());
  CVector out(psi.size());
  for (i64 s = 0; s < d; ++s)
    out[static_cast<std::size_t>(s)] =
        conj(tw(p.p1 * p.p2 + 2 * s * p.p2)) * psi[static_cast<std::size_t>(mod(s + p.p1, d))];
  return out;
}

Linearization linearize(i64 d, const CMatrix* B, const CVector& c, std::size_t j0) {
  const std::size_t k = c.size();
  CVector psi = B ? (*B) * c : c;
  TauPowers tw(d, working_bits());
  Linearization L;
  L.n = 2 * k;
  L.rows = static_cast<std::size_t>(d * d - 1) + 2;
  L.J.assign(L.rows * L.n, Real(0L));
  L.r.assign(L.rows, Real(0L));
  std::size_t row = 0;
  const long dd = static_cast<long>(d) + 1;
  for (i64 p1 = 0; p1 < d; ++p1)
    for (i64 p2 = 0; p2 < d; ++p2) {
      if (p1 == 0 && p2 == 0) continue;
      CVector u = apply_displacement({p1, p2}, psi, tw);
      CVector w = apply_displacement_adjoint({p1, p2}, psi, tw);
      Complex chi = dot(psi, u);
      CVector al = B ? adjoint_times(*B, u) : u;
      CVector be = B ? adjoint_times(*B, w) : w;
      L.r[row] = norm(chi) * dd - Real(1L);
      Complex cc = conj(chi);
      for (std::size_t j = 0; j < k; ++j) {
        Complex cb = conj(be[j]);
        Complex dx = al[j] + cb;
        // d chi / d y_j = -i al_j + i conj(be_j)
        Complex t = cb - al[j];
        Complex dy(-t.im, t.re);
        L.J[row * L.n + j] = (cc * dx).re * (2 * dd);
        L.J[row * L.n + k + j] = (cc * dy).re * (2 * dd);
      }
      ++row;
    }
  Real nn(0L);
  for (const auto& z : c) nn += norm(z);
  L.r[row] = nn - Real(1L);
  for (std::size_t j = 0; j < k; ++j) {
    L.J[row * L.n + j] = c[j].re * 2L;
    L.J[row * L.n + k + j] = c[j].im * 2L;
  }
  ++row;
  L.r[row] = c[j0].im;
  L.J[row * L.n + k + j0] = Real(1L);
  return L;
}

/// Normalizes and rotates the coordinates so that the largest one is real
/// and positive; returns its index.
std::size_t fix_gauge(CVector& c) {
  normalize(c);
  std::size_t j0 = 0;
  for (std::size_t j = 1; j < c.size(); ++j)
    if (norm(c[j]) > norm(c[j0])) j0 = j;
  Complex ph = conj(c[j0]) / abs(c[j0]);
  for (auto& z : c) z = z * ph;
  c[j0].im = Real::with_bits(c[j0].im.bits());
  return j0;
}

Real coords_error(i64 d, const CMatrix* B, const CVector& c) {
  CVector psi = B ? (*B) * c : c;
  normalize(psi);
  return sic_error(overlaps(psi, d));
}

double safe_log10(const Real& x) {
  double l = x.log10_abs();
  return std::isfinite(l) ? l : -static_cast<double>(x.digits());
}

}  // namespace

ModMatrix symmetry_matrix(i64 d, const std::string& tag) {
  if (tag == "fz") return zauner_matrix(d);
  if (tag == "fa") return fa_matrix(d);
  if (tag == "none" || tag.empty()) return ModMatrix::identity(dprime(d));
  throw std::invalid_argument("unknown symmetry tag: " + tag);
}

std::vector<EigenSector> symmetry_sectors(i64 d, const ModMatrix& F) {
  if (F.det() != 1 % F.m) throw std::invalid_argument("symmetry_sectors: F must have determinant 1");
  const std::size_t n = static_cast<std::size_t>(d);
  if (F.is_identity()) return {EigenSector{Complex(1L), CMatrix::identity(n)}};
  CMatrix U = symplectic_unitary(F, d).matrix;
  const long m = matrix_order(F);
  std::vector<CMatrix> pw{CMatrix::identity(n)};
  for (long t = 1; t <= m; ++t) pw.push_back(pw.back() * U);
  Complex c = pw[static_cast<std::size_t>(m)](0, 0);
  Complex l0 = nth_root(c, m);
  std::vector<EigenSector> out;
  for (long j = 0; j < m; ++j) {
    Complex lam = l0 * root_of_unity(j, m);
    Complex linv = Complex(1L) / lam;
    CMatrix P(n, n);
    Complex f(1L);
    for (long t = 0; t < m; ++t) {
      P = P + f * pw[static_cast<std::size_t>(t)];
      f = f * linv;
    }
    P = Complex(Real(1L) / Real(m)) * P;
    long rank = P.trace().re.round_to_integer().get_si();
    if (rank <= 0) continue;
    out.push_back(EigenSector{lam, column_basis(P, static_cast<std::size_t>(rank))});
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenSector& a, const EigenSector& b) { return a.dim() > b.dim(); });
  return out;
}

std::size_t sector_of(const std::vector<EigenSector>& sectors, const CVector& v) {
  std::size_t best = 0;
  Real best_w(-1L);
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    Real w(0L);
    for (const auto& z : adjoint_times(sectors[s].basis, v)) w += norm(z);
    if (w > best_w) {
      best_w = w;
      best = s;
    }
  }
  return best;
}

double fiducial_error(const Fiducial& fid) {
  PrecisionScope ps(fid.digits);
  CVector v = fid.v;
  normalize(v);
  return safe_log10(sic_error(overlaps(v, fid.d)));
}

Fiducial refine(const Fiducial& fid, long target_digits) {
  const i64 d = fid.d;
  if (target_digits < 15) throw std::invalid_argument("refine: target must be at least 15 digits");
  const long work = target_digits + 20;
  const double goal = -static_cast<double>(target_digits - 10);
  double err = fiducial_error(fid);
  if (fid.digits >= target_digits && err < goal) {
    Fiducial out = fid;
    PrecisionScope ps(fid.digits);
    normalize(out.v);
    out.log10_error = err;
    return out;
  }
  const ModMatrix F = symmetry_matrix(d, fid.symmetry);
  const bool restricted = !F.is_identity();

  CVector psi = fid.v;
  int stagnant = 0;
  long prec = 0;
  for (int sweep = 0; sweep < 80; ++sweep) {
    prec = std::min(work, std::max<long>(40, 2 * static_cast<long>(-err) + 30));
    PrecisionScope ps(prec);
    raise_precision(psi, working_bits());
    normalize(psi);
    CMatrix basis;
    CVector c;
    if (restricted) {
      auto sectors = symmetry_sectors(d, F);
      basis = sectors[sector_of(sectors, psi)].basis;
      c = adjoint_times(basis, psi);
    } else {
      c = psi;
    }
    const CMatrix* B = restricted ? &basis : nullptr;
    std::size_t j0 = fix_gauge(c);
    Real e0 = coords_error(d, B, c);
    double le0 = safe_log10(e0);
    if (prec == work && le0 < goal) {
      Fiducial out = fid;
      psi = B ? (*B) * c : c;
      normalize(psi);
      raise_precision(psi, digits_to_bits(target_digits));
      out.v = psi;
      out.digits = target_digits;
      out.log10_error = le0;
      return out;
    }

    Linearization L = linearize(d, B, c, j0);
    const std::size_t n = L.n;
    std::vector<Real> A(n * n, Real(0L)), g(n, Real(0L));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        Real s(0L);
        for (std::size_t r = 0; r < L.rows; ++r) s += L.J[r * n + i] * L.J[r * n + j];
        A[i * n + j] = s;
        A[j * n + i] = s;
      }
      Real s(0L);
      for (std::size_t r = 0; r < L.rows; ++r) s += L.J[r * n + i] * L.r[r];
      g[i] = -s;
    }
    Real maxdiag(0L);
    for (std::size_t i = 0; i < n; ++i) maxdiag = max(maxdiag, A[i * n + i]);

    bool accepted = false;
    double damping = 0.0;
    for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
      std::vector<Real> M = A;
      if (damping > 0)
        for (std::size_t i = 0; i < n; ++i) M[i * n + i] += maxdiag * Real(damping);
      std::vector<Real> step;
      try {
        step = solve_real(M, g, n);
      } catch (const SingularMatrixError&) {
        damping = damping == 0.0 ? 1e-12 : damping * 100;
        continue;
      }
      CVector c2 = c;
      const std::size_t k = c.size();
      for (std::size_t j = 0; j < k; ++j) c2[j] = c[j] + Complex(step[j], step[k + j]);
      fix_gauge(c2);
      Real e1 = coords_error(d, B, c2);
      if (e1 < e0) {
        accepted = true;
        psi = B ? (*B) * c2 : c2;
        err = safe_log10(e1);
      } else {
        damping = damping == 0.0 ? 1e-12 : damping * 100;
      }
    }
    if (!accepted || err > le0 - 0.5) {
      if (++stagnant >= 3) {
        std::ostringstream os;
        os << "refine: stagnated at log10 error " << le0 << " with " << prec << " digits (d=" << d << ")";
        throw RefineFailure(os.str(), le0, prec);
      }
      if (!accepted) err = le0;
    } else {
      stagnant = 0;
    }
  }
  throw RefineFailure("refine: sweep limit reached", err, prec);
}

Fiducial seed_search(i64 d, const SeedOptions& opt) {
  if (d < 2) throw std::invalid_argument("seed_search: d must be at least 2");
  const ModMatrix F = symmetry_matrix(d, opt.symmetry);
  std::vector<EigenSector> sectors;
  {
    PrecisionScope ps(40);
    sectors = symmetry_sectors(d, F);
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  double best_error = std::numeric_limits<double>::infinity();
  const double pi_ = std::acos(-1.0);
  for (const auto& sector : sectors) {
    FrameModel m;
    m.d = static_cast<long>(d);
    m.k = sector.dim();
    // tau^j = (-e^{i pi/d})^j
    for (long j = 0; j < 2 * d; ++j)
      m.tau.push_back((j % 2 == 0 ? 1.0 : -1.0) * std::polar(1.0, pi_ * static_cast<double>(j) / static_cast<double>(d)));
    m.B.resize(m.k * static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < m.k; ++j)
      for (long r = 0; r < d; ++r) {
        const Complex& z = sector.basis(static_cast<std::size_t>(r), j);
        m.B[j * d + r] = cd(z.re.to_double(), z.im.to_double());
      }
    struct Candidate {
      double err;
      std::vector<double> x;
    };
    std::vector<Candidate> found;
    for (int a = 0; a < std::max(1, opt.attempts); ++a) {
      std::vector<double> x0(2 * m.k);
      for (auto& v : x0) v = normal(rng);
      std::vector<double> x = minimize_frame(m, x0);
      found.push_back({m.sic_error(x.data()), x});
    }
    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.err < b.err; });
    for (const auto& cand : found) {
      best_error = std::min(best_error, cand.err);
      if (cand.err > 1e-3) break;
      Fiducial f;
      f.d = d;
      f.symmetry = opt.symmetry;
      f.seed = opt.seed;
      f.digits = 40;
      {
        PrecisionScope ps(40);
        CVector c(m.k);
        for (std::size_t j = 0; j < m.k; ++j) c[j] = Complex(Real(cand.x[j]), Real(cand.x[m.k + j]));
        f.v = sector.basis * c;
        normalize(f.v);
      }
      try {
        Fiducial out = refine(f, 30);
        if (out.log10_error < -10) return out;
      } catch (const RefineFailure&) {
      }
    }
  }
  std::ostringstream os;
  os << "seed_search: no convergent attempt in d=" << d << " (best error " << best_error << ")";
  throw SearchFailure(os.str(), std::log10(best_error));
}

std::vector<StabilizerElement> detect_stabilizer(const Fiducial& fid, bool full_sweep) {
  const i64 d = fid.d, dp = dprime(d);
  const long prec = std::min<long>(fid.digits, 60);
  PrecisionScope ps(prec);
  CVector psi = fid.v;
  raise_precision(psi, working_bits());
  normalize(psi);
  double ltol = std::max(-static_cast<double>(prec - 10), fid.log10_error / 2);
  ltol = std::min(ltol, -8.0);
  Real tol = pow(Real(10L), Real(ltol));
  std::vector<ModMatrix> candidates;
  if (full_sweep) {
    candidates = esl2_elements(dp);
  } else {
    ModMatrix Fs = symmetry_matrix(d, fid.symmetry == "none" ? "fz" : fid.symmetry);
    for (const auto& G : linear_span_group(Fs).elements()) {
      i64 det = G.det();
      if (det == 1 % dp || det == mod(-1, dp)) candidates.push_back(G);
    }
  }
  TauPowers tw(d, working_bits());
  std::vector<StabilizerElement> out;
  for (const auto& G : candidates) {
    CliffordOp op = clifford_op(G, d);
    CVector phi = op.apply(psi);
    for (i64 p1 = 0; p1 < d; ++p1)
      for (i64 p2 = 0; p2 < d; ++p2) {
        Complex ov = dot(psi, apply_displacement({p1, p2}, phi, tw));
        if (abs(Real(1L) - norm(ov)) < tol) out.push_back({{p1, p2}, G});
      }
  }
  return out;
}

CentringResult strongly_centre(const Fiducial& fid) {
  const i64 d = fid.d;
  if (d % 3 != 0) return CentringResult{fid, {0, 0}, 0};
  const i64 n = d / 3, dp = dprime(d);
  PrecisionScope ps(fid.digits);
  CVector psi = fid.v;
  normalize(psi);
  MatGroup C = centralizer(zauner_matrix(d), dp);
  std::vector<Orbit> orbs = orbits(C, dp);
  // a few nonzero orbits, smallest first, skipping the origin
  std::vector<const Orbit*> pick;
  for (const auto& o : orbs) {
    bool zero = false;
    for (const auto& q : o)
      if (mod(q.p1, d) == 0 && mod(q.p2, d) == 0) zero = true;
    if (!zero) pick.push_back(&o);
  }
  std::stable_sort(pick.begin(), pick.end(), [](const Orbit* a, const Orbit* b) { return a->size() < b->size(); });
  if (pick.size() > 3) pick.resize(3);

  TauPowers tw(d, working_bits());
  const int max_degree = 8;
  const int inconclusive = 1000;
  int best_deg = inconclusive + 1;
  IndexPair best_p;
  CVector best_v;
  for (i64 a = 0; a < 3; ++a)
    for (i64 b = 0; b < 3; ++b) {
      IndexPair p{a * n, b * n};
      CVector v = apply_displacement(p, psi, tw);
      OverlapTable t = overlaps(v, d);
      int deg = 0;
      for (const Orbit* o : pick) {
        Complex s;
        s.set_bits(working_bits());
        for (const auto& q : *o) s += t.at(q);
        int dq = inconclusive;
        try {
          auto mp = minimal_polynomial(s, max_degree);
          if (mp) dq = static_cast<int>(mp->degree());
        } catch (const PrecisionRefused&) {
        }
        deg = std::max(deg, dq);
      }
      if (deg < best_deg) {
        best_deg = deg;
        best_p = p;
        best_v = v;
      }
    }
  if (best_deg >= inconclusive)
    throw PrecisionRefused("strongly_centre: degree test inconclusive; increase the fiducial precision");
  Fiducial out = fid;
  out.v = best_v;
  out.log10_error = fiducial_error(out);
  return CentringResult{out, best_p, best_deg};
}

}  // namespace sicx
