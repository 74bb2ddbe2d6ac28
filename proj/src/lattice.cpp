#include "sicx/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sicx {

namespace {

// Fixed-size array of mpfr values at one precision.
class FpArray {
 public:
  FpArray(std::size_t n, long prec) : v_(n) {
    for (auto& x : v_) mpfr_init2(&x, static_cast<mpfr_prec_t>(prec));
  }
  ~FpArray() {
    for (auto& x : v_) mpfr_clear(&x);
  }
  FpArray(const FpArray&) = delete;
  FpArray& operator=(const FpArray&) = delete;
  mpfr_ptr operator[](std::size_t i) { return &v_[i]; }

 private:
  std::vector<__mpfr_struct> v_;
};

// Floating Gram-Schmidt rebuilt from exact inner products whenever a row
// is visited, so rounding errors never accumulate across swaps.
class Lll {
 public:
  Lll(std::vector<IntRow>& b, long prec)
      : b_(b), n_(b.size()), dim_(b.empty() ? 0 : b[0].size()), r_(n_ * n_, prec), mu_(n_ * n_, prec), B_(n_, prec),
        t_(3, prec) {}

  long run(double delta) {
    if (n_ < 2) return 0;
    gso_row(0);
    long swaps = 0;
    const long cap = 200000L * static_cast<long>(n_ * n_) + 1000000L;
    std::size_t k = 1;
    while (k < n_ && swaps < cap) {
      size_reduce(k);
      // Lovasz: B_k < (delta - mu^2) B_{k-1}
      mpfr_sqr(t_[0], m(k, k - 1), MPFR_RNDN);
      mpfr_d_sub(t_[0], delta, t_[0], MPFR_RNDN);
      mpfr_mul(t_[0], t_[0], B_[k - 1], MPFR_RNDN);
      if (mpfr_less_p(B_[k], t_[0])) {
        std::swap(b_[k], b_[k - 1]);
        ++swaps;
        k = k > 1 ? k - 1 : 1;
        if (k == 1) gso_row(0);
      } else {
        ++k;
      }
    }
    return swaps;
  }

 private:
  mpfr_ptr m(std::size_t i, std::size_t j) { return mu_[i * n_ + j]; }
  mpfr_ptr r(std::size_t i, std::size_t j) { return r_[i * n_ + j]; }

  void dot(mpz_class& out, std::size_t i, std::size_t j) {
    out = 0;
    for (std::size_t l = 0; l < dim_; ++l)
      if (b_[i][l] != 0 && b_[j][l] != 0) mpz_addmul(out.get_mpz_t(), b_[i][l].get_mpz_t(), b_[j][l].get_mpz_t());
  }

  // r_kj = <b_k,b_j> - sum_{l<j} mu_jl r_kl, mu_kj = r_kj / B_j, B_k = r_kk.
  void gso_row(std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      dot(g_, k, j);
      mpfr_set_z(r(k, j), g_.get_mpz_t(), MPFR_RNDN);
      for (std::size_t l = 0; l < j; ++l) {
        mpfr_mul(t_[1], m(j, l), r(k, l), MPFR_RNDN);
        mpfr_sub(r(k, j), r(k, j), t_[1], MPFR_RNDN);
      }
      if (j < k) {
        if (mpfr_zero_p(B_[j]))
          mpfr_set_zero(m(k, j), 1);
        else
          mpfr_div(m(k, j), r(k, j), B_[j], MPFR_RNDN);
      }
    }
    mpfr_set(B_[k], r(k, k), MPFR_RNDN);
  }

  void size_reduce(std::size_t k) {
    for (int pass = 0; pass < 200; ++pass) {
      gso_row(k);
      bool changed = false;
      for (std::size_t jj = k; jj-- > 0;) {
        mpfr_ptr mkj = m(k, jj);
        if (mpfr_cmp_d(mkj, 0.51) <= 0 && mpfr_cmp_d(mkj, -0.51) >= 0) continue;
        mpfr_round(t_[2], mkj);
        mpfr_get_z(q_.get_mpz_t(), t_[2], MPFR_RNDN);
        changed = true;
        for (std::size_t l = 0; l < dim_; ++l)
          if (b_[jj][l] != 0) mpz_submul(b_[k][l].get_mpz_t(), q_.get_mpz_t(), b_[jj][l].get_mpz_t());
        for (std::size_t l = 0; l < jj; ++l) {
          mpfr_mul_z(t_[1], m(jj, l), q_.get_mpz_t(), MPFR_RNDN);
          mpfr_sub(m(k, l), m(k, l), t_[1], MPFR_RNDN);
        }
        mpfr_sub(mkj, mkj, t_[2], MPFR_RNDN);
      }
      if (!changed) return;
    }
  }

  std::vector<IntRow>& b_;
  std::size_t n_, dim_;
  FpArray r_, mu_, B_, t_;
  mpz_class q_, g_;
};

long max_entry_bits(const std::vector<IntRow>& rows) {
  long mb = 1;
  for (const auto& r : rows)
    for (const auto& v : r) mb = std::max(mb, static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)));
  return mb;
}

double log10_norm(const IntRow& c) {
  mpz_class s = 0;
  for (const auto& v : c) s += v * v;
  if (s == 0) return -INFINITY;
  long e = 0;
  double m = mpz_get_d_2exp(&e, s.get_mpz_t());
  return 0.5 * (std::log10(m) + static_cast<double>(e) * std::log10(2.0));
}

long min_bits(const std::vector<Complex>& x) {
  long b = x.empty() ? working_bits() : x[0].bits();
  for (const auto& z : x) b = std::min(b, std::min(z.re.bits(), z.im.bits()));
  return b;
}

// Evaluates sum c_i x_i and sum |c_i||x_i| at the inputs' precision.
void residual_of(const IntRow& c, const std::vector<Complex>& x, Real& residual, Real& scale) {
  long bits = min_bits(x) + 16;
  for (const auto& v : c) bits = std::max(bits, static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) + min_bits(x) + 16);
  PrecisionScope ps(bits_to_digits(bits));
  Complex s(Real(0L), Real(0L));
  Real sc(0L);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    Real ci(c[i]);
    s += x[i] * ci;
    sc += abs(ci) * abs(x[i]);
  }
  residual = abs(s);
  scale = sc;
}

bool all_real(const std::vector<Complex>& x, long search_digits) {
  Real big(0L), imag(0L);
  for (const auto& z : x) {
    big = max(big, abs(z.re));
    imag = max(imag, abs(z.im));
  }
  if (imag.is_zero()) return true;
  return imag <= max(big, Real(1L)) * pow10(-search_digits);
}

void normalize_sign(IntRow& c) {
  mpz_class g = 0;
  for (const auto& v : c) g = gcd(g, v);
  if (g > 1)
    for (auto& v : c) v /= g;
  for (const auto& v : c)
    if (v != 0) {
      if (v < 0)
        for (auto& w : c) w = -w;
      break;
    }
}

}  // namespace

long lll_reduce(std::vector<IntRow>& rows, long fp_bits, double delta) {
  if (rows.empty()) return 0;
  const long n = static_cast<long>(rows.size());
  long prec = std::max(fp_bits, 2 * max_entry_bits(rows) + 4 * n + 64);
  Lll engine(rows, prec);
  return engine.run(delta);
}

long supported_height_digits(long input_digits, std::size_t count, int constraints) {
  if (count == 0) return 0;
  double rs = static_cast<double>(input_digits / 2);
  return static_cast<long>(std::floor(rs * constraints / (1.15 * static_cast<double>(count))));
}

RelationCandidate find_relation(const std::vector<Complex>& x, const RelationOptions& opt) {
  const std::size_t N = x.size();
  if (N == 0) throw std::invalid_argument("find_relation: empty input");
  RelationCandidate out;
  const long r = bits_to_digits(min_bits(x));
  const long rs = r / 2;
  out.input_digits = r;
  out.search_digits = rs;
  const int m = all_real(x, rs) ? 1 : 2;
  const long supported = supported_height_digits(r, N, m);
  if (!opt.allow_low_precision && opt.max_height_digits > supported)
    throw PrecisionRefused("find_relation: " + std::to_string(r) + " digits support height 10^" +
                           std::to_string(supported) + " for " + std::to_string(N) + " numbers, asked 10^" +
                           std::to_string(opt.max_height_digits));
  const long hmax = opt.max_height_digits > 0 ? opt.max_height_digits : supported;
  const long g = std::max<long>(20, rs / 10);
  const long S = std::max<long>(8, static_cast<long>(std::floor(static_cast<double>(rs - g) * std::log2(10.0))));
  const long step = std::max<long>(64, 4 * static_cast<long>(N));

  const double log_r = 0.3 * static_cast<double>(r);
  Real tol = pow10(-static_cast<long>(std::ceil(0.7 * static_cast<double>(r))));
  mpz_class hbound;
  mpz_ui_pow_ui(hbound.get_mpz_t(), 10, static_cast<unsigned long>(std::max<long>(hmax, 0)));

  auto accept = [&](const IntRow& c, Real& residual, double& ln) {
    ln = log10_norm(c);
    Real scale;
    residual_of(c, x, residual, scale);
    if (!(ln < log_r)) return false;
    for (const auto& v : c)
      if (abs(v) > hbound) return false;
    bool nonzero = false;
    for (const auto& v : c) nonzero = nonzero || v != 0;
    return nonzero && residual <= tol * max(scale, Real(1L));
  };

  std::vector<IntRow> U(N, IntRow(N, 0));
  for (std::size_t i = 0; i < N; ++i) U[i][i] = 1;
  const long xbits = min_bits(x);

  for (long s = std::min(S, step);; s = std::min(S, s + step)) {
    std::vector<IntRow> rows(N, IntRow(N + static_cast<std::size_t>(m)));
    {
      long ubits = max_entry_bits(U);
      PrecisionScope ps(bits_to_digits(xbits + ubits + 32));
      for (std::size_t i = 0; i < N; ++i) {
        Complex y(Real(0L), Real(0L));
        for (std::size_t j = 0; j < N; ++j)
          if (U[i][j] != 0) y += x[j] * Real(U[i][j]);
        for (std::size_t j = 0; j < N; ++j) rows[i][j] = U[i][j];
        Real re = y.re, im = y.im;
        mpfr_mul_2si(re.raw(), re.raw(), s, MPFR_RNDN);
        rows[i][N] = re.round_to_integer();
        if (m == 2) {
          mpfr_mul_2si(im.raw(), im.raw(), s, MPFR_RNDN);
          rows[i][N + 1] = im.round_to_integer();
        }
      }
    }
    lll_reduce(rows, 0);
    for (std::size_t i = 0; i < N; ++i) U[i].assign(rows[i].begin(), rows[i].begin() + static_cast<long>(N));

    if (opt.early_exit || s == S) {
      for (std::size_t i = 0; i < N; ++i) {
        Real res;
        double ln;
        if (accept(U[i], res, ln)) {
          out.c = U[i];
          out.residual = res;
          out.log10_norm = ln;
          out.accepted = true;
          return out;
        }
      }
    }
    if (s == S) break;
  }
  out.c = U[0];
  Real scale;
  residual_of(out.c, x, out.residual, scale);
  out.log10_norm = log10_norm(out.c);
  return out;
}

namespace {

std::vector<Complex> to_complex(const std::vector<Real>& x) {
  std::vector<Complex> z;
  z.reserve(x.size());
  for (const auto& v : x) z.emplace_back(v, Real::with_bits(v.bits()));
  return z;
}

}  // namespace

std::optional<RelationResult> integer_relation(const std::vector<Complex>& x, long max_height_digits) {
  RelationOptions opt;
  opt.max_height_digits = max_height_digits;
  RelationCandidate cand = find_relation(x, opt);
  if (!cand.accepted) return std::nullopt;
  RelationResult res;
  res.coefficients = cand.c;
  for (std::size_t j = 1; j < res.coefficients.size(); ++j) res.coefficients[j] = -res.coefficients[j];
  normalize_sign(res.coefficients);
  res.residual = cand.residual;
  res.precision_used = cand.search_digits;
  res.log10_norm = cand.log10_norm;
  return res;
}

std::optional<RelationResult> integer_relation(const std::vector<Real>& x, long max_height_digits) {
  return integer_relation(to_complex(x), max_height_digits);
}

Complex IntPolynomial::eval(const Complex& x) const {
  long bits = x.bits();
  for (const auto& v : c) bits = std::max(bits, static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) + x.bits());
  PrecisionScope ps(bits_to_digits(bits));
  Complex acc(Real(0L), Real(0L));
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + Complex(Real(c[i]));
  return acc;
}

std::string IntPolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    mpz_class a = abs(c[i]);
    if (first)
      os << (c[i] < 0 ? "-" : "");
    else
      os << (c[i] < 0 ? " - " : " + ");
    first = false;
    bool show = a != 1 || i == 0;
    if (show) os << a.get_str();
    if (i > 0) {
      if (show) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

IntPolynomial make_int_polynomial(IntRow c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  mpz_class g = 0;
  for (const auto& v : c) g = gcd(g, v);
  if (g > 1)
    for (auto& v : c) v /= g;
  if (!c.empty() && c.back() < 0)
    for (auto& v : c) v = -v;
  return IntPolynomial{std::move(c)};
}

std::optional<IntPolynomial> minimal_polynomial(const Complex& a, int max_degree) {
  const long r = bits_to_digits(a.bits());
  std::vector<Complex> pw;
  {
    PrecisionScope ps(r);
    pw.emplace_back(Real(1L), Real(0L));
  }
  for (int k = 1; k <= max_degree; ++k) {
    {
      PrecisionScope ps(r + 10);
      Complex next = pw.back() * a;
      next.set_bits(a.bits());
      pw.push_back(next);
    }
    const int m = all_real(pw, r / 2) ? 1 : 2;
    long h = supported_height_digits(r, pw.size(), m);
    if (h < 1) break;
    RelationOptions opt;
    opt.max_height_digits = h;
    RelationCandidate cand = find_relation(pw, opt);
    if (!cand.accepted || cand.c.back() == 0) continue;
    IntPolynomial p = make_int_polynomial(cand.c);
    Complex v = p.eval(a);
    if (abs(v) > pow10(-static_cast<long>(0.8 * static_cast<double>(r))) * max(cand.residual, Real(1L))) continue;
    return p;
  }
  return std::nullopt;
}

std::optional<IntPolynomial> minimal_polynomial(const Real& a, int max_degree) {
  return minimal_polynomial(Complex(a, Real::with_bits(a.bits())), max_degree);
}

std::optional<std::vector<mpq_class>> express_in_basis(const Complex& a, const std::vector<Complex>& basis,
                                                       const mpz_class& denominator_bound) {
  std::vector<Complex> x{a};
  x.insert(x.end(), basis.begin(), basis.end());
  RelationCandidate cand = find_relation(x, {});
  if (!cand.accepted) return std::nullopt;
  if (cand.c[0] == 0) throw DegenerateRelation("express_in_basis: basis elements are linearly dependent");
  std::vector<mpq_class> q;
  mpz_class den = 1;
  for (std::size_t j = 1; j < cand.c.size(); ++j) {
    mpq_class v(-cand.c[j], cand.c[0]);
    v.canonicalize();
    den = lcm(den, v.get_den());
    q.push_back(v);
  }
  if (denominator_bound > 0 && den > denominator_bound) return std::nullopt;
  return q;
}

std::optional<std::vector<mpq_class>> express_in_basis(const Real& a, const std::vector<Real>& basis,
                                                       const mpz_class& denominator_bound) {
  return express_in_basis(Complex(a, Real::with_bits(a.bits())), to_complex(basis), denominator_bound);
}

}  // namespace sicx
