#include "sicx/bignum.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

namespace sicx {

namespace {
thread_local long g_work_bits = 256;

long max_bits(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }
}  // namespace

long digits_to_bits(long digits) {
  return static_cast<long>(std::ceil(static_cast<double>(digits) * 3.321928094887362)) + 8;
}

long bits_to_digits(long bits) {
  return static_cast<long>(std::floor(static_cast<double>(bits > 8 ? bits - 8 : bits) * 0.30102999566398120));
}

long working_digits() { return bits_to_digits(g_work_bits); }
long working_bits() { return g_work_bits; }

PrecisionScope::PrecisionScope(long digits) : saved_bits_(g_work_bits) {
  g_work_bits = digits_to_bits(std::max(digits, 5L));
}

PrecisionScope::~PrecisionScope() { g_work_bits = saved_bits_; }

long with_guard(long digits) { return digits + (digits + 4) / 5; }

// ---- Real -------------------------------------------------------------

Real::Real() {
  mpfr_init2(v_, g_work_bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(int v) : Real(static_cast<long>(v)) {}

Real::Real(long v) {
  mpfr_init2(v_, g_work_bits);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(double v) {
  mpfr_init2(v_, g_work_bits);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(const mpz_class& v) {
  mpfr_init2(v_, g_work_bits);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& v) {
  mpfr_init2(v_, g_work_bits);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const std::string& s) {
  mpfr_init2(v_, g_work_bits);
  if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(v_))
    throw std::invalid_argument("bad decimal: " + s);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

Real::~Real() { mpfr_clear(v_); }

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real Real::with_bits(long bits) {
  Real r;
  mpfr_set_prec(r.v_, bits);
  mpfr_set_zero(r.v_, 1);
  return r;
}

void Real::set_bits(long bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

namespace {
void widen(Real& a, const Real& b) {
  if (b.bits() > a.bits()) a.set_bits(b.bits());
}
}  // namespace

Real& Real::operator+=(const Real& o) {
  widen(*this, o);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  widen(*this, o);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  widen(*this, o);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  widen(*this, o);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long k) {
  mpfr_mul_si(v_, v_, k, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long k) {
  mpfr_div_si(v_, v_, k, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

double Real::log10_abs() const {
  if (mpfr_zero_p(v_)) return -INFINITY;
  long e;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398120;
}

mpz_class Real::round_to_integer() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

mpz_class Real::floor_to_integer() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

Real operator+(const Real& a, const Real& b) {
  Real r = Real::with_bits(max_bits(a, b));
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r = Real::with_bits(max_bits(a, b));
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r = Real::with_bits(max_bits(a, b));
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r = Real::with_bits(max_bits(a, b));
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long k) {
  Real r(a);
  r *= k;
  return r;
}
Real operator*(long k, const Real& a) { return a * k; }
Real operator/(const Real& a, long k) {
  Real r(a);
  r /= k;
  return r;
}
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.raw(), b.raw()); }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.raw(), b.raw()); }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.raw(), b.raw()); }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.raw(), b.raw()); }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()); }

#define SICX_UNARY(name, fn)                  \
  Real name(const Real& x) {                  \
    Real r = Real::with_bits(x.bits());       \
    fn(r.raw(), x.raw(), MPFR_RNDN);          \
    return r;                                 \
  }
SICX_UNARY(sqrt, mpfr_sqrt)
SICX_UNARY(abs, mpfr_abs)
SICX_UNARY(exp, mpfr_exp)
SICX_UNARY(log, mpfr_log)
SICX_UNARY(sin, mpfr_sin)
SICX_UNARY(cos, mpfr_cos)
#undef SICX_UNARY

Real atan2(const Real& y, const Real& x) {
  Real r = Real::with_bits(max_bits(x, y));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r = Real::with_bits(x.bits());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r = Real::with_bits(max_bits(x, y));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real pow10(long k) {
  Real r(10L);
  mpfr_pow_si(r.raw(), r.raw(), k, MPFR_RNDN);
  return r;
}

// ---- Complex ----------------------------------------------------------

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}
Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}
Complex& Complex::operator*=(const Real& o) {
  re *= o;
  im *= o;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
Complex operator*(const Complex& a, const Complex& b) {
  return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
Complex operator/(const Complex& a, const Complex& b) {
  Real n = norm(b);
  return Complex((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}
Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
Complex operator*(const Real& a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z) {
  Real r = Real::with_bits(z.bits());
  mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
  return r;
}
Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex polar(const Real& r, const Real& theta) {
  Real s = Real::with_bits(theta.bits()), c = Real::with_bits(theta.bits());
  mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
  return Complex(r * c, r * s);
}

Complex sqrt(const Complex& z) {
  Real r = abs(z);
  if (r.is_zero()) return z;
  Real a = sqrt((r + abs(z.re)) / 2L);
  if (z.re.sign() >= 0) return Complex(a, z.im / (a * 2L));
  Real b = z.im.sign() >= 0 ? a : -a;
  return Complex(abs(z.im) / (a * 2L), b);
}

Complex pow(const Complex& z, long n) {
  if (n < 0) return Complex(Real(1L)) / pow(z, -n);
  Complex result(Real::with_bits(z.bits()) + Real(1L), Real::with_bits(z.bits()));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

Complex nth_root(const Complex& z, long n) {
  Real r = abs(z);
  if (r.is_zero()) return z;
  Real rr = Real::with_bits(r.bits());
  mpfr_rootn_ui(rr.raw(), r.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
  return polar(rr, arg(z) / n);
}

Complex root_of_unity(long k, long m) {
  if (m < 1) throw std::invalid_argument("root_of_unity: m must be positive");
  k %= m;
  if (k < 0) k += m;
  if (k == 0) return Complex(Real(1L), Real(0L));
  if (2 * k == m) return Complex(Real(-1L), Real(0L));
  if (4 * k == m) return Complex(Real(0L), Real(1L));
  if (4 * k == 3 * m) return Complex(Real(0L), Real(-1L));
  Real theta = pi() * (2 * k);
  theta /= m;
  return polar(Real(1L), theta);
}

Complex tau_root(long d) { return root_of_unity(d + 1, 2 * d); }
Complex omega_root(long d) { return root_of_unity(1, d); }

// ---- Matrices ---------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1L);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::conjugate() const {
  CMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = sicx::conj(a_[i]);
  return m;
}

Complex CMatrix::trace() const {
  Complex t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

Real CMatrix::max_abs() const {
  Real m(0L);
  for (const auto& z : a_) {
    Real a = abs(z);
    if (a > m) m = a;
  }
  return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  CMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex& aik = a(i, k);
      if (aik.re.is_zero() && aik.im.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) + b(i, j);
  return m;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) - b(i, j);
  return m;
}

CMatrix operator*(const Complex& s, const CMatrix& a) {
  CMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = s * a(i, j);
  return m;
}

CVector operator*(const CMatrix& a, const CVector& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix/vector shape mismatch");
  CVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

Complex dot(const CVector& a, const CVector& b) {
  Complex s;
  for (std::size_t i = 0; i < a.size(); ++i) s += conj(a[i]) * b[i];
  return s;
}

Real vector_norm(const CVector& v) {
  Real s(0L);
  for (const auto& z : v) s += norm(z);
  return sqrt(s);
}

namespace {

// LU with partial pivoting; returns permutation and overwrites A.
void lu_decompose(CMatrix& A, std::vector<std::size_t>& perm) {
  const std::size_t n = A.rows();
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Real scale = A.max_abs();
  Real tiny = scale * pow10(-(A(0, 0).re.digits() - 5));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    Real best = norm(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      Real v = norm(A(i, k));
      if (v > best) {
        best = std::move(v);
        piv = i;
      }
    }
    if (sqrt(best) <= tiny) throw SingularMatrixError("matrix is singular to working precision");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    Complex inv = Complex(Real(1L)) / A(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      Complex f = A(i, k) * inv;
      A(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
}

CVector lu_solve(const CMatrix& LU, const std::vector<std::size_t>& perm, const CVector& v) {
  const std::size_t n = LU.rows();
  CVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = v[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= LU(i, j) * y[j];
    y[i] = s;
  }
  CVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= LU(ii, j) * x[j];
    x[ii] = s / LU(ii, ii);
  }
  return x;
}

double one_norm(const CMatrix& A) {
  double best = 0;
  for (std::size_t j = 0; j < A.cols(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < A.rows(); ++i) s += abs(A(i, j)).to_double();
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

CMatrix inverse(const CMatrix& B) {
  if (B.rows() != B.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = B.rows();
  CMatrix LU = B;
  std::vector<std::size_t> perm;
  lu_decompose(LU, perm);
  CMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = Complex(i == j ? 1L : 0L);
    CVector x = lu_solve(LU, perm, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
  }
  return inv;
}

LinearSolution solve_linear(const CMatrix& B, const CVector& v) {
  if (B.rows() != B.cols() || B.rows() != v.size())
    throw std::invalid_argument("solve_linear: shape mismatch");
  CMatrix LU = B;
  std::vector<std::size_t> perm;
  lu_decompose(LU, perm);
  LinearSolution sol;
  sol.x = lu_solve(LU, perm, v);
  CMatrix inv(B.rows(), B.rows());
  for (std::size_t j = 0; j < B.rows(); ++j) {
    CVector e(B.rows());
    for (std::size_t i = 0; i < B.rows(); ++i) e[i] = Complex(i == j ? 1L : 0L);
    CVector x = lu_solve(LU, perm, e);
    for (std::size_t i = 0; i < B.rows(); ++i) inv(i, j) = x[i];
  }
  sol.condition = one_norm(B) * one_norm(inv);
  CVector r = B * sol.x;
  Real worst(0L);
  for (std::size_t i = 0; i < r.size(); ++i) {
    Real a = abs(r[i] - v[i]);
    if (a > worst) worst = a;
  }
  sol.residual = worst;
  return sol;
}

// ---- Decimal I/O ------------------------------------------------------

std::string to_decimal(const Real& x, long digits) {
  if (mpfr_zero_p(x.raw())) return "0.0";
  if (!mpfr_number_p(x.raw())) throw std::invalid_argument("non-finite value");
  std::size_t n = digits > 0 ? static_cast<std::size_t>(digits)
                             : 1 + static_cast<std::size_t>(std::ceil(x.bits() * 0.30102999566398120));
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, n, x.raw(), MPFR_RNDN);
  std::string mant(s);
  mpfr_free_str(s);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  // value = 0.mant * 10^e ; write as d.ddd e(e-1)
  std::string out = sign + mant.substr(0, 1) + "." + (mant.size() > 1 ? mant.substr(1) : "0");
  long ex = static_cast<long>(e) - 1;
  if (ex != 0) out += "e" + std::to_string(ex);
  return out;
}

Real parse_real(const std::string& s, long bits) {
  Real r = Real::with_bits(bits > 0 ? bits : working_bits());
  char* end = nullptr;
  if (mpfr_strtofr(r.raw(), s.c_str(), &end, 10, MPFR_RNDN), end == s.c_str() || *end != '\0')
    throw std::invalid_argument("bad decimal: " + s);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  return os << to_decimal(x, os.precision() > 0 ? os.precision() : 0);
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << "(" << z.re << ", " << z.im << ")";
}

}  // namespace sicx
