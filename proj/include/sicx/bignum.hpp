#pragma once
/// @file bignum.hpp
/// Arbitrary-precision real and complex scalars over MPFR, dense complex
/// vectors/matrices, and decimal serialization.
///
/// Precision is stated in decimal digits at the API level. New values are
/// created at the thread's working precision (see PrecisionScope); binary
/// operations produce results at the larger operand precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sicx {

long digits_to_bits(long digits);
long bits_to_digits(long bits);

/// Working precision (digits) used for freshly constructed values.
long working_digits();
long working_bits();

/// Sets the working precision for the current thread until destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(long digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_bits_;
};

/// Number of extra digits a stage should request above what its consumer
/// needs (20%).
long with_guard(long digits);

class Real {
 public:
  Real();
  Real(int v);
  Real(long v);
  Real(double v);
  explicit Real(const mpz_class& v);
  explicit Real(const mpq_class& v);
  /// Parses a decimal string at the working precision.
  explicit Real(const std::string& s);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  ~Real();

  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;

  static Real with_bits(long bits);

  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  long digits() const { return bits_to_digits(bits()); }
  /// Changes precision, rounding the stored value.
  void set_bits(long bits);

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long k);
  Real& operator/=(long k);
  Real operator-() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log10 |x| as a double; -inf for zero.
  double log10_abs() const;
  mpz_class round_to_integer() const;
  mpz_class floor_to_integer() const;

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long k);
Real operator*(long k, const Real& a);
Real operator/(const Real& a, long k);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

Real sqrt(const Real& x);
Real abs(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
Real pow(const Real& x, const Real& y);
Real max(const Real& a, const Real& b);
Real pi();
/// 10^k at working precision.
Real pow10(long k);

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(const Real& r) : re(r), im(Real::with_bits(r.bits())) {}
  Complex(const Real& r, const Real& i) : re(r), im(i) {}
  Complex(long r) : re(r), im(0L) {}
  Complex(int r) : re(static_cast<long>(r)), im(0L) {}

  long bits() const { return re.bits() > im.bits() ? re.bits() : im.bits(); }
  void set_bits(long b) {
    re.set_bits(b);
    im.set_bits(b);
  }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& o);
  Complex operator-() const { return Complex(-re, -im); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);

Complex conj(const Complex& z);
/// |z|^2
Real norm(const Complex& z);
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex polar(const Real& r, const Real& theta);
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, long n);
/// Principal n-th root.
Complex nth_root(const Complex& z, long n);

/// e^{2 pi i k/m}.
Complex root_of_unity(long k, long m);
/// tau = -e^{i pi/d}, a 2d-th root of unity.
Complex tau_root(long d);
/// omega = e^{2 pi i/d}.
Complex omega_root(long d);

using CVector = std::vector<Complex>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  CMatrix adjoint() const;
  CMatrix conjugate() const;
  Complex trace() const;
  /// max |entry|
  Real max_abs() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const Complex& s, const CMatrix& a);
CVector operator*(const CMatrix& a, const CVector& v);

Complex dot(const CVector& a, const CVector& b);  // sum conj(a_i) b_i
Real vector_norm(const CVector& v);

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearSolution {
  CVector x;
  /// 1-norm condition number estimate ||B||_1 ||B^-1||_1.
  double condition = 0.0;
  Real residual;
};

/// Solves Bx = v by partial-pivot Gaussian elimination.
LinearSolution solve_linear(const CMatrix& B, const CVector& v);
CMatrix inverse(const CMatrix& B);

/// Decimal text: sign, integer part, '.', fraction, optional exponent.
/// Enough digits are written for an exact round trip at the value's
/// precision unless digits > 0 is given.
std::string to_decimal(const Real& x, long digits = 0);
/// Parses at the given precision in bits (working precision if 0).
Real parse_real(const std::string& s, long bits = 0);

std::ostream& operator<<(std::ostream& os, const Real& x);
std::ostream& operator<<(std::ostream& os, const Complex& z);

}  // namespace sicx
