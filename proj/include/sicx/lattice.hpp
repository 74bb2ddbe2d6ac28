#pragma once
/// @file lattice.hpp
/// Integer relations, minimal polynomials and basis expansion of
/// high-precision numbers, all driven by one LLL engine.
///
/// Relations are searched on the first half of the available digits and
/// accepted only if the residual at full precision is below 10^{-0.7 r}
/// (r = input digits) and the coefficient norm is below 10^{0.3 r}.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sicx/bignum.hpp"

namespace sicx {

struct PrecisionRefused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateRelation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using IntRow = std::vector<mpz_class>;

/// In-place LLL reduction of integer row vectors with a floating
/// Gram-Schmidt at fp_bits of precision. Returns the number of swaps.
long lll_reduce(std::vector<IntRow>& rows, long fp_bits, double delta = 0.99);

struct RelationResult {
  /// (m0, m1, ..., mn) with m0 x0 - sum_j mj xj ~ 0, gcd 1, first nonzero
  /// entry positive.
  IntRow coefficients;
  Real residual;
  long precision_used = 0;
  double log10_norm = 0.0;
};

/// Raw outcome of one lattice search, accepted or not.
struct RelationCandidate {
  /// c with sum_i c_i x_i ~ 0.
  IntRow c;
  Real residual;
  double log10_norm = 0.0;
  bool accepted = false;
  long search_digits = 0;
  long input_digits = 0;
};

struct RelationOptions {
  /// Largest |coefficient| allowed, in digits; <= 0 means the most the
  /// precision supports.
  long max_height_digits = 0;
  /// Skip the refusal check (used for scoring, never for acceptance).
  bool allow_low_precision = false;
  /// Stop at the first verified relation instead of reducing at full scale.
  bool early_exit = true;
};

/// Shortest relation candidate among complex inputs (real and imaginary
/// parts are separate constraints).
RelationCandidate find_relation(const std::vector<Complex>& x, const RelationOptions& opt = {});

/// Digits of height supported for n numbers by r input digits.
long supported_height_digits(long input_digits, std::size_t count, int constraints);

std::optional<RelationResult> integer_relation(const std::vector<Real>& x, long max_height_digits);
std::optional<RelationResult> integer_relation(const std::vector<Complex>& x, long max_height_digits);

struct IntPolynomial {
  /// Ascending coefficients, content 1, positive leading coefficient.
  IntRow c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  Complex eval(const Complex& x) const;
  std::string str() const;
  bool operator==(const IntPolynomial& o) const { return c == o.c; }
};

/// Normalizes content and sign of an integer coefficient vector.
IntPolynomial make_int_polynomial(IntRow c);

/// Lowest-degree integer polynomial vanishing at a, degree <= max_degree.
std::optional<IntPolynomial> minimal_polynomial(const Complex& a, int max_degree);
std::optional<IntPolynomial> minimal_polynomial(const Real& a, int max_degree);

/// Rationals q with a = sum q_j basis_j; none when no relation is found or
/// the common denominator exceeds the bound (0 = unbounded).
std::optional<std::vector<mpq_class>> express_in_basis(const Complex& a, const std::vector<Complex>& basis,
                                                       const mpz_class& denominator_bound = 0);
std::optional<std::vector<mpq_class>> express_in_basis(const Real& a, const std::vector<Real>& basis,
                                                       const mpz_class& denominator_bound = 0);

}  // namespace sicx
