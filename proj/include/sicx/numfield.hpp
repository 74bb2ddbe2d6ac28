#pragma once
/// @file numfield.hpp
/// Exact arithmetic in towers Q = K_0 < K_1 < ... < K_L of number fields,
/// each K_l = K_{l-1}(theta_l) given by a monic minimal polynomial over
/// K_{l-1} and a chosen complex embedding.
///
/// Elements are rational coordinate vectors on the power-product basis
/// theta_1^{e_1} ... theta_L^{e_L}, flat index sum_l e_l * D_{l-1} where
/// D_l = [K_l : Q]; an element of K_l is therefore a prefix of length D_l.

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sicx/bignum.hpp"

namespace sicx {

using QVec = std::vector<mpq_class>;

struct Level {
  std::string tag;
  std::size_t degree = 0;
  /// Monic minimal polynomial, ascending; coefficient i is a QVec of
  /// length D_{l-1}. The last entry is 1.
  std::vector<QVec> minpoly;
  /// Index of the embedding among the roots sorted by (re, im).
  int root_index = 0;
  Complex embedding;
};

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

class FieldTower {
 public:
  static TowerPtr rationals(long digits);

  std::size_t height() const { return levels_.size(); }
  /// [K_l : Q]; degree(0) = 1.
  std::size_t degree(std::size_t l) const { return dims_[l]; }
  std::size_t degree() const { return dims_.back(); }
  const Level& level(std::size_t l) const { return *levels_[l - 1]; }
  long digits() const { return digits_; }
  /// Embedding values of theta_1..theta_L.
  std::vector<Complex> roots() const;
  /// True when this tower's levels are a prefix of other's.
  bool is_prefix_of(const FieldTower& other) const;

  // flat-vector arithmetic at level l (vectors of length D_l)
  QVec mul(const QVec& a, const QVec& b, std::size_t l) const;
  QVec inv(const QVec& a, std::size_t l) const;
  /// Evaluates a length-D_l vector with the given generator values.
  Complex eval(const QVec& a, std::size_t l, const std::vector<Complex>& roots) const;

 private:
  friend TowerPtr adjoin_level(const TowerPtr&, Level);
  std::vector<std::shared_ptr<const Level>> levels_;
  std::vector<std::size_t> dims_{1};
  long digits_ = 0;
};

class AlgebraicNumber {
 public:
  AlgebraicNumber() = default;
  AlgebraicNumber(TowerPtr t, QVec c);

  static AlgebraicNumber rational(const TowerPtr& t, const mpq_class& q);
  /// theta_l as an element of t.
  static AlgebraicNumber generator(const TowerPtr& t, std::size_t l);

  const TowerPtr& tower() const { return t_; }
  const QVec& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;
  /// Smallest level containing the element.
  std::size_t level() const;

  Complex embed() const;
  Complex eval(const std::vector<Complex>& roots) const;
  AlgebraicNumber inverse() const;
  /// Same element in a tower extending this one.
  AlgebraicNumber lift(const TowerPtr& bigger) const;
  std::string str() const;

 private:
  TowerPtr t_;
  QVec c_;
};

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a);
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator*(const mpq_class& q, const AlgebraicNumber& a);
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber pow(const AlgebraicNumber& a, long n);

/// Evaluates sum_i p[i] x^i exactly.
AlgebraicNumber eval_poly(const std::vector<AlgebraicNumber>& p, const AlgebraicNumber& x);

struct NotIrreducible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoRootNearSelector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdjoinOptions {
  /// Largest distance from the selector to the chosen root, relative to
  /// max(1, |root|).
  double selector_tolerance = 1e-8;
  /// Look for a factor of lower degree through the chosen root.
  bool check_irreducible = true;
};

/// Extends the tower by a root of minpoly (ascending coefficients in the
/// base tower, any nonzero leading coefficient) closest to selector.
TowerPtr adjoin(const TowerPtr& base, const std::string& tag, const std::vector<AlgebraicNumber>& minpoly,
                const Complex& selector, const AdjoinOptions& opt = {});
/// Same, choosing the root by its index in (re, im) order.
TowerPtr adjoin_index(const TowerPtr& base, const std::string& tag, const std::vector<AlgebraicNumber>& minpoly,
                      int root_index, const AdjoinOptions& opt = {});
/// Rational-coefficient convenience form.
TowerPtr adjoin(const TowerPtr& base, const std::string& tag, const std::vector<mpq_class>& minpoly,
                const Complex& selector, const AdjoinOptions& opt = {});

/// All roots of a complex polynomial (ascending coefficients) at the given
/// precision, sorted by (re, im).
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, long digits);

/// Embeddings of the power-product basis, in flat index order.
std::vector<Complex> basis_embeddings(const FieldTower& t, std::size_t l);
/// Element with the given flat coordinates (padded with zeros).
AlgebraicNumber from_coordinates(const TowerPtr& t, const std::vector<mpq_class>& q);
/// Exact element whose embedding is value, found by an integer relation on
/// the basis of level l (0 = top); none when no relation is accepted.
std::optional<AlgebraicNumber> recognize(const TowerPtr& t, const Complex& value, std::size_t l = 0);

/// Monic minimal polynomial over the top field of t of a numeric value,
/// found as the first relation x^k = sum_{j<k} c_j x^j with c_j in the
/// field; ascending coefficients, none up to max_degree.
std::optional<std::vector<AlgebraicNumber>> minimal_polynomial_over(const TowerPtr& t, const Complex& value,
                                                                   int max_degree);
/// Exact monic minimal polynomial over Q, ascending.
QVec exact_minimal_polynomial(const AlgebraicNumber& x);
/// Human-readable polynomial with rational coefficients, e.g. "x^2 - 3".
std::string rational_polynomial_str(const QVec& c);

/// Generator values recomputed by Newton's method at higher precision.
std::vector<Complex> refined_roots(const FieldTower& t, long digits);

/// Automorphism of the top field fixing K_f, stored as the exact images of
/// theta_{f+1..L}.
class EmbeddingAutomorphism {
 public:
  EmbeddingAutomorphism() = default;
  EmbeddingAutomorphism(TowerPtr t, std::size_t fixed, std::vector<AlgebraicNumber> images);

  static EmbeddingAutomorphism identity(const TowerPtr& t, std::size_t fixed = 0);

  const TowerPtr& tower() const { return t_; }
  std::size_t fixed_level() const { return fixed_; }
  /// Image of theta_l for l = 1..L.
  const AlgebraicNumber& image(std::size_t l) const { return images_[l - 1]; }
  /// Embeddings of the generator images.
  std::vector<Complex> image_roots() const;

  AlgebraicNumber apply(const AlgebraicNumber& x) const;
  Complex apply_numeric(const AlgebraicNumber& x) const;
  /// (this o other)(x) = this(other(x)).
  EmbeddingAutomorphism compose(const EmbeddingAutomorphism& other) const;
  bool is_identity() const;
  bool operator==(const EmbeddingAutomorphism& o) const;
  long order() const;

 private:
  TowerPtr t_;
  std::size_t fixed_ = 0;
  std::vector<AlgebraicNumber> images_;
};

/// All automorphisms of the top field fixing K_fixed.
std::vector<EmbeddingAutomorphism> automorphisms(const TowerPtr& t, std::size_t fixed = 0);

/// The automorphism acting on embeddings as complex conjugation.
EmbeddingAutomorphism conjugation_op(const TowerPtr& t);

/// Tower JSON: {"digits", "levels": [{"tag", "minpoly", "root_index",
/// "embedding": [re, im]}]} with rationals written as "p/q".
std::string tower_to_json(const FieldTower& t);
TowerPtr tower_from_json(const std::string& text);
std::vector<std::string> coords_to_strings(const QVec& c);
QVec coords_from_strings(const std::vector<std::string>& s);

}  // namespace sicx
