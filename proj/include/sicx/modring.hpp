#pragma once
/// @file modring.hpp
/// 2x2 matrices over Z/mZ and the finite groups built from them: the
/// Zauner matrix, F_a, centralizers, the chi splitting for d = 3n, and
/// orbits on index pairs.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sicx {

using i64 = std::int64_t;

i64 mod(i64 a, i64 m);
i64 gcd(i64 a, i64 b);
/// Inverse of a mod m; throws if a is not a unit.
i64 inv_mod(i64 a, i64 m);

struct IndexPair {
  i64 p1 = 0, p2 = 0;
  auto operator<=>(const IndexPair&) const = default;
};

struct ModMatrix {
  i64 a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]
  i64 m = 1;

  ModMatrix() = default;
  ModMatrix(i64 a_, i64 b_, i64 c_, i64 d_, i64 m_);

  static ModMatrix identity(i64 m) { return ModMatrix(1, 0, 0, 1, m); }
  static ModMatrix scalar(i64 s, i64 m) { return ModMatrix(s, 0, 0, s, m); }

  i64 det() const;
  i64 trace() const;
  bool invertible() const;
  ModMatrix inverse() const;
  ModMatrix pow(i64 e) const;
  /// The same entries reduced to a divisor of the modulus.
  ModMatrix reduce(i64 m2) const;
  IndexPair apply(const IndexPair& p) const;
  bool is_identity() const { return a == 1 % m && b == 0 && c == 0 && d == 1 % m; }
  std::string str() const;

  auto operator<=>(const ModMatrix& o) const {
    if (auto c0 = m <=> o.m; c0 != 0) return c0;
    if (auto c1 = a <=> o.a; c1 != 0) return c1;
    if (auto c2 = b <=> o.b; c2 != 0) return c2;
    if (auto c3 = c <=> o.c; c3 != 0) return c3;
    return d <=> o.d;
  }
  bool operator==(const ModMatrix& o) const = default;
};

ModMatrix operator*(const ModMatrix& x, const ModMatrix& y);
ModMatrix operator+(const ModMatrix& x, const ModMatrix& y);
ModMatrix operator*(i64 s, const ModMatrix& x);

/// Finite matrix group, elements sorted lexicographically on (a,b,c,d).
class MatGroup {
 public:
  MatGroup() = default;
  /// Takes an explicit element list; sorts and deduplicates. Closure is
  /// checked with is_closed(), not assumed.
  MatGroup(i64 m, std::vector<ModMatrix> elements);
  /// Closure of the generators under multiplication.
  static MatGroup generated(i64 m, const std::vector<ModMatrix>& gens);

  i64 modulus() const { return m_; }
  std::size_t order() const { return el_.size(); }
  const std::vector<ModMatrix>& elements() const { return el_; }
  bool contains(const ModMatrix& x) const;
  bool is_closed() const;
  bool is_abelian() const;
  bool subset_of(const MatGroup& other) const;
  bool operator==(const MatGroup& o) const { return m_ == o.m_ && el_ == o.el_; }

 private:
  i64 m_ = 1;
  std::vector<ModMatrix> el_;
};

MatGroup intersect(const MatGroup& x, const MatGroup& y);

i64 dprime(i64 d);
ModMatrix zauner_matrix(i64 d);
ModMatrix fa_matrix(i64 d);
/// J = diag(1,-1) mod m.
ModMatrix j_matrix(i64 m);

/// Splitting data for d = 3n with n = 1 mod 3.
struct ChiSplit {
  i64 d = 0, n = 0, nprime = 0, dprime = 0;
};
ChiSplit chi_split(i64 d);
/// chi(M) = ([[a,3b],[(2n+1)c/3,d]] mod n', M mod 3).
std::pair<ModMatrix, ModMatrix> chi_iso(const ModMatrix& M, i64 d);
/// Inverse of chi via CRT.
ModMatrix chi_inverse(const ModMatrix& first, const ModMatrix& second, i64 d);
/// The image of F_a in GL(2, Z/n'Z), [[1,n+9],[(4n-1)/3,n-2]].
ModMatrix fa_bar(i64 d);

/// { rI + sF_a : invertible } for d = 3 mod 9.
MatGroup h2_group(i64 d);
/// H_2 = ((2n+1)/3) F_a + ((4n-1)/3) I.
ModMatrix h2_generator(i64 d);
/// { rI + sH : invertible } for any H.
MatGroup linear_span_group(const ModMatrix& H);

/// The three subgroups of GL(2, Z/3Z) of orders 4, 6 and 8.
MatGroup hbar_group(int j);

struct MaximalAbelian {
  MatGroup h4, h6, h8;
};
MaximalAbelian maximal_abelian_subgroups(i64 d);

/// Every invertible 2x2 matrix mod m.
std::vector<ModMatrix> gl2_elements(i64 m);
/// Matrices with determinant +-1 mod m.
std::vector<ModMatrix> esl2_elements(i64 m);
MatGroup centralizer(const ModMatrix& F, i64 m);
/// Common centralizer of a set of matrices.
MatGroup centralizer(const std::vector<ModMatrix>& Fs, i64 m);
ModMatrix symmetry_image(const ModMatrix& F);

using Orbit = std::vector<IndexPair>;
/// Orbits of G acting on (Z/d'Z)^2, each sorted, listed by smallest member.
std::vector<Orbit> orbits(const MatGroup& G, i64 dp);

/// Cosets of a normal subgroup S inside G, each keyed by its smallest
/// element.
class Quotient {
 public:
  Quotient(const MatGroup& G, const MatGroup& S);
  std::size_t order() const { return reps_.size(); }
  const std::vector<ModMatrix>& reps() const { return reps_; }
  /// Index of the coset containing x.
  std::size_t coset_of(const ModMatrix& x) const;
  std::size_t mul(std::size_t i, std::size_t j) const { return table_[i * reps_.size() + j]; }
  std::size_t identity() const { return id_; }
  std::size_t element_order(std::size_t i) const;

 private:
  std::vector<ModMatrix> reps_;
  std::map<ModMatrix, std::size_t> index_;
  std::vector<std::size_t> table_;
  std::size_t id_ = 0;
};

}  // namespace sicx
