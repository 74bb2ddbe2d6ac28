#pragma once
/// @file heisenberg.hpp
/// Weyl-Heisenberg displacement operators, Clifford unitaries, overlap
/// tables and the operator expansion in the displacement basis.
///
/// Conventions: X|r> = |r+1>, Z|r> = w^r |r>, D_p = t^{p1 p2} X^{p1} Z^{p2}
/// with t = -e^{i pi/d}, w = t^2. Overlaps are chi_p = Tr(D_p Pi) =
/// <psi|D_p|psi> for Pi = |psi><psi| (no conjugation).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sicx/bignum.hpp"
#include "sicx/modring.hpp"

namespace sicx {

/// Powers of tau for one dimension at one precision: tau^k for k mod 2d.
class TauPowers {
 public:
  TauPowers(i64 d, long bits);
  const Complex& operator()(i64 k) const { return pw_[static_cast<std::size_t>(mod(k, 2 * d_))]; }
  i64 d() const { return d_; }

 private:
  i64 d_;
  std::vector<Complex> pw_;
};

struct DisplacementOp {
  IndexPair p;
  i64 d = 0;
  CMatrix matrix;
};

struct CliffordOp {
  ModMatrix F;
  IndexPair p;
  bool antiunitary = false;
  /// For antiunitary ops this is U_{F J}; the action is v -> U conj(v).
  CMatrix matrix;
  /// Applies the operator to a vector.
  CVector apply(const CVector& v) const;
};

/// D_p as an explicit matrix.
DisplacementOp displacement(const IndexPair& p, i64 d);
/// D_p psi without forming the matrix.
CVector apply_displacement(const IndexPair& p, const CVector& psi, const TauPowers& tw);

/// The Clifford unitary of F in SL(2, Z/d'Z) with the canonical phase.
/// Matrices whose upper-right entry is not a unit are split into a product
/// F = F1 [[0,-1],[1,k]] with the first valid k.
CliffordOp symplectic_unitary(const ModMatrix& F, i64 d);
/// The antiunitary for det F = -1: U_{F J} after complex conjugation.
CliffordOp antiunitary_extend(const ModMatrix& F, i64 d);
/// Dispatches on the determinant.
CliffordOp clifford_op(const ModMatrix& F, i64 d);
void clear_clifford_cache();

struct Fiducial {
  i64 d = 0;
  CVector v;
  long digits = 0;
  /// "fz", "fa" or "none".
  std::string symmetry = "none";
  std::string orbit_label;
  std::uint64_t seed = 0;
  /// Max over p != 0 mod d of |(d+1)|chi_p|^2 - 1|, as log10.
  double log10_error = 0.0;
};

class OverlapTable {
 public:
  OverlapTable() = default;
  OverlapTable(i64 d, long digits);

  i64 d() const { return d_; }
  i64 dp() const { return dp_; }
  long digits() const { return digits_; }
  Complex& at(i64 p1, i64 p2) { return v_[static_cast<std::size_t>(mod(p1, dp_) * dp_ + mod(p2, dp_))]; }
  const Complex& at(i64 p1, i64 p2) const {
    return v_[static_cast<std::size_t>(mod(p1, dp_) * dp_ + mod(p2, dp_))];
  }
  Complex& at(const IndexPair& p) { return at(p.p1, p.p2); }
  const Complex& at(const IndexPair& p) const { return at(p.p1, p.p2); }

 private:
  i64 d_ = 0, dp_ = 0;
  long digits_ = 0;
  std::vector<Complex> v_;
};

/// chi_p = <psi|D_p|psi> over all p mod d'.
OverlapTable overlaps(const CVector& psi, i64 d);
OverlapTable overlaps(const Fiducial& fid);
/// A = (1/d) sum_{p mod d} Tr(D_p^dagger A) D_p with Tr(D_p^dagger A) = chi_{-p}.
CMatrix reconstruct_operator(const OverlapTable& table);
/// Max over p != 0 mod d of |(d+1)|chi_p|^2 - 1|.
Real sic_error(const OverlapTable& table);

/// Symplectic form <p,q> = p2 q1 - p1 q2 with D_p D_q = tau^{<p,q>} D_{p+q}.
i64 symplectic_form(const IndexPair& p, const IndexPair& q);

}  // namespace sicx
