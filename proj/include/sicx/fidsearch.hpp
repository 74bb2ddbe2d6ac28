#pragma once
/// @file fidsearch.hpp
/// Numerical SIC fiducials: randomized search in low precision, optionally
/// inside an eigenspace of a symmetry unitary, then refinement to many
/// digits, stabilizer detection and strong centring.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sicx/heisenberg.hpp"

namespace sicx {

struct SearchFailure : std::runtime_error {
  SearchFailure(const std::string& what, double best) : std::runtime_error(what), best_log10_error(best) {}
  double best_log10_error;
};

struct RefineFailure : std::runtime_error {
  RefineFailure(const std::string& what, double err, long prec)
      : std::runtime_error(what), log10_error(err), precision(prec) {}
  double log10_error;
  long precision;
};

/// F_z for "fz", F_a for "fa", identity for "none".
ModMatrix symmetry_matrix(i64 d, const std::string& tag);

/// Eigenspace of U_F: eigenvalue and an orthonormal basis (columns).
struct EigenSector {
  Complex eigenvalue;
  CMatrix basis;
  std::size_t dim() const { return basis.cols(); }
};

/// Eigenspaces of U_F at the working precision, largest first.
std::vector<EigenSector> symmetry_sectors(i64 d, const ModMatrix& F);
/// Sector whose projection of v is largest.
std::size_t sector_of(const std::vector<EigenSector>& sectors, const CVector& v);

struct SeedOptions {
  std::string symmetry = "fz";
  int attempts = 20;
  std::uint64_t seed = 1;
};

/// Frame-potential minimization from random starts followed by a short
/// polish; the result has SIC error below 1e-10.
Fiducial seed_search(i64 d, const SeedOptions& opt = {});

/// Gauss-Newton refinement with precision doubling until the SIC error is
/// below 10^{-(target_digits - 10)}.
Fiducial refine(const Fiducial& fid, long target_digits);

/// Recomputes log10_error of a fiducial at its own precision.
double fiducial_error(const Fiducial& fid);

struct StabilizerElement {
  IndexPair p;
  ModMatrix F;
};

/// All D_p U_F fixing the fiducial projector, F from rI + sF (F the
/// symmetry matrix) or from every determinant +-1 matrix when full_sweep.
std::vector<StabilizerElement> detect_stabilizer(const Fiducial& fid, bool full_sweep = false);

struct CentringResult {
  Fiducial fid;
  IndexPair shift;
  /// Largest minimal-polynomial degree among the tested orbit sums.
  int degree = 0;
};

/// For d = 0 mod 3, the displacement D_p with p = 0 mod d/3 whose image has
/// orbit-sum coefficients of lowest degree; identity otherwise.
CentringResult strongly_centre(const Fiducial& fid);

}  // namespace sicx
