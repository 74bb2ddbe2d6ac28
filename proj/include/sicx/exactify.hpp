#pragma once
/// @file exactify.hpp
/// Exact SIC fiducials from numerical ones: orbit polynomials of overlaps,
/// exact lifting of their coefficients to the field E0, the extension E1
/// generated by overlaps, matching Gal(E1/E0) with C(Pi)/S(Pi) (Method 2)
/// or direct recognition of every overlap (Method 1), and exact or
/// ball-arithmetic verification.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sicx/fidsearch.hpp"
#include "sicx/heisenberg.hpp"
#include "sicx/lattice.hpp"
#include "sicx/modring.hpp"
#include "sicx/numfield.hpp"

namespace sicx {

struct ExactifyError : std::runtime_error {
  ExactifyError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage(stage) {}
  std::string stage;
};

struct OrbitPolynomial {
  std::size_t orbit = 0;
  IndexPair representative;
  /// Distinct values over the orbit (cubed when `cubed`).
  std::vector<Complex> values;
  /// Monic, ascending.
  std::vector<Complex> coeffs;
  /// Exact lift over E0; empty until lifted.
  std::vector<AlgebraicNumber> exact;
  bool cubed = false;
  std::size_t degree() const { return values.size(); }
};

/// One polynomial per orbit; values closer than 10^{-digits/2} are equal,
/// values closer than 10^{-digits/4} but not equal raise PrecisionRefused.
std::vector<OrbitPolynomial> build_orbit_polynomials(const OverlapTable& table, const std::vector<Orbit>& orbs,
                                                     bool cube);
std::vector<OrbitPolynomial> build_orbit_polynomials(const OverlapTable& table, const MatGroup& group, bool cube);

struct LiftResult {
  TowerPtr e0;
  std::vector<OrbitPolynomial> polys;
  /// log10 of the largest imaginary part among the numeric coefficients.
  double max_imag_log10 = 0.0;
};

/// Infers E0 from the coefficients (cheapest first) and expresses every
/// coefficient exactly in it.
LiftResult lift_coefficients(std::vector<OrbitPolynomial> polys, long digits, std::size_t max_field_degree = 16);

/// H_2 for d = 3 mod 9.
MatGroup typea_orbit_group(i64 d);

/// Squarefree part of n > 0.
long squarefree_part(long n);

/// Everything derived from a strongly centred numerical fiducial before the
/// overlaps are made exact.
struct FieldData {
  i64 d = 0;
  long digits = 0;
  OverlapTable table;
  MatGroup S, C;
  /// Elements of C fixing every overlap; equals S unless S has antiunitary
  /// elements. Gal(E1/E0) is matched against C/H.
  MatGroup H;
  std::vector<Orbit> orbits;
  std::vector<OrbitPolynomial> polys;
  TowerPtr e0;
  TowerPtr e1;
  std::vector<std::string> log;
};

struct ExactifyOptions {
  int method = 2;
  /// Required log10 gap between the winning permutation and the runner-up;
  /// negative selects 20 * digits / 1000.
  double separation_log10 = -1.0;
  std::size_t max_e0_degree = 16;
  std::size_t max_e1_degree = 64;
  /// Skip strong centring (the input is known to be strongly centred).
  bool assume_centred = false;
};

/// Stabilizer, centralizer, orbit polynomials, E0 and E1.
FieldData prepare_fields(const Fiducial& fid, const ExactifyOptions& opt = {});

struct GaloisMatch {
  /// Gal(E1/E0), fixing the first e0 levels.
  std::vector<EmbeddingAutomorphism> automorphisms;
  /// Coset representative in C(Pi) paired with each automorphism.
  std::vector<ModMatrix> matrices;
  /// log10 of the largest relation norm for the winner and the best loser.
  /// A candidate whose components admit no accepted relation scores at
  /// least 0.3 * digits, the acceptance bound on relation norms.
  double score = 0.0;
  double runner_up = 0.0;
  std::size_t candidates = 0;
};

struct ExactCertificate {
  i64 d = 0;
  long digits = 0;
  int method = 2;
  std::string symmetry;
  IndexPair shift;
  TowerPtr tower;
  std::size_t e0_level = 0;
  std::vector<ModMatrix> stabilizer;
  /// Elements of C(Pi) fixing every overlap.
  std::vector<ModMatrix> kernel;
  /// Orbit representatives (Method 2) or every index mod d' (Method 1).
  std::map<IndexPair, AlgebraicNumber> overlaps;
  GaloisMatch match;
  long sqrt_d = 0;
  bool contains_sqrt_d = false;
  std::vector<std::string> log;
};

struct CertificateInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExactCertificate method1_exactify(const Fiducial& fid, const FieldData& fd);
ExactCertificate method2_exactify(const Fiducial& fid, const FieldData& fd, const ExactifyOptions& opt = {});
/// Strong centring, fields and the selected method.
ExactCertificate exactify(const Fiducial& fid, const ExactifyOptions& opt = {});

/// Every overlap mod d', filled from the stored ones by the Galois match.
std::map<IndexPair, AlgebraicNumber> exact_overlaps(const ExactCertificate& cert);
/// Table with entry G_g p equal to g applied to entry p; checks it against
/// the certificate's own table.
std::map<IndexPair, AlgebraicNumber> galois_transport(const ExactCertificate& cert, const EmbeddingAutomorphism& g);

struct VerificationReport {
  bool passed = false;
  std::string mode;
  std::vector<std::string> checks;
  std::vector<std::string> failures;
  /// Certified mode: log10 of the largest residue radius.
  double radius_log10 = 0.0;
};

VerificationReport verify_exact(const ExactCertificate& cert);
/// Ball-arithmetic evaluation of all SIC residues at the given digits.
VerificationReport verify_certified(const ExactCertificate& cert, long digits);

/// Plain-text summary: field degrees, group orders, matched G matrices.
std::string report(const ExactCertificate& cert);

std::string certificate_to_json(const ExactCertificate& cert, const VerificationReport* verification = nullptr);
ExactCertificate certificate_from_json(const std::string& text);

/// Exact minimal polynomials over Q of all overlaps, sorted (for comparing
/// the two methods).
std::vector<std::string> overlap_minpoly_multiset(const ExactCertificate& cert);

}  // namespace sicx
