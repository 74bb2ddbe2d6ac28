#pragma once
/// @file formats.hpp
/// Text artifacts: fiducial and overlap files with a version header that
/// records the configuration, decimal value lists, and the JSON emitted by
/// the relation and minimal-polynomial commands.

#include <stdexcept>
#include <string>
#include <vector>

#include "sicx/heisenberg.hpp"
#include "sicx/lattice.hpp"

namespace sicx {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// `SIC-FIDUCIAL v1 d=<d> prec=<digits> symmetry=<tag> seed=<rng> error=<log10>`
/// followed by d lines `re im`.
std::string write_fiducial(const Fiducial& f);
Fiducial read_fiducial(const std::string& text);

/// `SIC-OVERLAPS v1 d=<d> prec=<digits>` followed by d'^2 lines `p1 p2 re im`.
std::string write_overlaps(const OverlapTable& t);
OverlapTable read_overlaps(const std::string& text);

/// One value per line, `re` or `re im`; blank lines and lines starting with
/// '#' are skipped. digits = 0 infers the precision from the longest entry.
std::vector<Complex> read_decimal_values(const std::string& text, long digits = 0);
/// Digits carried by the longest decimal entry in the text.
long decimal_digits_in(const std::string& text);

/// {coefficients, residual, precision_used} for a relation among inputs.
std::string relation_json(const RelationResult& r);
/// {coefficients (ascending), degree, residual, precision_used}.
std::string minpoly_json(const IntPolynomial& p, const Complex& value, long precision_used);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sicx
