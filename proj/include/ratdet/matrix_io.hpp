#pragma once

// Exact matrix ingestion and serialization. Decimal literals are converted to
// rationals digit by digit; no value ever passes through floating point.

#include <gmpxx.h>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ratdet/rational_matrix.hpp"

namespace ratdet {

/// "±ddd.ddd[eE±xx]" (also Fortran-style d/D exponents) as an exact rational.
/// Throws std::invalid_argument on malformed input.
Rational parse_decimal(std::string_view literal);

/// A decimal literal or a fraction "a/b".
Rational parse_literal(std::string_view literal);

/// Exact decimal expansion when the denominator is of the form 2^a·5^b.
/// Throws std::invalid_argument otherwise.
std::string to_decimal_string(const Rational& r);

/// Matrix Market array or coordinate data with an integer or real field and
/// general, symmetric or skew-symmetric storage. Array data is column-major;
/// coordinate data is densified with zeros. Throws ParseError or
/// UnsupportedField.
RationalMatrix parse_matrix_market(std::string_view text);

/// Array/general Matrix Market with exact decimal entries. Throws
/// std::invalid_argument if some entry has no finite decimal expansion.
void write_matrix_market(std::ostream& os, const RationalMatrix& a);

/// One row per line, comma-separated literals ("0.25", "-3/7", "12").
RationalMatrix parse_csv_matrix(std::string_view text);
void write_csv_matrix(std::ostream& os, const RationalMatrix& a);

enum class MatrixFormat { MatrixMarket, Csv };

/// Reads a file; the format defaults to Matrix Market for ".mtx" and CSV
/// otherwise.
RationalMatrix load_matrix(const std::filesystem::path& path);
RationalMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);

/// Best rational approximation of r with denominator at most den_bound
/// (closest convergent or semiconvergent; the smaller denominator on ties).
Rational cf_approximant(const Rational& r, const mpz_class& den_bound);

}  // namespace ratdet
