#pragma once

// Exact rational and integer matrices, denominator profiles, the two
// preconditionings, homomorphic imaging and determinant bounds.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ratdet/modular.hpp"

namespace ratdet {

/// Canonical fraction: positive denominator, gcd(|num|, den) = 1, 0 is 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long value) : num_(value), den_(1) {}  // NOLINT(implicit)
  explicit Rational(const mpz_class& value) : num_(value), den_(1) {}
  explicit Rational(const mpq_class& value);

  const mpz_class& num() const { return num_; }
  const mpz_class& den() const { return den_; }
  bool is_zero() const { return sgn(num_) == 0; }
  bool is_integer() const { return den_ == 1; }

  mpq_class to_mpq() const;
  /// "n" for integers, "n/d" otherwise.
  std::string to_string() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend Rational canonicalize(mpz_class num, mpz_class den);

 private:
  mpz_class num_;
  mpz_class den_;
};

/// Moves the sign to the numerator and divides out the gcd. Throws
/// ZeroDenominator when den == 0.
Rational canonicalize(mpz_class num, mpz_class den);

std::ostream& operator<<(std::ostream& os, const Rational& r);

template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }
  T& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  std::span<const T> row(std::size_t i) const {
    return std::span<const T>(entries_).subspan(i * dim_, dim_);
  }
  std::span<const T> entries() const { return entries_; }
  std::span<T> entries() { return entries_; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<T> entries_;
};

using RationalMatrix = SquareMatrix<Rational>;
using IntegerMatrix = SquareMatrix<mpz_class>;

RationalMatrix identity_rational(std::size_t dim);

/// Whether Dᵢ clears the rows (Ã = diag(Dᵢ)·A) or the columns (Ã = A·diag(Dⱼ)).
enum class Orientation { Rows, Columns };

struct DenominatorProfile {
  Orientation orientation = Orientation::Rows;
  std::vector<mpz_class> dens;  // lcm of the denominators of each row/column
  mpz_class product;            // D = product of dens
};

DenominatorProfile row_denominators(const RationalMatrix& a);
DenominatorProfile column_denominators(const RationalMatrix& a);
/// Row or column profile, whichever has the smaller product (rows on ties).
DenominatorProfile best_denominators(const RationalMatrix& a);

/// Ã with every row (or column) multiplied by its common denominator, so
/// det(Ã) = D·det(A).
IntegerMatrix precondition_matrix(const RationalMatrix& a,
                                  const DenominatorProfile& profile);

/// Entrywise a/b -> a·b⁻¹ mod p. Throws BadPrime if some b vanishes mod p.
ModMatrix image_rational(const RationalMatrix& a, const Prime& p);
/// Entrywise reduction into [0, p).
ModMatrix image_integer(const IntegerMatrix& m, const Prime& p);

/// Residue of an arbitrary integer in [0, p).
std::uint32_t residue(const mpz_class& z, const Prime& p);

bool is_hankel(const RationalMatrix& a);

/// Images a rational matrix, optionally exploiting Hankel structure so that
/// only the 2m-1 distinct entries are reduced per prime.
class RationalImager {
 public:
  /// With structured = true, a must be Hankel (std::invalid_argument if not).
  explicit RationalImager(const RationalMatrix& a, bool structured = false);

  ModMatrix image(const Prime& p) const;
  bool structured() const { return structured_; }

 private:
  const RationalMatrix* a_;
  bool structured_;
  std::vector<Rational> antidiagonals_;  // entry (i, j) = antidiagonals_[i + j]
};

/// ceil(sqrt(prod of squared row norms)), at least 1. Bounds |det(m)|.
mpz_class hadamard_bound(const IntegerMatrix& m);
/// Same bound built from column norms.
mpz_class hadamard_bound_columns(const IntegerMatrix& m);

struct Bounds {
  mpz_class hadamard;   // H, Hadamard bound of Ã
  mpz_class den_bound;  // D
  mpz_class num_bound;  // N = D·H
};

/// N and D with |n| <= N and d | D for det(A) = n/d.
Bounds determinant_bounds(const RationalMatrix& a);
Bounds determinant_bounds(const DenominatorProfile& profile,
                          const IntegerMatrix& preconditioned);

/// Max over entries of max(|a_ij|, b_ij).
mpz_class max_norm(const RationalMatrix& a);
mpz_class max_norm(const IntegerMatrix& m);

/// ceil(sqrt(n)) for n >= 0.
mpz_class ceil_sqrt(const mpz_class& n);

}  // namespace ratdet
