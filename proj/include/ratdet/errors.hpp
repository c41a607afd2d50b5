#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ratdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroDenominator : public Error {
 public:
  ZeroDenominator() : Error("zero denominator") {}
};

class ZeroInverse : public Error {
 public:
  ZeroInverse() : Error("residue has no inverse modulo p") {}
};

/// The matrix is singular modulo the chosen prime; draw another prime.
class SingularModP : public Error {
 public:
  explicit SingularModP(std::uint64_t p)
      : Error("matrix is singular modulo " + std::to_string(p)), prime(p) {}
  std::uint64_t prime;
};

/// A denominator vanishes modulo the chosen prime; draw another prime.
class BadPrime : public Error {
 public:
  explicit BadPrime(std::uint64_t p)
      : Error("a denominator vanishes modulo " + std::to_string(p)), prime(p) {}
  std::uint64_t prime;
};

class PrimeExhausted : public Error {
 public:
  explicit PrimeExhausted(unsigned bits)
      : Error("no fresh " + std::to_string(bits) + "-bit prime left") {}
};

/// p-adic lifting reached its hard cap without an exact solution.
class InconsistentSystem : public Error {
 public:
  InconsistentSystem() : Error("lifting did not produce an exact solution") {}
};

/// Every prime tried so far was singular; the matrix is most likely singular.
class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("matrix appears singular over the rationals") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  std::size_t line;
};

class UnsupportedField : public Error {
 public:
  explicit UnsupportedField(const std::string& field)
      : Error("unsupported Matrix Market field: " + field) {}
};

}  // namespace ratdet
