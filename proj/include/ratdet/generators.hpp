#pragma once

// Test and benchmark matrices, with the exact oracles used to check them.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ratdet/matrix_io.hpp"
#include "ratdet/rational_matrix.hpp"

namespace ratdet {

/// H_m with entry (i, j) = 1/(i + j + 1), 0-based.
RationalMatrix gen_hilbert(std::size_t m);

/// det(H_m) = 1 / prod_{k=1}^{m-1} (2k+1)·C(2k, k)².
Rational hilbert_det_closed_form(std::size_t m);

/// Entries k/10^places with k uniform in [0, 10^places]; places in [1, 18].
RationalMatrix gen_random_decimal(std::size_t m, unsigned places, std::uint64_t seed);

/// Entries a/b with b uniform in [1, max_den] and a uniform in
/// [-max_den, max_den].
RationalMatrix gen_random_rational(std::size_t m, std::uint64_t max_den,
                                   std::uint64_t seed);

/// Fraction-free (Bareiss) elimination over the integers.
mpz_class bareiss_determinant(const IntegerMatrix& m);

/// Exact det(A) by Bareiss on L·A, with L the lcm of all denominators.
Rational bareiss_determinant(const RationalMatrix& a);

struct FileSource {
  std::filesystem::path path;
  std::optional<MatrixFormat> format;
};
struct HilbertSource {
  std::size_t m;
};
struct RandomDecimalSource {
  std::size_t m;
  unsigned places;
  std::uint64_t seed;
};
struct RandomRationalSource {
  std::size_t m;
  std::uint64_t max_den;
  std::uint64_t seed;
};

using MatrixSource =
    std::variant<FileSource, HilbertSource, RandomDecimalSource, RandomRationalSource>;

/// Parses "hilbert:M", "random:M,PLACES" or "rational:M,MAXDEN"; the seed is
/// attached to the random kinds. Throws std::invalid_argument.
MatrixSource parse_generator(std::string_view spec, std::uint64_t seed);

/// Short identifier such as "hilbert100" or "random50".
std::string source_id(const MatrixSource& source);

RationalMatrix materialize(const MatrixSource& source);

}  // namespace ratdet
