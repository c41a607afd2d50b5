#pragma once

// Benchmark harness: imaging cost (rational vs preconditioned integer) and
// per-strategy timings with denominator over-approximation statistics.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ratdet/rational_matrix.hpp"
#include "ratdet/strategies.hpp"

namespace ratdet {

/// Schema version of the CSV files written below.
inline constexpr int kBenchCsvVersion = 1;

struct ImagingRecord {
  std::string matrix_id;
  std::size_t m = 0;
  std::size_t primes = 0;
  bool structured = false;
  double rational_ms = 0;  // summed over primes
  double integer_ms = 0;
  double ratio = 0;        // rational_ms / integer_ms; > 1 means integer imaging is faster
  long log2_a = 0;         // floor(log2 ||A||)
  long log2_atilde = 0;    // floor(log2 ||Ã||)
  std::uint64_t checksum = 0;  // keeps the timed images observable
};

/// Times image_rational (or Hankel imaging when structured) against
/// image_integer of the preconditioned matrix over `primes` fresh primes.
/// Preconditioning itself is not timed.
ImagingRecord bench_imaging(const RationalMatrix& a, const std::string& matrix_id,
                            std::size_t primes, std::uint64_t seed,
                            bool structured = false);

struct BenchRecord {
  std::string matrix_id;
  std::size_t m = 0;
  std::string strategy;
  double wall_ms = 0;
  std::size_t primes = 0;
  std::size_t bits_n = 0;  // bit length of |n|
  std::size_t bits_d = 0;
  std::size_t bits_den_bound = 0;  // bit length of D
  double overapprox_ratio = 0;     // log2(D/d) / log2(d)
  std::string error;               // non-empty when the run failed
  Rational value;
};

/// log2(D/d) / log2(d), with log2(d) clamped below at 1 so that d = 1 gives
/// log2(D) rather than a division by zero. d must divide D.
double overapprox_ratio(const mpz_class& den_bound, const mpz_class& den);

/// Runs every strategy in turn; a failing strategy yields a record with
/// `error` set and the sweep continues.
std::vector<BenchRecord> bench_strategies(const RationalMatrix& a, const std::string& matrix_id,
                                          std::span<const Strategy> strategies,
                                          const StrategyConfig& cfg);

/// Header: matrix_id,m,strategy,wall_ms,primes,bits_n,bits_d,bits_D,overapprox_ratio
void write_bench_csv(std::ostream& os, std::span<const BenchRecord> records);
/// Header: matrix_id,m,primes,structured,rat_ms,int_ms,rat_over_int,log2_A,log2_Atilde
void write_imaging_csv(std::ostream& os, std::span<const ImagingRecord> records);

/// Exact log2 of a positive integer, accurate to double precision.
double log2_exact(const mpz_class& x);

}  // namespace ratdet
