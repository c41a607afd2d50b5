#pragma once

// Incremental Chinese remaindering with early termination, and rational
// reconstruction by the extended Euclidean algorithm.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "ratdet/modular.hpp"
#include "ratdet/rational_matrix.hpp"

namespace ratdet {

/// Running CRT reconstruction of an integer from residues modulo distinct
/// primes. The residue is kept in the symmetric range (-M/2, M/2].
class CrtState {
 public:
  CrtState() = default;

  const mpz_class& modulus() const { return modulus_; }
  const mpz_class& residue() const { return residue_; }
  /// Residue as a representative in [0, M).
  mpz_class nonnegative_residue() const;
  /// Consecutive folds that left the residue unchanged. The first fold always
  /// counts as a change.
  std::size_t stable_count() const { return stable_count_; }
  std::size_t iterations() const { return iterations_; }

  /// Folds in r mod p; p must be coprime to the current modulus.
  void fold(std::uint32_t r, const Prime& p);

 private:
  mpz_class modulus_ = 1;
  mpz_class residue_ = 0;
  std::size_t stable_count_ = 0;
  std::size_t iterations_ = 0;
};

CrtState crt_fold(CrtState state, std::uint32_t r, const Prime& p);

inline bool early_terminated(const CrtState& state, std::size_t threshold) {
  return state.stable_count() >= threshold;
}

/// Reconstructs a/b ≡ u (mod M) with |a| < N and 0 < b < D, or nullopt.
/// Requires 0 <= u < M. The returned fraction always satisfies the
/// congruence and both bounds; it is unique when 2ND <= M.
std::optional<Rational> ratrec(const mpz_class& u, const mpz_class& modulus,
                               const mpz_class& num_bound,
                               const mpz_class& den_bound);

/// N = D = floor(sqrt(M/2)), so 2ND <= M.
std::pair<mpz_class, mpz_class> wang_bounds(const mpz_class& modulus);

/// Asymmetric bounds floor(sqrt(M·Nh/(2·Dh))), floor(sqrt(M·Dh/(2·Nh))),
/// each at least 1.
std::pair<mpz_class, mpz_class> heuristic_bounds(const mpz_class& modulus,
                                                 const mpz_class& num_hint,
                                                 const mpz_class& den_hint);

/// Quadratic attempt schedule: due at i = 0, 1, 4, 9, ... where the k-th
/// attempt happens at i = k².
class RatrecSchedule {
 public:
  /// True when i is the next perfect square of the attempt counter; the
  /// counter then advances. Squares skipped by the caller are never due.
  bool due(std::size_t i);
  std::size_t attempts() const { return attempts_; }

 private:
  std::size_t next_ = 0;
  std::size_t attempts_ = 0;
};

}  // namespace ratdet
