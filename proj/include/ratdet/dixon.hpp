#pragma once

// Dixon p-adic lifting with output-sensitive termination, and the largest
// invariant factor estimate built on it.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ratdet/modular.hpp"
#include "ratdet/rational_matrix.hpp"

namespace ratdet {

struct DixonSolution {
  std::vector<Rational> solution;
  mpz_class den_lcm;            // lcm of the solution denominators
  std::size_t lifting_steps = 0;  // p-adic digits computed
};

struct DixonOptions {
  /// Use heuristic_bounds(p^k, num_hint, den_hint) instead of Wang's bounds
  /// for the intermediate reconstructions.
  bool heuristic_bounds = false;
  mpz_class num_hint = 1;
  mpz_class den_hint = 1;
};

/// Solves A x = b over the rationals by lifting from a single factorization
/// of A mod p. Reusable across right-hand sides.
class DixonSolver {
 public:
  /// Throws SingularModP when A is singular modulo p.
  DixonSolver(const IntegerMatrix& a, const Prime& p);

  /// Exact solution, verified against A·x = b before returning. Throws
  /// InconsistentSystem if the hard step cap is reached without one.
  DixonSolution solve(std::span<const mpz_class> b,
                      const DixonOptions& options = {}) const;

  const Prime& prime() const { return prime_; }

 private:
  const IntegerMatrix* a_;
  Prime prime_;
  LuFactorization lu_;
  mpz_class column_norms2_;  // product of squared column norms of A
};

DixonSolution dixon_solve(const IntegerMatrix& a, std::span<const mpz_class> b,
                          const Prime& p, const DixonOptions& options = {});

struct InvariantEstimate {
  mpz_class s_m_estimate;  // lcm of solution denominators, divides s_m(A)
  std::size_t trials = 0;
  std::size_t lifting_steps = 0;  // summed over trials
  std::uint32_t prime = 0;        // the lifting prime
};

/// Magnitude bound for the random right-hand side entries.
inline constexpr std::int64_t kRhsRange = std::int64_t{1} << 20;

/// Estimates the largest invariant factor of a nonsingular A as the lcm of
/// the denominators of `trials` random systems, all lifted modulo one prime
/// drawn from `primes`. Primes singular for A are skipped; after
/// `max_singular` of them in a row, throws SingularMatrix.
InvariantEstimate largest_invariant_factor(const IntegerMatrix& a,
                                           std::size_t trials,
                                           PrimeStream& primes,
                                           std::mt19937_64& rng,
                                           std::size_t max_singular = 4);

}  // namespace ratdet
