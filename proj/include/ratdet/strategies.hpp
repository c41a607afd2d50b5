#pragma once

// Rational determinant strategies built on modular images.
//
// All strategies are Monte Carlo when early termination is enabled: the loop
// stops once the reconstructed value has survived `et_threshold` extra
// primes. A wrong stop needs every one of those primes to divide the error,
// so for B-bit primes the failure rate is about log_{2^B}(bound) / #primes
// per stop. Set force_bound_run to run every loop to its certified bound.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ratdet/rational_matrix.hpp"

namespace ratdet {

enum class Strategy { RatLU, PrecDetLU, PrecMatLU, PrecMatDixon, Adaptive };

/// CLI spelling: ratlu, precdet, precmat, dixon, adaptive.
std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct StrategyConfig {
  unsigned prime_bits = 26;       // B, in [20, 31]
  std::size_t et_threshold = 2;   // t, stable folds required
  std::size_t dixon_trials = 2;   // right-hand sides for s_m
  std::uint64_t seed = 1;
  bool force_bound_run = false;   // disable early termination
  double dixon_word_threshold = 2.0;  // adaptive: run Dixon if log_p ||Ã|| < C
  bool structured = false;        // Hankel imaging of the rational matrix

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

enum class ImagingPath { Rational, Integer };

struct PhaseTimes {
  double setup_ms = 0;
  double dixon_ms = 0;
  double imaging_ms = 0;
  double determinant_ms = 0;
  double reconstruction_ms = 0;
  double total_ms = 0;
};

struct DetResult {
  Rational value;
  Strategy strategy = Strategy::RatLU;
  std::size_t primes_used = 0;     // primes folded into the CRA loop
  std::size_t primes_skipped = 0;  // bad primes drawn and discarded
  std::size_t ratrec_attempts = 0;
  bool et_triggered = false;
  mpz_class invariant_factor = 1;  // π, when a Dixon phase ran
  mpz_class den_bound = 1;         // D used by the run
  std::optional<ImagingPath> imaging;  // adaptive backend choice
  PhaseTimes times;
};

DetResult rat_lu(const RationalMatrix& a, const StrategyConfig& cfg = {});
DetResult prec_det_lu(const RationalMatrix& a, const StrategyConfig& cfg = {});
DetResult prec_mat_lu(const RationalMatrix& a, const StrategyConfig& cfg = {});
DetResult prec_mat_dixon(const RationalMatrix& a, const StrategyConfig& cfg = {});
DetResult adaptive_det(const RationalMatrix& a, const StrategyConfig& cfg = {});

DetResult compute_determinant(Strategy s, const RationalMatrix& a,
                              const StrategyConfig& cfg = {});

}  // namespace ratdet
