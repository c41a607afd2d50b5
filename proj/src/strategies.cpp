#include "ratdet/strategies.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>

#include "ratdet/dixon.hpp"
#include "ratdet/errors.hpp"
#include "ratdet/modular.hpp"
#include "ratdet/reconstruction.hpp"

namespace ratdet {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 5> kNames = {{
    {Strategy::RatLU, "ratlu"},
    {Strategy::PrecDetLU, "precdet"},
    {Strategy::PrecMatLU, "precmat"},
    {Strategy::PrecMatDixon, "dixon"},
    {Strategy::Adaptive, "adaptive"},
}};

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(Clock::now()) {}
  ~Stopwatch() {
    sink_ += std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }
  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

 private:
  double& sink_;
  Clock::time_point start_;
};

std::uint32_t rational_residue(const Rational& q, const Prime& p) {
  return p.mul(residue(q.num(), p), mod_inverse(residue(q.den(), p), p));
}

// Wang-style early exit on a rational value: a reconstructed candidate is
// accepted once `threshold` further primes agree with it.
class RationalCandidate {
 public:
  explicit RationalCandidate(std::size_t threshold) : threshold_(threshold) {}

  /// Checks the candidate against det(A) mod p; true once it is confirmed.
  bool observe(std::uint32_t det_residue, const Prime& p) {
    if (!candidate_) return false;
    if (residue(candidate_->den(), p) == 0) return false;
    if (rational_residue(*candidate_, p) == det_residue) {
      ++confirmations_;
    } else {
      candidate_.reset();
    }
    return candidate_ && confirmations_ >= threshold_;
  }

  void offer(Rational q) {
    if (candidate_ && *candidate_ == q) return;
    candidate_ = std::move(q);
    confirmations_ = 0;
  }

  const Rational& value() const { return *candidate_; }

 private:
  std::size_t threshold_;
  std::optional<Rational> candidate_;
  std::size_t confirmations_ = 0;
};

struct Preconditioned {
  DenominatorProfile profile;
  IntegerMatrix matrix;
  Bounds bounds;
};

Preconditioned precondition(const RationalMatrix& a) {
  Preconditioned pc;
  pc.profile = best_denominators(a);
  pc.matrix = precondition_matrix(a, pc.profile);
  pc.bounds = determinant_bounds(pc.profile, pc.matrix);
  return pc;
}

// Residue of the integer CRA target modulo p, or nullopt to discard p.
using ResidueFn = std::function<std::optional<std::uint32_t>(const Prime&)>;
// Called after each fold; returns a value to stop the loop early.
using FoldHook = std::function<std::optional<Rational>(const CrtState&, std::uint32_t,
                                                       const Prime&)>;

struct IntegerLoopResult {
  CrtState state;
  std::optional<Rational> early_value;
};

// Early-terminated CRA on an integer target, capped at `stop_modulus`.
IntegerLoopResult integer_cra(const ResidueFn& residue_of, const mpz_class& stop_modulus,
                              const StrategyConfig& cfg,
                              const std::function<Prime()>& next_prime, DetResult& out,
                              const FoldHook& hook = {}) {
  IntegerLoopResult res;
  for (;;) {
    const Prime p = next_prime();
    const auto r = residue_of(p);
    if (!r) {
      ++out.primes_skipped;
      continue;
    }
    {
      Stopwatch sw(out.times.reconstruction_ms);
      res.state.fold(*r, p);
    }
    ++out.primes_used;
    if (!cfg.force_bound_run) {
      if (early_terminated(res.state, cfg.et_threshold)) {
        out.et_triggered = true;
        return res;
      }
      if (hook) {
        if (auto v = hook(res.state, *r, p)) {
          out.et_triggered = true;
          res.early_value = std::move(v);
          return res;
        }
      }
    }
    if (res.state.modulus() > stop_modulus) return res;
  }
}

std::function<Prime()> stream_of(PrimeStream& primes) {
  return [&primes] { return primes.next(); };
}

Rational finish(const mpz_class& target, const mpz_class& factor, const mpz_class& den) {
  return canonicalize(target * factor, den);
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  for (const auto& [k, v] : kNames) {
    if (k == s) return v;
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const auto& [k, v] : kNames) {
    if (v == name) return k;
  }
  return std::nullopt;
}

void StrategyConfig::validate() const {
  if (prime_bits < 20 || prime_bits > 31) {
    throw std::invalid_argument("prime bit length must lie in [20, 31]");
  }
  if (et_threshold < 1) throw std::invalid_argument("ET threshold must be >= 1");
  if (dixon_trials < 1) throw std::invalid_argument("Dixon trials must be >= 1");
}

namespace {

DetResult rat_lu_impl(const RationalMatrix& a, const StrategyConfig& cfg) {
  cfg.validate();
  DetResult out;
  out.strategy = Strategy::RatLU;

  std::optional<Preconditioned> pc;
  std::optional<RationalImager> imager;
  {
    Stopwatch sw(out.times.setup_ms);
    pc = precondition(a);
    imager.emplace(a, cfg.structured);
  }
  out.den_bound = pc->bounds.den_bound;
  // Strict bounds for ratrec: |n| < N + 1 and d < D + 1.
  const mpz_class num_bound = pc->bounds.num_bound + 1;
  const mpz_class den_bound = pc->bounds.den_bound + 1;
  const mpz_class stop_modulus = 2 * num_bound * den_bound;

  PrimeStream primes(cfg.seed, cfg.prime_bits);
  CrtState state;
  RatrecSchedule schedule;
  RationalCandidate candidate(cfg.et_threshold);

  for (;;) {
    const Prime p = primes.next();
    std::optional<ModMatrix> image;
    try {
      Stopwatch sw(out.times.imaging_ms);
      image.emplace(imager->image(p));
    } catch (const BadPrime&) {
      ++out.primes_skipped;
      continue;
    }
    std::uint32_t r;
    {
      Stopwatch sw(out.times.determinant_ms);
      r = lu_determinant(*image);
    }
    Stopwatch sw(out.times.reconstruction_ms);
    state.fold(r, p);
    ++out.primes_used;

    if (!cfg.force_bound_run) {
      if (candidate.observe(r, p)) {
        out.value = candidate.value();
        out.et_triggered = true;
        out.ratrec_attempts = schedule.attempts();
        return out;
      }
      if (schedule.due(state.iterations())) {
        const auto [n, d] = wang_bounds(state.modulus());
        if (auto q = ratrec(state.nonnegative_residue(), state.modulus(), n, d)) {
          candidate.offer(std::move(*q));
        }
      }
    }
    if (state.modulus() > stop_modulus) break;
  }

  out.ratrec_attempts = schedule.attempts() + 1;
  auto q = ratrec(state.nonnegative_residue(), state.modulus(), num_bound, den_bound);
  if (!q) throw std::logic_error("rat_lu: reconstruction failed within certified bounds");
  out.value = std::move(*q);
  return out;
}

DetResult prec_det_lu_impl(const RationalMatrix& a, const StrategyConfig& cfg) {
  cfg.validate();
  DetResult out;
  out.strategy = Strategy::PrecDetLU;

  std::optional<Preconditioned> pc;
  std::optional<RationalImager> imager;
  {
    Stopwatch sw(out.times.setup_ms);
    pc = precondition(a);
    imager.emplace(a, cfg.structured);
  }
  const mpz_class& den = pc->bounds.den_bound;
  out.den_bound = den;
  const mpz_class stop_modulus = 2 * pc->bounds.num_bound * den;

  PrimeStream primes(cfg.seed, cfg.prime_bits);
  auto residue_of = [&](const Prime& p) -> std::optional<std::uint32_t> {
    std::optional<ModMatrix> image;
    try {
      Stopwatch sw(out.times.imaging_ms);
      image.emplace(imager->image(p));
    } catch (const BadPrime&) {
      return std::nullopt;
    }
    Stopwatch sw(out.times.determinant_ms);
    return p.mul(residue(den, p), lu_determinant(*image));
  };
  auto loop = integer_cra(residue_of, stop_modulus, cfg, stream_of(primes), out);
  out.value = finish(loop.state.residue(), 1, den);
  return out;
}

DetResult prec_mat_lu_impl(const RationalMatrix& a, const StrategyConfig& cfg) {
  cfg.validate();
  DetResult out;
  out.strategy = Strategy::PrecMatLU;

  std::optional<Preconditioned> pc;
  {
    Stopwatch sw(out.times.setup_ms);
    pc = precondition(a);
  }
  const mpz_class& den = pc->bounds.den_bound;
  out.den_bound = den;
  const mpz_class stop_modulus = 2 * pc->bounds.num_bound * den;

  PrimeStream primes(cfg.seed, cfg.prime_bits);
  auto residue_of = [&](const Prime& p) -> std::optional<std::uint32_t> {
    std::optional<ModMatrix> image;
    {
      Stopwatch sw(out.times.imaging_ms);
      image.emplace(image_integer(pc->matrix, p));
    }
    Stopwatch sw(out.times.determinant_ms);
    return lu_determinant(*image);
  };
  auto loop = integer_cra(residue_of, stop_modulus, cfg, stream_of(primes), out);
  out.value = finish(loop.state.residue(), 1, den);
  return out;
}

DetResult prec_mat_dixon_impl(const RationalMatrix& a, const StrategyConfig& cfg) {
  cfg.validate();
  DetResult out;
  out.strategy = Strategy::PrecMatDixon;

  std::optional<Preconditioned> pc;
  {
    Stopwatch sw(out.times.setup_ms);
    pc = precondition(a);
  }
  const mpz_class& den = pc->bounds.den_bound;
  out.den_bound = den;
  const mpz_class stop_modulus = 2 * pc->bounds.num_bound * den;

  PrimeStream primes(cfg.seed, cfg.prime_bits);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  StrategyConfig loop_cfg = cfg;
  mpz_class pi = 1;
  try {
    Stopwatch sw(out.times.dixon_ms);
    pi = largest_invariant_factor(pc->matrix, cfg.dixon_trials, primes, rng).s_m_estimate;
  } catch (const SingularMatrix&) {
    loop_cfg.force_bound_run = true;
  } catch (const InconsistentSystem&) {
    loop_cfg.force_bound_run = true;
  }
  out.invariant_factor = pi;

  auto residue_of = [&](const Prime& p) -> std::optional<std::uint32_t> {
    const std::uint32_t pi_mod_p = residue(pi, p);
    if (pi_mod_p == 0) return std::nullopt;
    std::optional<ModMatrix> image;
    {
      Stopwatch sw(out.times.imaging_ms);
      image.emplace(image_integer(pc->matrix, p));
    }
    Stopwatch sw(out.times.determinant_ms);
    return p.mul(lu_determinant(*image), mod_inverse(pi_mod_p, p));
  };
  auto loop = integer_cra(residue_of, stop_modulus, loop_cfg, stream_of(primes), out);
  out.value = finish(loop.state.residue(), pi, den);
  return out;
}

DetResult adaptive_det_impl(const RationalMatrix& a, const StrategyConfig& cfg) {
  cfg.validate();
  DetResult out;
  out.strategy = Strategy::Adaptive;

  // 1. D, Ã and bounds.
  std::optional<Preconditioned> pc;
  std::optional<RationalImager> imager;
  {
    Stopwatch sw(out.times.setup_ms);
    pc = precondition(a);
    imager.emplace(a, cfg.structured);
  }
  const mpz_class& den = pc->bounds.den_bound;
  out.den_bound = den;
  const mpz_class stop_modulus = 2 * pc->bounds.num_bound * den;
  PrimeStream primes(cfg.seed, cfg.prime_bits);
  StrategyConfig loop_cfg = cfg;

  // 2. Numerator factor s_m(Ã) when Ã has small entries.
  mpz_class pi = 1;
  const double norm_words =
      static_cast<double>(mpz_sizeinbase(max_norm(pc->matrix).get_mpz_t(), 2)) /
      static_cast<double>(cfg.prime_bits);
  if (norm_words < cfg.dixon_word_threshold) {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    try {
      Stopwatch sw(out.times.dixon_ms);
      pi = largest_invariant_factor(pc->matrix, cfg.dixon_trials, primes, rng).s_m_estimate;
    } catch (const SingularMatrix&) {
      loop_cfg.force_bound_run = true;
    } catch (const InconsistentSystem&) {
      loop_cfg.force_bound_run = true;
    }
  }
  out.invariant_factor = pi;

  // 3. Pick the imaging backend from one timed image of each kind. The
  // integer image of that prime seeds the CRA loop.
  std::optional<std::pair<Prime, std::uint32_t>> first;
  while (!out.imaging) {
    const Prime p = primes.next();
    if (residue(den, p) == 0 || residue(pi, p) == 0) {
      ++out.primes_skipped;
      continue;
    }
    double rat_ms = 0;
    double int_ms = 0;
    std::optional<ModMatrix> rat_image;
    try {
      Stopwatch sw(rat_ms);
      rat_image.emplace(imager->image(p));
    } catch (const BadPrime&) {
      ++out.primes_skipped;
      continue;
    }
    std::optional<ModMatrix> int_image;
    {
      Stopwatch sw(int_ms);
      int_image.emplace(image_integer(pc->matrix, p));
    }
    out.times.imaging_ms += rat_ms + int_ms;
    out.imaging = int_ms <= rat_ms ? ImagingPath::Integer : ImagingPath::Rational;
    Stopwatch sw(out.times.determinant_ms);
    first.emplace(p, lu_determinant(*int_image));
  }
  const bool use_integer = *out.imaging == ImagingPath::Integer;

  // 4. ET CRA on the integer (D/π)·det(A) = det(Ã)/π.
  auto residue_of = [&](const Prime& p) -> std::optional<std::uint32_t> {
    if (first && first->first == p) {
      const auto det = std::exchange(first, std::nullopt)->second;
      return p.mul(det, mod_inverse(residue(pi, p), p));
    }
    const std::uint32_t den_mod_p = residue(den, p);
    const std::uint32_t pi_mod_p = residue(pi, p);
    if (den_mod_p == 0 || pi_mod_p == 0) return std::nullopt;
    std::optional<ModMatrix> image;
    try {
      Stopwatch sw(out.times.imaging_ms);
      image.emplace(use_integer ? image_integer(pc->matrix, p) : imager->image(p));
    } catch (const BadPrime&) {
      return std::nullopt;
    }
    Stopwatch sw(out.times.determinant_ms);
    std::uint32_t det = lu_determinant(*image);
    if (!use_integer) det = p.mul(det, den_mod_p);
    return p.mul(det, mod_inverse(pi_mod_p, p));
  };

  // 5. Occasional rational reconstruction of det(A) itself, as in RatLU.
  RatrecSchedule schedule;
  RationalCandidate candidate(cfg.et_threshold);
  auto hook = [&](const CrtState& state, std::uint32_t r,
                  const Prime& p) -> std::optional<Rational> {
    const std::uint32_t det_a =
        p.mul(p.mul(r, residue(pi, p)), mod_inverse(residue(den, p), p));
    if (candidate.observe(det_a, p)) return candidate.value();
    if (!schedule.due(state.iterations())) return std::nullopt;
    Stopwatch sw(out.times.reconstruction_ms);
    const mpz_class& m = state.modulus();
    mpz_class u = state.nonnegative_residue() * pi;
    mpz_class den_inv;
    mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    u *= den_inv;
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    const auto [nb, db] = wang_bounds(m);
    if (auto q = ratrec(u, m, nb, db)) candidate.offer(std::move(*q));
    return std::nullopt;
  };

  // The timed prime is folded first; later primes come from the stream.
  std::optional<Prime> seed_prime = first->first;
  auto next_prime = [&]() -> Prime {
    if (seed_prime) return *std::exchange(seed_prime, std::nullopt);
    return primes.next();
  };
  auto loop = integer_cra(residue_of, stop_modulus, loop_cfg, next_prime, out, hook);
  out.ratrec_attempts = schedule.attempts();
  out.value = loop.early_value ? std::move(*loop.early_value)
                               : finish(loop.state.residue(), pi, den);
  return out;
}

DetResult timed(DetResult (*impl)(const RationalMatrix&, const StrategyConfig&),
               const RationalMatrix& a, const StrategyConfig& cfg) {
  const auto start = Clock::now();
  DetResult out = impl(a, cfg);
  out.times.total_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace

DetResult rat_lu(const RationalMatrix& a, const StrategyConfig& cfg) {
  return timed(rat_lu_impl, a, cfg);
}

DetResult prec_det_lu(const RationalMatrix& a, const StrategyConfig& cfg) {
  return timed(prec_det_lu_impl, a, cfg);
}

DetResult prec_mat_lu(const RationalMatrix& a, const StrategyConfig& cfg) {
  return timed(prec_mat_lu_impl, a, cfg);
}

DetResult prec_mat_dixon(const RationalMatrix& a, const StrategyConfig& cfg) {
  return timed(prec_mat_dixon_impl, a, cfg);
}

DetResult adaptive_det(const RationalMatrix& a, const StrategyConfig& cfg) {
  return timed(adaptive_det_impl, a, cfg);
}

DetResult compute_determinant(Strategy s, const RationalMatrix& a,
                              const StrategyConfig& cfg) {
  switch (s) {
    case Strategy::RatLU:
      return rat_lu(a, cfg);
    case Strategy::PrecDetLU:
      return prec_det_lu(a, cfg);
    case Strategy::PrecMatLU:
      return prec_mat_lu(a, cfg);
    case Strategy::PrecMatDixon:
      return prec_mat_dixon(a, cfg);
    case Strategy::Adaptive:
      return adaptive_det(a, cfg);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace ratdet
