#include "ratdet/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "ratdet/errors.hpp"
#include "ratdet/modular.hpp"

namespace ratdet {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

long floor_log2(const mpz_class& x) {
  if (sgn(x) == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)) - 1;
}

}  // namespace

double log2_exact(const mpz_class& x) {
  if (sgn(x) <= 0) throw std::invalid_argument("log2 of a non-positive number");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

double overapprox_ratio(const mpz_class& den_bound, const mpz_class& den) {
  if (!mpz_divisible_p(den_bound.get_mpz_t(), den.get_mpz_t())) {
    throw std::invalid_argument("denominator does not divide its bound");
  }
  const double excess = log2_exact(den_bound / den);
  const double size = std::max(1.0, log2_exact(den));
  return excess / size;
}

ImagingRecord bench_imaging(const RationalMatrix& a, const std::string& matrix_id,
                            std::size_t primes, std::uint64_t seed, bool structured) {
  ImagingRecord rec;
  rec.matrix_id = matrix_id;
  rec.m = a.dim();
  rec.structured = structured;

  const auto profile = best_denominators(a);
  const IntegerMatrix at = precondition_matrix(a, profile);
  rec.log2_a = floor_log2(max_norm(a));
  rec.log2_atilde = floor_log2(max_norm(at));

  const RationalImager imager(a, structured);
  PrimeStream stream(seed);
  std::uint64_t sink = 0;  // keeps the images observable
  while (rec.primes < primes) {
    const Prime p = stream.next();
    auto t0 = Clock::now();
    std::optional<ModMatrix> rat;
    try {
      rat.emplace(imager.image(p));
    } catch (const BadPrime&) {
      continue;
    }
    rec.rational_ms += elapsed_ms(t0);
    t0 = Clock::now();
    const ModMatrix integer = image_integer(at, p);
    rec.integer_ms += elapsed_ms(t0);
    sink += rat->entries()[0] + integer.entries()[0];
    ++rec.primes;
  }
  rec.ratio = rec.integer_ms > 0 ? rec.rational_ms / rec.integer_ms : 0.0;
  rec.checksum = sink;
  return rec;
}

std::vector<BenchRecord> bench_strategies(const RationalMatrix& a, const std::string& matrix_id,
                                          std::span<const Strategy> strategies,
                                          const StrategyConfig& cfg) {
  std::vector<BenchRecord> out;
  for (const Strategy s : strategies) {
    BenchRecord rec;
    rec.matrix_id = matrix_id;
    rec.m = a.dim();
    rec.strategy = std::string(strategy_name(s));
    try {
      const DetResult r = compute_determinant(s, a, cfg);
      rec.wall_ms = r.times.total_ms;
      rec.primes = r.primes_used;
      rec.value = r.value;
      rec.bits_n = r.value.is_zero() ? 0 : mpz_sizeinbase(r.value.num().get_mpz_t(), 2);
      rec.bits_d = mpz_sizeinbase(r.value.den().get_mpz_t(), 2);
      rec.bits_den_bound = mpz_sizeinbase(r.den_bound.get_mpz_t(), 2);
      rec.overapprox_ratio =
          r.value.is_zero() ? 0.0 : overapprox_ratio(r.den_bound, r.value.den());
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_bench_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << "matrix_id,m,strategy,wall_ms,primes,bits_n,bits_d,bits_D,overapprox_ratio\n";
  for (const auto& r : records) {
    os << r.matrix_id << ',' << r.m << ',' << r.strategy << ',' << std::fixed
       << std::setprecision(3) << r.wall_ms << ',' << r.primes << ',' << r.bits_n << ','
       << r.bits_d << ',' << r.bits_den_bound << ',' << std::setprecision(6)
       << r.overapprox_ratio << '\n';
  }
  os << std::defaultfloat;
}

void write_imaging_csv(std::ostream& os, std::span<const ImagingRecord> records) {
  os << "matrix_id,m,primes,structured,rat_ms,int_ms,rat_over_int,log2_A,log2_Atilde\n";
  for (const auto& r : records) {
    os << r.matrix_id << ',' << r.m << ',' << r.primes << ',' << (r.structured ? 1 : 0)
       << ',' << std::fixed << std::setprecision(4) << r.rational_ms << ',' << r.integer_ms
       << ',' << std::setprecision(5) << r.ratio << ',' << r.log2_a << ',' << r.log2_atilde
       << '\n';
  }
  os << std::defaultfloat;
}

}  // namespace ratdet
