#pragma once

// Word-size prime fields: prime generation, inverses and LU kernels.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <unordered_set>
#include <vector>

namespace ratdet {

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// An odd or even prime below 2^31 together with a Barrett constant for fast
/// reduction of 64-bit values.
class Prime {
 public:
  /// Throws std::invalid_argument if value is not a prime below 2^31.
  explicit Prime(std::uint64_t value);

  std::uint32_t value() const { return p_; }
  unsigned bit_length() const;

  /// x mod p for any 64-bit x.
  std::uint32_t reduce(std::uint64_t x) const {
    const auto q = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * barrett_) >> 64);
    std::uint64_t r = x - q * p_;
    if (r >= p_) r -= p_;
    return static_cast<std::uint32_t>(r);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return reduce(static_cast<std::uint64_t>(a) * b);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  /// Reduces a signed value into [0, p).
  std::uint32_t from_signed(std::int64_t x) const;

  friend bool operator==(const Prime& a, const Prime& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
  std::uint64_t barrett_;  // floor(2^64 / p)
};

/// Inverse of a modulo p in (0, p). Throws ZeroInverse when a == 0 mod p.
std::uint32_t mod_inverse(std::uint64_t a, const Prime& p);

/// Source of distinct, uniformly drawn primes of a fixed bit length.
class PrimeStream {
 public:
  static constexpr unsigned kDefaultBits = 26;

  /// bit_length must lie in [2, 31].
  explicit PrimeStream(std::uint64_t seed, unsigned bit_length = kDefaultBits);

  /// A prime p with 2^(B-1) < p < 2^B never returned before by this stream.
  Prime next();

  unsigned bit_length() const { return bits_; }
  std::size_t emitted_count() const { return emitted_.size(); }
  bool was_emitted(std::uint32_t p) const { return emitted_.contains(p); }

 private:
  std::mt19937_64 rng_;
  unsigned bits_;
  std::unordered_set<std::uint32_t> emitted_;
};

/// Dense square matrix of residues modulo a prime, row-major.
class ModMatrix {
 public:
  ModMatrix(Prime modulus, std::size_t dim);
  /// Throws std::invalid_argument on a size mismatch or an entry >= p.
  ModMatrix(Prime modulus, std::size_t dim, std::vector<std::uint32_t> entries);

  const Prime& modulus() const { return modulus_; }
  std::size_t dim() const { return dim_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }
  std::uint32_t& operator()(std::size_t i, std::size_t j) {
    return entries_[i * dim_ + j];
  }
  std::span<const std::uint32_t> entries() const { return entries_; }
  std::span<std::uint32_t> entries() { return entries_; }

 private:
  Prime modulus_;
  std::size_t dim_;
  std::vector<std::uint32_t> entries_;
};

/// det(M) mod p in [0, p); 0 when M is singular modulo p.
std::uint32_t lu_determinant(const ModMatrix& m);

/// PLU factorization of a matrix that is nonsingular modulo p.
class LuFactorization {
 public:
  /// Throws SingularModP when m is singular modulo its prime.
  explicit LuFactorization(const ModMatrix& m);

  /// x with M x = b (mod p). b must have dim() entries in [0, p).
  std::vector<std::uint32_t> solve(std::span<const std::uint32_t> b) const;

  std::size_t dim() const { return dim_; }
  const Prime& modulus() const { return modulus_; }

 private:
  Prime modulus_;
  std::size_t dim_;
  std::vector<std::uint32_t> lu_;       // unit-lower L below, U on and above
  std::vector<std::uint32_t> diag_inv_;  // inverses of U's diagonal
  std::vector<std::size_t> perm_;        // row i of PM is row perm_[i] of M
};

inline LuFactorization lu_factor(const ModMatrix& m) { return LuFactorization(m); }

}  // namespace ratdet
