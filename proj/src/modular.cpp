#include "ratdet/modular.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "ratdet/errors.hpp"

namespace ratdet {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t powmod64(std::uint64_t base, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1 % n;
  base %= n;
  while (e != 0) {
    if (e & 1) r = mulmod64(r, base, n);
    base = mulmod64(base, base, n);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kWitnesses = {
      2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto w : kWitnesses) {
    if (n % w == 0) return n == w;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto w : kWitnesses) {
    std::uint64_t x = powmod64(w, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Prime::Prime(std::uint64_t value) {
  if (value >= (std::uint64_t{1} << 31) || !is_prime(value)) {
    throw std::invalid_argument(std::to_string(value) +
                                " is not a prime below 2^31");
  }
  p_ = static_cast<std::uint32_t>(value);
  // floor(2^64 / p); p is never a power of two except p = 2.
  barrett_ = p_ == 2 ? (std::uint64_t{1} << 63)
                     : std::numeric_limits<std::uint64_t>::max() / p_;
}

unsigned Prime::bit_length() const {
  unsigned b = 0;
  for (auto v = p_; v != 0; v >>= 1) ++b;
  return b;
}

std::uint32_t Prime::from_signed(std::int64_t x) const {
  if (x >= 0) return reduce(static_cast<std::uint64_t>(x));
  // -(x + 1) avoids overflow at INT64_MIN.
  const auto r = reduce(static_cast<std::uint64_t>(-(x + 1)) + 1);
  return neg(r);
}

std::uint32_t mod_inverse(std::uint64_t a, const Prime& p) {
  std::int64_t r0 = p.value();
  std::int64_t r1 = p.reduce(a);
  if (r1 == 0) throw ZeroInverse();
  std::int64_t t0 = 0;
  std::int64_t t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    t0 = std::exchange(t1, t0 - q * t1);
  }
  // r0 == gcd == 1 since p is prime.
  return p.from_signed(t0);
}

PrimeStream::PrimeStream(std::uint64_t seed, unsigned bit_length)
    : rng_(seed), bits_(bit_length) {
  if (bit_length < 2 || bit_length > 31) {
    throw std::invalid_argument("prime bit length must lie in [2, 31]");
  }
}

Prime PrimeStream::next() {
  const std::uint64_t lo = std::uint64_t{1} << (bits_ - 1);
  const std::uint64_t hi = (std::uint64_t{1} << bits_) - 1;
  std::uniform_int_distribution<std::uint64_t> dist(lo + 1, hi);
  // Give up after this many consecutive draws hit only known primes.
  constexpr unsigned kMaxRepeats = 1u << 16;
  unsigned repeats = 0;
  for (;;) {
    std::uint64_t candidate = dist(rng_);
    if (!is_prime(candidate)) continue;
    if (emitted_.insert(static_cast<std::uint32_t>(candidate)).second) {
      return Prime(candidate);
    }
    if (++repeats == kMaxRepeats) throw PrimeExhausted(bits_);
  }
}

ModMatrix::ModMatrix(Prime modulus, std::size_t dim)
    : modulus_(modulus), dim_(dim), entries_(dim * dim, 0) {}

ModMatrix::ModMatrix(Prime modulus, std::size_t dim,
                     std::vector<std::uint32_t> entries)
    : modulus_(modulus), dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim * dim) {
    throw std::invalid_argument("ModMatrix: entry count is not dim^2");
  }
  for (auto e : entries_) {
    if (e >= modulus_.value()) {
      throw std::invalid_argument("ModMatrix: entry not reduced modulo p");
    }
  }
}

// Right-looking elimination on unreduced 64-bit accumulators. Rows below the
// pivot receive one multiply-add per step; the trailing block is reduced only
// when another step could overflow 64 bits.
std::uint32_t lu_determinant(const ModMatrix& m) {
  const std::size_t n = m.dim();
  const Prime& p = m.modulus();
  const std::uint64_t pm1 = p.value() - 1;
  std::vector<std::uint64_t> a(m.entries().begin(), m.entries().end());
  std::vector<std::uint32_t> pivot_row(n);

  const std::uint64_t max_steps =
      pm1 == 0 ? std::numeric_limits<std::uint64_t>::max()
               : (std::numeric_limits<std::uint64_t>::max() - pm1) / (pm1 * pm1);
  std::uint64_t steps_since_reduce = 0;
  std::uint32_t det = 1;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t r = k; r < n; ++r) {
      const auto v = p.reduce(a[r * n + k]);
      a[r * n + k] = v;
      if (v != 0) {
        piv = r;
        break;
      }
    }
    if (piv == n) return 0;
    if (piv != k) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(k * n + k),
                       a.begin() + static_cast<std::ptrdiff_t>(k * n + n),
                       a.begin() + static_cast<std::ptrdiff_t>(piv * n + k));
      det = p.neg(det);
    }
    const auto pivot = static_cast<std::uint32_t>(a[k * n + k]);
    det = p.mul(det, pivot);
    if (k + 1 == n) break;
    const auto inv = mod_inverse(pivot, p);
    for (std::size_t j = k + 1; j < n; ++j) pivot_row[j] = p.reduce(a[k * n + j]);

    if (steps_since_reduce == max_steps) {
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k; j < n; ++j) a[i * n + j] = p.reduce(a[i * n + j]);
      }
      steps_since_reduce = 0;
    }
    const std::uint32_t* prow = pivot_row.data();
    for (std::size_t i = k + 1; i < n; ++i) {
      const auto f = p.mul(p.reduce(a[i * n + k]), inv);
      if (f == 0) continue;
      const std::uint32_t nf = p.value() - f;
      std::uint64_t* row = a.data() + i * n;
      for (std::size_t j = k + 1; j < n; ++j) {
        row[j] += static_cast<std::uint64_t>(nf) * prow[j];
      }
    }
    ++steps_since_reduce;
  }
  return det;
}

LuFactorization::LuFactorization(const ModMatrix& m)
    : modulus_(m.modulus()),
      dim_(m.dim()),
      lu_(m.entries().begin(), m.entries().end()),
      diag_inv_(m.dim()),
      perm_(m.dim()) {
  const std::size_t n = dim_;
  const Prime& p = modulus_;
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && lu_[piv * n + k] == 0) ++piv;
    if (piv == n) throw SingularModP(p.value());
    if (piv != k) {
      std::swap_ranges(lu_.begin() + static_cast<std::ptrdiff_t>(k * n),
                       lu_.begin() + static_cast<std::ptrdiff_t>(k * n + n),
                       lu_.begin() + static_cast<std::ptrdiff_t>(piv * n));
      std::swap(perm_[k], perm_[piv]);
    }
    const auto inv = mod_inverse(lu_[k * n + k], p);
    diag_inv_[k] = inv;
    for (std::size_t i = k + 1; i < n; ++i) {
      const auto f = p.mul(lu_[i * n + k], inv);
      lu_[i * n + k] = f;
      if (f == 0) continue;
      for (std::size_t j = k + 1; j < n; ++j) {
        lu_[i * n + j] = p.sub(lu_[i * n + j], p.mul(f, lu_[k * n + j]));
      }
    }
  }
}

std::vector<std::uint32_t> LuFactorization::solve(
    std::span<const std::uint32_t> b) const {
  const std::size_t n = dim_;
  const Prime& p = modulus_;
  if (b.size() != n) throw std::invalid_argument("solve: length mismatch");
  std::vector<std::uint32_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s = p.sub(s, p.mul(lu_[i * n + j], y[j]));
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    std::uint32_t s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s = p.sub(s, p.mul(lu_[i * n + j], y[j]));
    y[i] = p.mul(s, diag_inv_[i]);
  }
  return y;
}

}  // namespace ratdet
