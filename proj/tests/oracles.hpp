#pragma once

// Reference implementations used only by tests. Each one is deliberately
// naive and shares no code path with the library routine it checks.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ratdet/rational_matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>;

inline Dense to_dense(const ratdet::RationalMatrix& a) {
  Dense d(a.dim(), std::vector<mpq_class>(a.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) d[i][j] = a(i, j).to_mpq();
  }
  return d;
}

inline Dense to_dense(const ratdet::IntegerMatrix& a) {
  Dense d(a.dim(), std::vector<mpq_class>(a.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) d[i][j] = a(i, j);
  }
  return d;
}

// Laplace expansion along the first row. Exponential; m <= 7 or so.
inline mpq_class cofactor_det(const Dense& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpq_class total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    Dense minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpq_class> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(a[i][j]);
      }
      minor.push_back(std::move(row));
    }
    const mpq_class term = a[0][c] * cofactor_det(minor);
    total += (c % 2 == 0) ? term : mpq_class(-term);
  }
  return total;
}

// Cofactor expansion over Z/p with plain 64-bit arithmetic.
inline std::uint64_t cofactor_det_mod(const std::vector<std::vector<std::uint64_t>>& a,
                                      std::uint64_t p) {
  const std::size_t n = a.size();
  if (n == 0) return 1 % p;
  if (n == 1) return a[0][0] % p;
  std::uint64_t total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<std::uint64_t>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<std::uint64_t> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(a[i][j]);
      }
      minor.push_back(std::move(row));
    }
    const std::uint64_t term = a[0][c] % p * cofactor_det_mod(minor, p) % p;
    total = (c % 2 == 0) ? (total + term) % p : (total + p - term) % p;
  }
  return total;
}

// Gaussian elimination over Q with mpq_class.
inline mpq_class gauss_det(Dense a) {
  const std::size_t n = a.size();
  mpq_class det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      const mpq_class f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

inline mpq_class gauss_det(const ratdet::RationalMatrix& a) { return gauss_det(to_dense(a)); }

inline void combinations(std::size_t n, std::size_t k, std::size_t start,
                         std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// gcd of all k×k minors of an integer matrix.
inline mpz_class determinantal_divisor(const ratdet::IntegerMatrix& a, std::size_t k) {
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  combinations(a.dim(), k, 0, cur, subsets);
  mpz_class g = 0;
  for (const auto& rows : subsets) {
    for (const auto& cols : subsets) {
      Dense minor(k, std::vector<mpq_class>(k));
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) minor[i][j] = a(rows[i], cols[j]);
      }
      const mpq_class d = gauss_det(minor);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_num_mpz_t());
    }
  }
  return g;
}

// Largest Smith invariant factor s_m = d_m / d_{m-1} for nonsingular a.
inline mpz_class smith_largest(const ratdet::IntegerMatrix& a) {
  const std::size_t m = a.dim();
  const mpz_class dm = determinantal_divisor(a, m);
  const mpz_class dm1 = m == 1 ? mpz_class(1) : determinantal_divisor(a, m - 1);
  return abs(dm) / dm1;
}

// Closest fraction with denominator <= bound by scanning every denominator;
// smaller denominators win ties.
inline mpq_class best_approximation(const mpq_class& r, unsigned long bound) {
  mpq_class best;
  mpq_class best_err = -1;
  for (unsigned long q = 1; q <= bound; ++q) {
    mpz_class scaled = r.get_num() * q;
    mpz_class lo;
    mpz_fdiv_q(lo.get_mpz_t(), scaled.get_mpz_t(), r.get_den_mpz_t());
    for (const mpz_class& num : {lo, mpz_class(lo + 1)}) {
      mpq_class cand(num, q);
      cand.canonicalize();
      const mpq_class err = abs(cand - r);
      if (best_err < 0 || err < best_err) {
        best = cand;
        best_err = err;
      }
    }
  }
  return best;
}

inline ratdet::IntegerMatrix random_integer_matrix(std::size_t m, long lo, long hi,
                                                   std::mt19937_64& rng) {
  std::uniform_int_distribution<long> dist(lo, hi);
  ratdet::IntegerMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = dist(rng);
  }
  return a;
}

inline ratdet::RationalMatrix random_rational_matrix(std::size_t m, long max_den,
                                                     std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(1, max_den);
  std::uniform_int_distribution<long> num(-max_den, max_den);
  ratdet::RationalMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a(i, j) = ratdet::canonicalize(mpz_class(num(rng)), mpz_class(den(rng)));
    }
  }
  return a;
}

inline ratdet::Rational from_mpq(const mpq_class& q) {
  return ratdet::canonicalize(q.get_num(), q.get_den());
}

}  // namespace oracle
