#include "ratdet/dixon.hpp"

#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "ratdet/errors.hpp"
#include "ratdet/reconstruction.hpp"

namespace ratdet {

namespace {

mpz_class column_norm_product(const IntegerMatrix& a) {
  const std::size_t m = a.dim();
  mpz_class product = 1;
  mpz_class norm2;
  for (std::size_t j = 0; j < m; ++j) {
    norm2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      mpz_addmul(norm2.get_mpz_t(), a(i, j).get_mpz_t(), a(i, j).get_mpz_t());
    }
    product *= norm2;
  }
  return product;
}

// Componentwise reconstruction sharing a running common denominator: once
// `common` holds the denominators seen so far, later components usually need
// no Euclidean steps at all.
std::optional<std::vector<Rational>> reconstruct_vector(
    std::span<const mpz_class> x, const mpz_class& modulus,
    const mpz_class& num_bound, const mpz_class& den_bound, mpz_class& common) {
  std::vector<Rational> out;
  out.reserve(x.size());
  common = 1;
  mpz_class w;
  mpz_class half = modulus / 2;
  for (const auto& xj : x) {
    w = xj * common;
    mpz_mod(w.get_mpz_t(), w.get_mpz_t(), modulus.get_mpz_t());
    mpz_class sym = w > half ? mpz_class(w - modulus) : w;
    if (mpz_cmpabs(sym.get_mpz_t(), num_bound.get_mpz_t()) < 0) {
      out.push_back(canonicalize(sym, common));
      continue;
    }
    mpz_class den_room = (den_bound + common - 1) / common;
    auto r = ratrec(w, modulus, num_bound, den_room);
    if (!r) return std::nullopt;
    mpz_class scaled_den = r->den() * common;
    out.push_back(canonicalize(r->num(), scaled_den));
    common = std::move(scaled_den);
  }
  return out;
}

bool verify(const IntegerMatrix& a, std::span<const Rational> x,
            std::span<const mpz_class> b, const mpz_class& common) {
  const std::size_t m = a.dim();
  std::vector<mpz_class> y(m);
  for (std::size_t j = 0; j < m; ++j) {
    mpz_divexact(y[j].get_mpz_t(), common.get_mpz_t(), x[j].den().get_mpz_t());
    y[j] *= x[j].num();
  }
  mpz_class s;
  for (std::size_t i = 0; i < m; ++i) {
    s = 0;
    for (std::size_t j = 0; j < m; ++j) {
      mpz_addmul(s.get_mpz_t(), a(i, j).get_mpz_t(), y[j].get_mpz_t());
    }
    if (s != common * b[i]) return false;
  }
  return true;
}

}  // namespace

DixonSolver::DixonSolver(const IntegerMatrix& a, const Prime& p)
    : a_(&a),
      prime_(p),
      lu_(image_integer(a, p)),
      column_norms2_(column_norm_product(a)) {}

DixonSolution DixonSolver::solve(std::span<const mpz_class> b,
                                 const DixonOptions& options) const {
  const IntegerMatrix& a = *a_;
  const std::size_t m = a.dim();
  const Prime& p = prime_;
  if (b.size() != m) throw std::invalid_argument("dixon: rhs length mismatch");

  // Cramer + Hadamard (column form): denominators divide det(A) and numerators
  // are minors with one column replaced by b.
  mpz_class b_norm2 = 0;
  for (const auto& bi : b) mpz_addmul(b_norm2.get_mpz_t(), bi.get_mpz_t(), bi.get_mpz_t());
  if (b_norm2 < 1) b_norm2 = 1;
  const mpz_class final_num = ceil_sqrt(column_norms2_ * b_norm2) + 1;
  const mpz_class final_den = ceil_sqrt(column_norms2_) + 1;
  const mpz_class cap = 2 * final_num * final_den;

  std::vector<mpz_class> r(b.begin(), b.end());
  std::vector<mpz_class> x(m, mpz_class(0));
  std::vector<std::uint32_t> rr(m);
  mpz_class pk = 1;
  RatrecSchedule schedule;
  mpz_class common;

  for (std::size_t k = 1;; ++k) {
    for (std::size_t i = 0; i < m; ++i) rr[i] = residue(r[i], p);
    const auto digit = lu_.solve(rr);
    for (std::size_t i = 0; i < m; ++i) {
      if (digit[i] != 0) mpz_addmul_ui(x[i].get_mpz_t(), pk.get_mpz_t(), digit[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (digit[j] != 0) {
          mpz_submul_ui(r[i].get_mpz_t(), a(i, j).get_mpz_t(), digit[j]);
        }
      }
      mpz_divexact_ui(r[i].get_mpz_t(), r[i].get_mpz_t(), p.value());
    }
    pk *= p.value();

    const bool at_cap = pk > cap;
    if (!schedule.due(k) && !at_cap) continue;

    mpz_class nb;
    mpz_class db;
    if (at_cap) {
      nb = final_num;
      db = final_den;
    } else if (options.heuristic_bounds) {
      std::tie(nb, db) = heuristic_bounds(pk, options.num_hint, options.den_hint);
    } else {
      std::tie(nb, db) = wang_bounds(pk);
    }
    if (nb >= 1 && db >= 1) {
      auto sol = reconstruct_vector(x, pk, nb, db, common);
      if (sol && verify(a, *sol, b, common)) {
        DixonSolution out;
        out.den_lcm = 1;
        for (const auto& q : *sol) {
          mpz_lcm(out.den_lcm.get_mpz_t(), out.den_lcm.get_mpz_t(), q.den().get_mpz_t());
        }
        out.solution = std::move(*sol);
        out.lifting_steps = k;
        return out;
      }
    }
    if (at_cap) throw InconsistentSystem();
  }
}

DixonSolution dixon_solve(const IntegerMatrix& a, std::span<const mpz_class> b,
                          const Prime& p, const DixonOptions& options) {
  return DixonSolver(a, p).solve(b, options);
}

InvariantEstimate largest_invariant_factor(const IntegerMatrix& a,
                                           std::size_t trials,
                                           PrimeStream& primes,
                                           std::mt19937_64& rng,
                                           std::size_t max_singular) {
  if (trials == 0) throw std::invalid_argument("at least one trial is required");
  std::optional<DixonSolver> solver;
  for (std::size_t attempt = 0; !solver; ++attempt) {
    if (attempt == max_singular) throw SingularMatrix();
    try {
      solver.emplace(a, primes.next());
    } catch (const SingularModP&) {
    }
  }

  InvariantEstimate est;
  est.s_m_estimate = 1;
  est.prime = solver->prime().value();
  std::uniform_int_distribution<std::int64_t> dist(-kRhsRange, kRhsRange);
  std::vector<mpz_class> b(a.dim());
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& bi : b) bi = static_cast<long>(dist(rng));
    const auto sol = solver->solve(b);
    mpz_lcm(est.s_m_estimate.get_mpz_t(), est.s_m_estimate.get_mpz_t(),
            sol.den_lcm.get_mpz_t());
    est.lifting_steps += sol.lifting_steps;
    ++est.trials;
  }
  return est;
}

}  // namespace ratdet
