#include "ratdet/reconstruction.hpp"

#include <stdexcept>

namespace ratdet {

mpz_class CrtState::nonnegative_residue() const {
  mpz_class u = residue_;
  if (sgn(u) < 0) u += modulus_;
  return u;
}

void CrtState::fold(std::uint32_t r, const Prime& p) {
  // u' = u + M·t with t = (r - u)·M⁻¹ mod p.
  const std::uint32_t u_mod_p = ratdet::residue(residue_, p);
  const std::uint32_t m_mod_p = ratdet::residue(modulus_, p);
  const std::uint32_t t = p.mul(p.sub(p.reduce(r), u_mod_p), mod_inverse(m_mod_p, p));

  const bool unchanged = t == 0;
  if (t != 0) mpz_addmul_ui(residue_.get_mpz_t(), modulus_.get_mpz_t(), t);
  modulus_ *= p.value();

  // Back into (-M'/2, M'/2]; u' lies in (-M/2, M/2 + (p-1)M].
  mpz_class twice = residue_ * 2;
  while (twice > modulus_) {
    residue_ -= modulus_;
    twice = residue_ * 2;
  }
  while (-twice >= modulus_) {
    residue_ += modulus_;
    twice = residue_ * 2;
  }

  if (iterations_ > 0 && unchanged) {
    ++stable_count_;
  } else {
    stable_count_ = 0;
  }
  ++iterations_;
}

CrtState crt_fold(CrtState state, std::uint32_t r, const Prime& p) {
  state.fold(r, p);
  return state;
}

std::optional<Rational> ratrec(const mpz_class& u, const mpz_class& modulus,
                               const mpz_class& num_bound,
                               const mpz_class& den_bound) {
  if (sgn(u) < 0 || u >= modulus) {
    throw std::invalid_argument("ratrec: residue outside [0, M)");
  }
  if (num_bound < 1 || den_bound < 1) {
    throw std::invalid_argument("ratrec: bounds must be positive");
  }
  mpz_class r0 = modulus;
  mpz_class r1 = u;
  mpz_class t0 = 0;
  mpz_class t1 = 1;
  mpz_class q;
  mpz_class tmp;
  while (r1 >= num_bound) {
    mpz_fdiv_qr(q.get_mpz_t(), tmp.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    r0.swap(r1);
    r1.swap(tmp);  // r1 = r0_old mod r1_old
    // t_{k+1} = t_{k-1} - q t_k
    mpz_submul(t0.get_mpz_t(), q.get_mpz_t(), t1.get_mpz_t());
    t0.swap(t1);
  }
  if (sgn(t1) == 0 || mpz_cmpabs(t1.get_mpz_t(), den_bound.get_mpz_t()) >= 0) return std::nullopt;
  mpz_class a = r1;
  mpz_class b = t1;
  if (sgn(b) < 0) {
    a = -a;
    b = -b;
  }
  if (gcd(a, b) != 1) return std::nullopt;
  // Postcondition: a ≡ b·u (mod M) and the bounds.
  mpz_class check = b * u - a;
  if (!mpz_divisible_p(check.get_mpz_t(), modulus.get_mpz_t())) return std::nullopt;
  if (mpz_cmpabs(a.get_mpz_t(), num_bound.get_mpz_t()) >= 0 || b >= den_bound) return std::nullopt;
  return canonicalize(std::move(a), std::move(b));
}

std::pair<mpz_class, mpz_class> wang_bounds(const mpz_class& modulus) {
  mpz_class half = modulus / 2;
  mpz_class n;
  mpz_sqrt(n.get_mpz_t(), half.get_mpz_t());
  return {n, n};
}

std::pair<mpz_class, mpz_class> heuristic_bounds(const mpz_class& modulus,
                                                 const mpz_class& num_hint,
                                                 const mpz_class& den_hint) {
  if (num_hint < 1 || den_hint < 1) {
    throw std::invalid_argument("heuristic_bounds: hints must be positive");
  }
  auto bound = [&](const mpz_class& top, const mpz_class& bottom) {
    mpz_class q = modulus * top / (2 * bottom);
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), q.get_mpz_t());
    return s < 1 ? mpz_class(1) : s;
  };
  return {bound(num_hint, den_hint), bound(den_hint, num_hint)};
}

bool RatrecSchedule::due(std::size_t i) {
  while (next_ * next_ < i) ++next_;
  if (next_ * next_ == i) {
    ++next_;
    ++attempts_;
    return true;
  }
  return false;
}

}  // namespace ratdet
