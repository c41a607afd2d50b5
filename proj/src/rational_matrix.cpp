#include "ratdet/rational_matrix.hpp"

#include <ostream>
#include <stdexcept>
#include <utility>

#include "ratdet/errors.hpp"

namespace ratdet {

Rational::Rational(const mpq_class& value) {
  mpq_class q(value);
  q.canonicalize();
  num_ = q.get_num();
  den_ = q.get_den();
}

mpq_class Rational::to_mpq() const { return mpq_class(num_, den_); }

std::string Rational::to_string() const {
  if (den_ == 1) return num_.get_str();
  return num_.get_str() + "/" + den_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

Rational canonicalize(mpz_class num, mpz_class den) {
  if (sgn(den) == 0) throw ZeroDenominator();
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
  Rational r;
  if (sgn(num) == 0) return r;
  mpz_class g = gcd(num, den);
  if (g != 1) {
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
  }
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  return r;
}

RationalMatrix identity_rational(std::size_t dim) {
  RationalMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i) a(i, i) = Rational(1);
  return a;
}

namespace {

DenominatorProfile profile_of(const RationalMatrix& a, Orientation o) {
  const std::size_t m = a.dim();
  DenominatorProfile prof;
  prof.orientation = o;
  prof.dens.assign(m, mpz_class(1));
  prof.product = 1;
  for (std::size_t i = 0; i < m; ++i) {
    mpz_class& l = prof.dens[i];
    for (std::size_t j = 0; j < m; ++j) {
      const Rational& e = o == Orientation::Rows ? a(i, j) : a(j, i);
      if (e.den() != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.den().get_mpz_t());
    }
    prof.product *= l;
  }
  return prof;
}

}  // namespace

DenominatorProfile row_denominators(const RationalMatrix& a) {
  return profile_of(a, Orientation::Rows);
}

DenominatorProfile column_denominators(const RationalMatrix& a) {
  return profile_of(a, Orientation::Columns);
}

DenominatorProfile best_denominators(const RationalMatrix& a) {
  auto rows = row_denominators(a);
  auto cols = column_denominators(a);
  return cols.product < rows.product ? std::move(cols) : std::move(rows);
}

IntegerMatrix precondition_matrix(const RationalMatrix& a,
                                  const DenominatorProfile& profile) {
  const std::size_t m = a.dim();
  if (profile.dens.size() != m) {
    throw std::invalid_argument("profile does not match matrix dimension");
  }
  IntegerMatrix out(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Rational& e = a(i, j);
      const mpz_class& scale =
          profile.orientation == Orientation::Rows ? profile.dens[i] : profile.dens[j];
      mpz_class& dst = out(i, j);
      mpz_divexact(dst.get_mpz_t(), scale.get_mpz_t(), e.den().get_mpz_t());
      dst *= e.num();
    }
  }
  return out;
}

std::uint32_t residue(const mpz_class& z, const Prime& p) {
  const mpz_srcptr raw = z.get_mpz_t();
  switch (raw->_mp_size) {
    case 0:
      return 0;
    case 1:
      return p.reduce(mpz_getlimbn(raw, 0));
    case -1:
      return p.neg(p.reduce(mpz_getlimbn(raw, 0)));
    default:
      return static_cast<std::uint32_t>(mpz_fdiv_ui(raw, p.value()));
  }
}

namespace {

// Replaces every denominator residue by its inverse with a single modular
// inversion (prefix products, then one backward sweep).
void invert_all(std::span<std::uint32_t> dens, const Prime& p, std::vector<std::uint32_t>& scratch) {
  const std::size_t n = dens.size();
  if (n == 0) return;
  scratch.resize(n);
  std::uint32_t acc = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (dens[k] == 0) throw BadPrime(p.value());
    scratch[k] = acc;
    acc = p.mul(acc, dens[k]);
  }
  std::uint32_t inv = mod_inverse(acc, p);
  for (std::size_t k = n; k-- > 0;) {
    const std::uint32_t d = dens[k];
    dens[k] = p.mul(inv, scratch[k]);
    inv = p.mul(inv, d);
  }
}

void image_entries(std::span<const Rational> src, std::span<std::uint32_t> dst,
                   const Prime& p) {
  std::vector<std::uint32_t> inv(src.size());
  std::vector<std::uint32_t> scratch;
  for (std::size_t k = 0; k < src.size(); ++k) inv[k] = residue(src[k].den(), p);
  invert_all(inv, p, scratch);
  for (std::size_t k = 0; k < src.size(); ++k) {
    dst[k] = p.mul(residue(src[k].num(), p), inv[k]);
  }
}

}  // namespace

ModMatrix image_rational(const RationalMatrix& a, const Prime& p) {
  ModMatrix out(p, a.dim());
  image_entries(a.entries(), out.entries(), p);
  return out;
}

ModMatrix image_integer(const IntegerMatrix& m, const Prime& p) {
  ModMatrix out(p, m.dim());
  auto dst = out.entries();
  auto src = m.entries();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = residue(src[k], p);
  return out;
}

bool is_hankel(const RationalMatrix& a) {
  const std::size_t m = a.dim();
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 0; j + 1 < m; ++j) {
      if (!(a(i, j) == a(i - 1, j + 1))) return false;
    }
  }
  return true;
}

RationalImager::RationalImager(const RationalMatrix& a, bool structured)
    : a_(&a), structured_(structured) {
  if (!structured_) return;
  if (!is_hankel(a)) {
    throw std::invalid_argument("structured imaging requires a Hankel matrix");
  }
  const std::size_t m = a.dim();
  if (m == 0) return;
  antidiagonals_.reserve(2 * m - 1);
  for (std::size_t j = 0; j < m; ++j) antidiagonals_.push_back(a(0, j));
  for (std::size_t i = 1; i < m; ++i) antidiagonals_.push_back(a(i, m - 1));
}

ModMatrix RationalImager::image(const Prime& p) const {
  if (!structured_) return image_rational(*a_, p);
  const std::size_t m = a_->dim();
  std::vector<std::uint32_t> values(antidiagonals_.size());
  image_entries(antidiagonals_, values, p);
  ModMatrix out(p, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out(i, j) = values[i + j];
  }
  return out;
}

mpz_class ceil_sqrt(const mpz_class& n) {
  if (sgn(n) < 0) throw std::invalid_argument("ceil_sqrt of a negative number");
  mpz_class r;
  mpz_class rem;
  mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  if (sgn(rem) != 0) ++r;
  return r;
}

namespace {

mpz_class hadamard_from(const IntegerMatrix& m, bool by_rows) {
  const std::size_t n = m.dim();
  mpz_class product = 1;
  mpz_class norm2;
  for (std::size_t i = 0; i < n; ++i) {
    norm2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const mpz_class& e = by_rows ? m(i, j) : m(j, i);
      mpz_addmul(norm2.get_mpz_t(), e.get_mpz_t(), e.get_mpz_t());
    }
    product *= norm2;
  }
  mpz_class h = ceil_sqrt(product);
  return h < 1 ? mpz_class(1) : h;
}

}  // namespace

mpz_class hadamard_bound(const IntegerMatrix& m) { return hadamard_from(m, true); }

mpz_class hadamard_bound_columns(const IntegerMatrix& m) {
  return hadamard_from(m, false);
}

Bounds determinant_bounds(const DenominatorProfile& profile,
                          const IntegerMatrix& preconditioned) {
  Bounds b;
  b.hadamard = hadamard_bound(preconditioned);
  b.den_bound = profile.product;
  b.num_bound = b.den_bound * b.hadamard;
  return b;
}

Bounds determinant_bounds(const RationalMatrix& a) {
  const auto profile = best_denominators(a);
  return determinant_bounds(profile, precondition_matrix(a, profile));
}

mpz_class max_norm(const RationalMatrix& a) {
  mpz_class best = 0;
  for (const auto& e : a.entries()) {
    if (mpz_cmpabs(e.num().get_mpz_t(), best.get_mpz_t()) > 0) best = abs(e.num());
    if (e.den() > best) best = e.den();
  }
  return best;
}

mpz_class max_norm(const IntegerMatrix& m) {
  mpz_class best = 0;
  for (const auto& e : m.entries()) {
    if (mpz_cmpabs(e.get_mpz_t(), best.get_mpz_t()) > 0) best = abs(e);
  }
  return best;
}

}  // namespace ratdet
