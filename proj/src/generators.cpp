#include "ratdet/generators.hpp"

#include <charconv>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace ratdet {

RationalMatrix gen_hilbert(std::size_t m) {
  RationalMatrix h(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      h(i, j) = canonicalize(1, mpz_class(static_cast<unsigned long>(i + j + 1)));
    }
  }
  return h;
}

Rational hilbert_det_closed_form(std::size_t m) {
  if (m == 0) throw std::invalid_argument("Hilbert dimension must be >= 1");
  mpz_class den = 1;
  mpz_class binom;
  for (unsigned long k = 1; k < m; ++k) {
    mpz_bin_uiui(binom.get_mpz_t(), 2 * k, k);
    den *= (2 * k + 1) * binom * binom;
  }
  return canonicalize(1, den);
}

RationalMatrix gen_random_decimal(std::size_t m, unsigned places, std::uint64_t seed) {
  if (places < 1 || places > 18) throw std::invalid_argument("places must lie in [1, 18]");
  std::uint64_t scale = 1;
  for (unsigned k = 0; k < places; ++k) scale *= 10;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, scale);
  const mpz_class den(static_cast<unsigned long>(scale));
  RationalMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a(i, j) = canonicalize(mpz_class(static_cast<unsigned long>(dist(rng))), den);
    }
  }
  return a;
}

RationalMatrix gen_random_rational(std::size_t m, std::uint64_t max_den, std::uint64_t seed) {
  if (max_den < 1) throw std::invalid_argument("max_den must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> den_dist(1, max_den);
  std::uniform_int_distribution<std::int64_t> num_dist(-static_cast<std::int64_t>(max_den),
                                                       static_cast<std::int64_t>(max_den));
  RationalMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto num = num_dist(rng);
      const auto den = den_dist(rng);
      a(i, j) = canonicalize(mpz_class(static_cast<long>(num)),
                             mpz_class(static_cast<unsigned long>(den)));
    }
  }
  return a;
}

mpz_class bareiss_determinant(const IntegerMatrix& input) {
  const std::size_t n = input.dim();
  if (n == 0) return 1;
  std::vector<mpz_class> a(input.entries().begin(), input.entries().end());
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * n + j]; };
  mpz_class prev = 1;
  int sign = 1;
  mpz_class t;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(at(k, k)) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(at(r, k)) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) at(k, j).swap(at(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // a_ij = (a_kk a_ij - a_ik a_kj) / prev, exact.
        t = at(k, k) * at(i, j);
        mpz_submul(t.get_mpz_t(), at(i, k).get_mpz_t(), at(k, j).get_mpz_t());
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = at(k, k);
  }
  mpz_class det = at(n - 1, n - 1);
  return sign < 0 ? mpz_class(-det) : det;
}

Rational bareiss_determinant(const RationalMatrix& a) {
  const std::size_t m = a.dim();
  mpz_class l = 1;
  for (const auto& e : a.entries()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.den().get_mpz_t());
  IntegerMatrix scaled(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) scaled(i, j) = a(i, j).num() * (l / a(i, j).den());
  }
  mpz_class lm;
  mpz_pow_ui(lm.get_mpz_t(), l.get_mpz_t(), m);
  return canonicalize(bareiss_determinant(scaled), lm);
}

namespace {

std::uint64_t parse_count(std::string_view s, std::string_view spec) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw std::invalid_argument("bad generator spec '" + std::string(spec) + "'");
  }
  return v;
}

std::pair<std::uint64_t, std::uint64_t> parse_pair(std::string_view s, std::string_view spec) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) {
    throw std::invalid_argument("generator spec '" + std::string(spec) + "' needs two values");
  }
  return {parse_count(s.substr(0, comma), spec), parse_count(s.substr(comma + 1), spec)};
}

}  // namespace

MatrixSource parse_generator(std::string_view spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("bad generator spec '" + std::string(spec) + "'");
  }
  const auto kind = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  MatrixSource src;
  if (kind == "hilbert") {
    src = HilbertSource{parse_count(args, spec)};
  } else if (kind == "random") {
    const auto [m, places] = parse_pair(args, spec);
    src = RandomDecimalSource{m, static_cast<unsigned>(places), seed};
  } else if (kind == "rational") {
    const auto [m, max_den] = parse_pair(args, spec);
    src = RandomRationalSource{m, max_den, seed};
  } else {
    throw std::invalid_argument("unknown generator '" + std::string(kind) + "'");
  }
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (!std::is_same_v<T, FileSource>) {
          if (s.m < 1) throw std::invalid_argument("matrix dimension must be >= 1");
        }
      },
      src);
  return src;
}

std::string source_id(const MatrixSource& source) {
  struct {
    std::string operator()(const FileSource& s) const { return s.path.stem().string(); }
    std::string operator()(const HilbertSource& s) const { return "hilbert" + std::to_string(s.m); }
    std::string operator()(const RandomDecimalSource& s) const {
      return "random" + std::to_string(s.m);
    }
    std::string operator()(const RandomRationalSource& s) const {
      return "rational" + std::to_string(s.m);
    }
  } visitor;
  return std::visit(visitor, source);
}

RationalMatrix materialize(const MatrixSource& source) {
  struct {
    RationalMatrix operator()(const FileSource& s) const {
      return s.format ? load_matrix(s.path, *s.format) : load_matrix(s.path);
    }
    RationalMatrix operator()(const HilbertSource& s) const { return gen_hilbert(s.m); }
    RationalMatrix operator()(const RandomDecimalSource& s) const {
      return gen_random_decimal(s.m, s.places, s.seed);
    }
    RationalMatrix operator()(const RandomRationalSource& s) const {
      return gen_random_rational(s.m, s.max_den, s.seed);
    }
  } visitor;
  return std::visit(visitor, source);
}

}  // namespace ratdet
