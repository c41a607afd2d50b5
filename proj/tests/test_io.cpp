#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ratdet/bench.hpp"
#include "ratdet/errors.hpp"
#include "ratdet/generators.hpp"
#include "ratdet/matrix_io.hpp"

using namespace ratdet;

namespace {

Rational q(long n, long d) { return canonicalize(mpz_class(n), mpz_class(d)); }

int parse_error_line(std::string_view text) {
  try {
    parse_matrix_market(text);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line);
  }
  return -1;
}

}  // namespace

TEST_CASE("decimal literals are exact") {
  CHECK(parse_decimal("1.5e-2") == q(3, 200));
  CHECK(parse_decimal("0.1") == q(1, 10));
  CHECK(parse_decimal("-.25") == q(-1, 4));
  CHECK(parse_decimal("+3.") == 3);
  CHECK(parse_decimal("1E3") == 1000);
  CHECK(parse_decimal("2.5D+1") == 25);
  CHECK(parse_decimal("-0.0") == 0);
  CHECK(parse_decimal("123456789012345678901234567890") ==
        Rational(mpz_class("123456789012345678901234567890")));
  CHECK(parse_decimal("0.30000000000000004") == q(30000000000000004L, 100000000000000000L));
  for (const char* bad : {"", "-", ".", "1.2.3", "e5", "1e", "1e+", "0x10", "1 2", "nan"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_decimal(bad), std::invalid_argument);
  }
  CHECK_THROWS_AS(parse_decimal("1e999999"), std::invalid_argument);
}

TEST_CASE("fraction literals") {
  CHECK(parse_literal("-3/9") == q(-1, 3));
  CHECK(parse_literal(" 0.75 ") == q(3, 4));
  CHECK_THROWS_AS(parse_literal("1/0"), ZeroDenominator);
  CHECK(parse_literal("1/-2") == q(-1, 2));
  CHECK_THROWS_AS(parse_literal("1/2/3"), std::invalid_argument);
}

TEST_CASE("to_decimal_string") {
  CHECK(to_decimal_string(q(3, 200)) == "0.015");
  CHECK(to_decimal_string(q(-5, 4)) == "-1.25");
  CHECK(to_decimal_string(Rational(42)) == "42");
  CHECK_THROWS_AS(to_decimal_string(q(1, 3)), std::invalid_argument);
}

TEST_CASE("Matrix Market array data is column-major") {
  const auto a = parse_matrix_market(
      "%%MatrixMarket matrix array real general\n"
      "% comment\n"
      "2 2\n0.5\n0.1\n0.25\n1\n");
  CHECK(a(0, 0) == q(1, 2));
  CHECK(a(0, 1) == q(1, 4));
  CHECK(a(1, 0) == q(1, 10));
  CHECK(a(1, 1) == 1);
}

TEST_CASE("Matrix Market coordinate, symmetric and skew storage") {
  const auto a = parse_matrix_market(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "3 3 2\n2 1 0.5\n3 3 -1.5e-2\n");
  CHECK(a(0, 1) == q(1, 2));
  CHECK(a(1, 0) == q(1, 2));
  CHECK(a(2, 2) == q(-3, 200));
  CHECK(a(0, 0) == 0);

  const auto s = parse_matrix_market(
      "%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 7\n");
  CHECK(s(1, 0) == 7);
  CHECK(s(0, 1) == -7);

  const auto sym_array = parse_matrix_market(
      "%%MatrixMarket matrix array integer symmetric\n2 2\n1\n2\n3\n");
  CHECK(sym_array(0, 1) == 2);
  CHECK(sym_array(1, 0) == 2);
  CHECK(sym_array(1, 1) == 3);
}

TEST_CASE("Matrix Market errors carry line numbers") {
  CHECK_THROWS_AS(parse_matrix_market("%%MatrixMarket matrix coordinate complex general\n"),
                  UnsupportedField);
  CHECK_THROWS_AS(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n"),
                  UnsupportedField);
  CHECK(parse_error_line("hello\n") == 1);
  CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n") == 5);
  CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 3\n") == 2);
  CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n") == 5);
  CHECK(parse_error_line(
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n") == 4);
  CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n") == 3);
  CHECK(parse_error_line("%%MatrixMarket matrix array integer general\n1 1\n1.5\n") == 3);
}

TEST_CASE("Matrix Market round trip is exact") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + trial % 9;
    RationalMatrix a(m);
    std::uniform_int_distribution<long> num(-1000000, 1000000);
    for (auto& e : a.entries()) {
      const int two = static_cast<int>(rng() % 8);
      const int five = static_cast<int>(rng() % 8);
      mpz_class den = 1;
      den <<= two;
      for (int k = 0; k < five; ++k) den *= 5;
      e = canonicalize(mpz_class(num(rng)), den);
    }
    std::ostringstream os;
    write_matrix_market(os, a);
    REQUIRE(parse_matrix_market(os.str()) == a);
  }
  std::ostringstream os;
  write_matrix_market(os, gen_random_decimal(4, 3, 1));
  CHECK(os.str().rfind("%%MatrixMarket matrix array real general", 0) == 0);
  std::ostringstream bad;
  CHECK_THROWS_AS(write_matrix_market(bad, gen_hilbert(3)), std::invalid_argument);
}

TEST_CASE("CSV matrices") {
  const auto a = parse_csv_matrix("# comment\n1/2, 0.25\n-3, 1e1\n");
  CHECK(a(0, 0) == q(1, 2));
  CHECK(a(1, 1) == 10);
  CHECK_THROWS_AS(parse_csv_matrix("1,2\n3\n"), ParseError);
  CHECK_THROWS_AS(parse_csv_matrix("1,2\n3,4\n5,6\n"), ParseError);
  CHECK_THROWS_AS(parse_csv_matrix(""), ParseError);
  std::ostringstream os;
  write_csv_matrix(os, gen_hilbert(4));
  CHECK(parse_csv_matrix(os.str()) == gen_hilbert(4));
}

TEST_CASE("load_matrix by extension") {
  const auto dir = std::filesystem::temp_directory_path() / "ratdet_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "a.mtx") << "%%MatrixMarket matrix array integer general\n1 1\n5\n";
    std::ofstream(dir / "b.csv") << "1/3\n";
  }
  CHECK(load_matrix(dir / "a.mtx")(0, 0) == 5);
  CHECK(load_matrix(dir / "b.csv")(0, 0) == q(1, 3));
  CHECK(load_matrix(dir / "b.csv", MatrixFormat::Csv)(0, 0) == q(1, 3));
  CHECK_THROWS(load_matrix(dir / "missing.mtx"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cf_approximant examples") {
  CHECK(cf_approximant(q(333333, 1000000), 100) == q(1, 3));
  CHECK(cf_approximant(q(1, 2), 10) == q(1, 2));
  CHECK(cf_approximant(q(3141592, 1000000), 200) == q(355, 113));
  CHECK(cf_approximant(q(-3141592, 1000000), 200) == q(-355, 113));
  CHECK(cf_approximant(q(7, 3), 1) == 2);
  CHECK_THROWS_AS(cf_approximant(q(1, 2), 0), std::invalid_argument);
}

TEST_CASE("cf_approximant is optimal") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const unsigned long bound = 1 + rng() % 500;
    const Rational r = canonicalize(mpz_class(static_cast<long>(rng() % 2000001) - 1000000),
                                    mpz_class(static_cast<unsigned long>(1 + rng() % 999999)));
    const Rational got = cf_approximant(r, bound);
    REQUIRE(got.den() <= bound);
    const mpq_class best = oracle::best_approximation(r.to_mpq(), bound);
    REQUIRE(abs(got.to_mpq() - r.to_mpq()) == abs(best - r.to_mpq()));
  }
}

TEST_CASE("generators") {
  CHECK(gen_hilbert(1)(0, 0) == 1);
  const auto h2 = gen_hilbert(2);
  CHECK(h2(0, 1) == q(1, 2));
  CHECK(h2(1, 1) == q(1, 3));
  CHECK(gen_hilbert(3)(2, 2) == q(1, 5));

  CHECK(hilbert_det_closed_form(1) == 1);
  CHECK(hilbert_det_closed_form(2) == q(1, 12));
  CHECK(hilbert_det_closed_form(3) == q(1, 2160));

  const auto d1 = gen_random_decimal(6, 1, 5);
  for (const auto& e : d1.entries()) {
    CHECK(e.to_mpq() >= 0);
    CHECK(e.to_mpq() <= 1);
    CHECK(mpz_divisible_p(mpz_class(10).get_mpz_t(), e.den().get_mpz_t()));
  }
  CHECK(gen_random_decimal(8, 6, 99) == gen_random_decimal(8, 6, 99));
  CHECK_FALSE(gen_random_decimal(8, 6, 99) == gen_random_decimal(8, 6, 100));
  for (const auto& d : row_denominators(gen_random_decimal(10, 6, 3)).dens) {
    CHECK(mpz_divisible_p(mpz_class(1000000).get_mpz_t(), d.get_mpz_t()));
  }
  CHECK_THROWS_AS(gen_random_decimal(2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_rational(2, 0, 1), std::invalid_argument);
  const auto rr = gen_random_rational(6, 7, 2);
  for (const auto& e : rr.entries()) CHECK(e.den() <= 7);
}

TEST_CASE("Hilbert closed form equals Bareiss for m <= 12") {
  for (std::size_t m = 1; m <= 12; ++m) {
    CHECK(bareiss_determinant(gen_hilbert(m)) == hilbert_det_closed_form(m));
    CHECK(oracle::from_mpq(oracle::gauss_det(gen_hilbert(m))) == hilbert_det_closed_form(m));
  }
}

TEST_CASE("Bareiss matches Gaussian elimination") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_rational_matrix(1 + trial % 10, 30, rng);
    REQUIRE(bareiss_determinant(a) == oracle::from_mpq(oracle::gauss_det(a)));
  }
}

TEST_CASE("random decimal denominators divide the bound") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto a = gen_random_decimal(12, 6, seed);
    const Rational det = bareiss_determinant(a);
    const mpz_class d = determinant_bounds(a).den_bound;
    CHECK(mpz_divisible_p(d.get_mpz_t(), det.den().get_mpz_t()));
  }
}

TEST_CASE("generator specs") {
  CHECK(std::get<HilbertSource>(parse_generator("hilbert:7", 1)).m == 7);
  const auto r = std::get<RandomDecimalSource>(parse_generator("random:5,6", 9));
  CHECK(r.m == 5);
  CHECK(r.places == 6);
  CHECK(r.seed == 9);
  CHECK(std::get<RandomRationalSource>(parse_generator("rational:4,50", 1)).max_den == 50);
  for (const char* bad : {"hilbert", "hilbert:", "hilbert:0", "random:5", "foo:3", "hilbert:3x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_generator(bad, 1), std::invalid_argument);
  }
  CHECK(source_id(parse_generator("hilbert:100", 1)) == "hilbert100");
  CHECK(source_id(parse_generator("random:50,6", 1)) == "random50");
  CHECK(source_id(FileSource{"/x/y/bcsstk01.mtx", std::nullopt}) == "bcsstk01");
  CHECK(materialize(parse_generator("hilbert:3", 1)) == gen_hilbert(3));
}

TEST_CASE("bench_imaging records sizes") {
  const auto id = bench_imaging(identity_rational(10), "identity10", 3, 1);
  CHECK(id.primes == 3);
  CHECK(id.log2_a == 0);
  CHECK(id.log2_atilde == 0);

  const auto h = bench_imaging(gen_hilbert(200), "hilbert200", 2, 1);
  CHECK(h.log2_a == 8);
  CHECK(std::labs(h.log2_atilde - 567) <= 2);
  CHECK(h.rational_ms > 0);
  CHECK(h.integer_ms > 0);
  CHECK(h.ratio == doctest::Approx(h.rational_ms / h.integer_ms));
}

TEST_CASE("bench_strategies and CSV") {
  const Strategy all[] = {Strategy::RatLU, Strategy::PrecDetLU, Strategy::PrecMatLU,
                          Strategy::PrecMatDixon, Strategy::Adaptive};
  const auto records = bench_strategies(gen_hilbert(20), "hilbert20", all, {});
  REQUIRE(records.size() == 5);
  for (const auto& r : records) {
    CHECK(r.error.empty());
    CHECK(r.value == hilbert_det_closed_form(20));
    CHECK(r.bits_n == 1);
    CHECK(r.overapprox_ratio >= 0);
    CHECK(r.bits_den_bound >= r.bits_d);
  }
  std::ostringstream os;
  write_bench_csv(os, records);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "matrix_id,m,strategy,wall_ms,primes,bits_n,bits_d,bits_D,overapprox_ratio");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    CHECK(line.rfind("hilbert20,20,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("over-approximation ratio") {
  CHECK(overapprox_ratio(12, 12) == 0.0);
  CHECK(overapprox_ratio(120, 60) == doctest::Approx(1.0 / std::log2(60.0)));
  CHECK(overapprox_ratio(8, 1) == doctest::Approx(3.0));
  CHECK_THROWS_AS(overapprox_ratio(10, 3), std::invalid_argument);

  // Hilbert 100: d from the closed form, D from the denominator profile.
  const auto h = gen_hilbert(100);
  const mpz_class d = hilbert_det_closed_form(100).den();
  const mpz_class big_d = determinant_bounds(h).den_bound;
  CHECK(overapprox_ratio(big_d, d) == doctest::Approx(0.086).epsilon(0.12));
  CHECK(std::lround(log2_exact(d)) == 19737);
}
