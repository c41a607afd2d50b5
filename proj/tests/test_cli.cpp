#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ratdet/cli.hpp"
#include "ratdet/generators.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ratdet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = ratdet::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "ratdet_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("det prints numerator and denominator") {
  const Run r = run({"det", "--gen", "hilbert:2", "--strategy", "precdet"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n12\n");
  CHECK(r.err.find("strategy=precdet") != std::string::npos);
}

TEST_CASE("det with every strategy and flag") {
  for (const char* s : {"ratlu", "precdet", "precmat", "dixon", "adaptive"}) {
    const Run r = run({"det", "--gen", "hilbert:5", "--strategy", s, "--prime-bits", "20",
                       "--et", "3", "--certify"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n" + ratdet::hilbert_det_closed_form(5).den().get_str() + "\n");
  }
  const Run structured = run({"det", "--gen", "hilbert:6", "--structured"});
  CHECK(structured.code == 0);
  CHECK(lines(structured.out)[1] == ratdet::hilbert_det_closed_form(6).den().get_str());
}

TEST_CASE("det reads files and reports parse errors") {
  const auto dir = scratch();
  std::ofstream(dir / "good.mtx") << "%%MatrixMarket matrix array real general\n2 2\n0.5\n0.1\n0.25\n1\n";
  std::ofstream(dir / "bad.mtx") << "%%MatrixMarket matrix array real general\n2 2\n0.5\nabc\n";
  std::ofstream(dir / "m.txt") << "1/2,1/3\n1/4,1/5\n";

  const Run good = run({"det", "--input", (dir / "good.mtx").string()});
  CHECK(good.code == 0);
  CHECK(good.out == "19\n40\n");  // 1/2 - 1/40

  const Run bad = run({"det", "--input", (dir / "bad.mtx").string()});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("parse error: line 4") != std::string::npos);

  const Run csv = run({"det", "--input", (dir / "m.txt").string(), "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out == "1\n60\n");

  const Run missing = run({"det", "--input", (dir / "nope.mtx").string()});
  CHECK(missing.code != 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cf-approx replaces entries by approximants") {
  const auto dir = scratch();
  std::ofstream(dir / "d.csv") << "0.333333,0.5\n0.25,0.142857\n";
  const Run r = run({"det", "--input", (dir / "d.csv").string(), "--cf-approx", "10"});
  // [[1/3, 1/2], [1/4, 1/7]] → 1/21 - 1/8 = -13/168
  CHECK(r.code == 0);
  CHECK(r.out == "-13\n168\n");
  CHECK(run({"det", "--input", (dir / "d.csv").string(), "--cf-approx", "0"}).code != 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("digits abbreviates long integers") {
  const Run r = run({"det", "--gen", "hilbert:30", "--digits", "10"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "1");
  const std::string full = ratdet::hilbert_det_closed_form(30).den().get_str();
  CHECK(l[1] == full.substr(0, 10) + "…(" + std::to_string(full.size()) + " digits)");
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run({}).code != 0);
  CHECK(run({"det"}).code != 0);
  CHECK(run({"det", "--gen", "hilbert:3", "--strategy", "gauss"}).code != 0);
  CHECK(run({"det", "--gen", "hilbert:3", "--prime-bits", "40"}).code != 0);
  CHECK(run({"det", "--gen", "nonsense:3"}).code != 0);
  CHECK(run({"det", "--gen", "hilbert:3", "--input", "x.mtx"}).code != 0);
  CHECK(run({"bench"}).code != 0);
  CHECK(run({"bench", "strategies"}).code != 0);
  CHECK(run({"frobnicate"}).code != 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("seed comes from the flag or RATDET_SEED") {
  const Run a = run({"det", "--gen", "random:4,3", "--seed", "5"});
  const Run b = run({"det", "--gen", "random:4,3", "--seed", "6"});
  CHECK(a.code == 0);
  CHECK(a.out != b.out);
  const std::string expect = ratdet::bareiss_determinant(
      ratdet::gen_random_decimal(4, 3, 5)).num().get_str();
  CHECK(lines(a.out)[0] == expect);

  ::setenv("RATDET_SEED", "5", 1);
  CHECK(run({"det", "--gen", "random:4,3"}).out == a.out);
  ::setenv("RATDET_SEED", "junk", 1);
  CHECK(run({"det", "--gen", "random:4,3"}).code != 0);
  ::unsetenv("RATDET_SEED");
}

TEST_CASE("oracle subcommand") {
  CHECK(run({"oracle", "--gen", "hilbert:3"}).out == "1\n2160\n");
  const Run r = run({"oracle", "--gen", "random:5,2", "--seed", "3"});
  CHECK(r.code == 0);
  const auto v = ratdet::bareiss_determinant(ratdet::gen_random_decimal(5, 2, 3));
  CHECK(r.out == v.num().get_str() + "\n" + v.den().get_str() + "\n");
}

TEST_CASE("bench strategies writes one CSV row per strategy") {
  const auto dir = scratch();
  const auto csv = (dir / "out.csv").string();
  const Run r = run({"bench", "strategies", "--gen", "hilbert:20", "--csv", csv});
  CHECK(r.code == 0);
  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto l = lines(ss.str());
  REQUIRE(l.size() == 6);
  CHECK(l[0] == "matrix_id,m,strategy,wall_ms,primes,bits_n,bits_d,bits_D,overapprox_ratio");
  for (std::size_t k = 1; k < l.size(); ++k) CHECK(l[k].rfind("hilbert20,20,", 0) == 0);

  const Run multi = run({"bench", "strategies", "--gen", "hilbert:8", "--gen", "random:6,6",
                         "--strategies", "precdet", "--strategies", "dixon", "--jobs", "2"});
  CHECK(multi.code == 0);
  const auto ml = lines(multi.out);
  REQUIRE(ml.size() == 5);
  CHECK(ml[1].rfind("hilbert8,8,precdet,", 0) == 0);
  CHECK(ml[4].rfind("random6,6,dixon,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bench imaging") {
  const Run r = run({"bench", "imaging", "--gen", "hilbert:30", "--primes", "3", "--structured"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "matrix_id,m,primes,structured,rat_ms,int_ms,rat_over_int,log2_A,log2_Atilde");
  CHECK(l[1].rfind("hilbert30,30,3,1,", 0) == 0);
  CHECK(run({"bench", "imaging", "--gen", "random:5,2", "--structured"}).code != 0);
}
