#include "ratdet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <future>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "ratdet/bench.hpp"
#include "ratdet/errors.hpp"
#include "ratdet/generators.hpp"
#include "ratdet/matrix_io.hpp"
#include "ratdet/strategies.hpp"

namespace ratdet {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RATDET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("RATDET_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

std::optional<MatrixFormat> parse_format(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "mtx" || name == "mm") return MatrixFormat::MatrixMarket;
  if (name == "csv") return MatrixFormat::Csv;
  throw std::invalid_argument("unknown format '" + name + "' (expected mtx or csv)");
}

// Keeps the first `digits` digits of a long integer and records the length.
std::string abbreviate(const mpz_class& v, std::size_t digits) {
  std::string s = v.get_str();
  const bool negative = !s.empty() && s[0] == '-';
  const std::size_t len = s.size() - (negative ? 1 : 0);
  if (digits == 0 || len <= digits) return s;
  return s.substr(0, digits + (negative ? 1 : 0)) + "…(" + std::to_string(len) + " digits)";
}

struct SourceOptions {
  std::vector<std::string> inputs;
  std::vector<std::string> gens;
  std::string format;
  std::optional<std::uint64_t> seed;

  std::vector<MatrixSource> resolve() const {
    std::vector<MatrixSource> out;
    const auto fmt = parse_format(format);
    for (const auto& path : inputs) out.push_back(FileSource{path, fmt});
    for (const auto& g : gens) out.push_back(parse_generator(g, *seed));
    return out;
  }
};

void add_source_flags(CLI::App* cmd, SourceOptions& src, bool repeatable) {
  auto* in = cmd->add_option("--input", src.inputs, "Matrix file (.mtx or CSV)");
  auto* gen = cmd->add_option("--gen", src.gens,
                              "Generator: hilbert:M, random:M,PLACES or rational:M,MAXDEN");
  if (!repeatable) {
    in->expected(1);
    gen->expected(1);
    in->excludes(gen);
  }
  cmd->add_option("--format", src.format, "Input format: mtx or csv (default by extension)");
  cmd->add_option("--seed", src.seed, "Seed for generators and primes (default $RATDET_SEED or 1)");
}

void add_strategy_flags(CLI::App* cmd, StrategyConfig& cfg) {
  cmd->add_option("--prime-bits", cfg.prime_bits, "Prime bit length B")
      ->check(CLI::Range(20u, 31u));
  cmd->add_option("--et", cfg.et_threshold, "Early-termination threshold t");
  cmd->add_flag("--certify", cfg.force_bound_run, "Run every loop to its certified bound");
  cmd->add_flag("--structured", cfg.structured, "Image Hankel matrices from 2m-1 entries");
  cmd->add_option("--dixon-trials", cfg.dixon_trials, "Right-hand sides for the invariant factor");
}

void print_stats(std::ostream& err, const std::string& id, const DetResult& r) {
  err << "matrix " << id << ": strategy=" << strategy_name(r.strategy)
      << " primes=" << r.primes_used << " skipped=" << r.primes_skipped
      << " ratrec=" << r.ratrec_attempts << " et=" << (r.et_triggered ? "yes" : "no")
      << " bits_D=" << mpz_sizeinbase(r.den_bound.get_mpz_t(), 2);
  if (r.invariant_factor != 1) {
    err << " bits_pi=" << mpz_sizeinbase(r.invariant_factor.get_mpz_t(), 2);
  }
  if (r.imaging) {
    err << " imaging=" << (*r.imaging == ImagingPath::Rational ? "rational" : "integer");
  }
  err << std::fixed << std::setprecision(2) << " total_ms=" << r.times.total_ms
      << std::defaultfloat << '\n';
}

// Runs `work` on each source, `jobs` at a time, and returns results in order.
template <typename Result, typename Fn>
std::vector<Result> for_each_source(const std::vector<MatrixSource>& sources, unsigned jobs,
                                    Fn work) {
  std::vector<Result> results;
  results.reserve(sources.size());
  if (jobs <= 1) {
    for (const auto& s : sources) results.push_back(work(s));
    return results;
  }
  for (std::size_t start = 0; start < sources.size(); start += jobs) {
    std::vector<std::future<Result>> batch;
    const std::size_t end = std::min(sources.size(), start + jobs);
    for (std::size_t k = start; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, work, std::cref(sources[k])));
    }
    for (auto& f : batch) results.push_back(f.get());
  }
  return results;
}

template <typename Writer, typename Records>
void emit_csv(const std::string& path, std::ostream& out, Writer write, const Records& records) {
  if (path.empty() || path == "-") {
    write(out, records);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f, records);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact determinants of rational matrices", "ratdet"};
  app.require_subcommand(1);

  // det
  SourceOptions det_src;
  StrategyConfig det_cfg;
  std::string det_strategy = "adaptive";
  std::string cf_bound;
  std::size_t digits = 0;
  auto* det = app.add_subcommand("det", "Compute det(A)");
  add_source_flags(det, det_src, false);
  add_strategy_flags(det, det_cfg);
  det->add_option("--strategy", det_strategy, "ratlu, precdet, precmat, dixon or adaptive");
  det->add_option("--cf-approx", cf_bound,
                  "Replace each entry by its best approximant with denominator <= BOUND");
  det->add_option("--digits", digits, "Abbreviate numerator and denominator to K digits");

  // bench
  SourceOptions bench_src;
  StrategyConfig bench_cfg;
  std::string csv_path;
  std::size_t bench_primes = 10;
  std::vector<std::string> bench_strategies_list;
  unsigned jobs = 1;
  auto* bench = app.add_subcommand("bench", "Benchmark harness");
  bench->require_subcommand(1);
  auto* imaging = bench->add_subcommand("imaging", "Rational vs integer imaging cost");
  auto* strategies = bench->add_subcommand("strategies", "Time every strategy");
  for (auto* sub : {imaging, strategies}) {
    add_source_flags(sub, bench_src, true);
    sub->add_option("--csv", csv_path, "Output CSV path (default stdout)");
    sub->add_option("--jobs", jobs, "Matrices processed concurrently")->check(CLI::PositiveNumber);
  }
  imaging->add_option("--primes", bench_primes, "Primes per matrix")->check(CLI::PositiveNumber);
  imaging->add_flag("--structured", bench_cfg.structured, "Hankel imaging");
  add_strategy_flags(strategies, bench_cfg);
  strategies->add_option("--strategies", bench_strategies_list,
                         "Subset of ratlu, precdet, precmat, dixon, adaptive");

  // oracle
  SourceOptions oracle_src;
  std::size_t oracle_digits = 0;
  auto* oracle = app.add_subcommand("oracle", "Reference determinant (closed form or Bareiss)");
  add_source_flags(oracle, oracle_src, false);
  oracle->add_option("--digits", oracle_digits, "Abbreviate output to K digits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const std::uint64_t env_seed = default_seed();
    for (auto* opts : {&det_src, &bench_src, &oracle_src}) {
      if (!opts->seed) opts->seed = env_seed;
    }
    auto require_one = [](const std::vector<MatrixSource>& s) {
      if (s.size() != 1) throw std::invalid_argument("exactly one of --input or --gen is required");
      return s.front();
    };

    if (det->parsed()) {
      const auto strategy = parse_strategy(det_strategy);
      if (!strategy) throw std::invalid_argument("unknown strategy '" + det_strategy + "'");
      det_cfg.seed = *det_src.seed;
      det_cfg.validate();
      const MatrixSource src = require_one(det_src.resolve());
      RationalMatrix a = materialize(src);
      if (!cf_bound.empty()) {
        const mpz_class bound(cf_bound);
        if (bound < 1) throw std::invalid_argument("--cf-approx bound must be >= 1");
        for (auto& e : a.entries()) e = cf_approximant(e, bound);
      }
      const DetResult r = compute_determinant(*strategy, a, det_cfg);
      out << abbreviate(r.value.num(), digits) << '\n'
          << abbreviate(r.value.den(), digits) << '\n';
      print_stats(err, source_id(src), r);
      return 0;
    }

    if (oracle->parsed()) {
      const MatrixSource src = require_one(oracle_src.resolve());
      Rational v;
      if (const auto* h = std::get_if<HilbertSource>(&src)) {
        v = hilbert_det_closed_form(h->m);
      } else {
        v = bareiss_determinant(materialize(src));
      }
      out << abbreviate(v.num(), oracle_digits) << '\n'
          << abbreviate(v.den(), oracle_digits) << '\n';
      return 0;
    }

    const auto sources = bench_src.resolve();
    if (sources.empty()) throw std::invalid_argument("bench needs at least one --input or --gen");
    bench_cfg.seed = *bench_src.seed;
    bench_cfg.validate();

    if (imaging->parsed()) {
      const auto records = for_each_source<ImagingRecord>(
          sources, jobs, [&](const MatrixSource& s) {
            return bench_imaging(materialize(s), source_id(s), bench_primes, bench_cfg.seed,
                                 bench_cfg.structured);
          });
      emit_csv(csv_path, out, [](std::ostream& os, const auto& r) { write_imaging_csv(os, r); },
               records);
      return 0;
    }

    std::vector<Strategy> chosen;
    if (bench_strategies_list.empty()) {
      chosen = {Strategy::RatLU, Strategy::PrecDetLU, Strategy::PrecMatLU,
                Strategy::PrecMatDixon, Strategy::Adaptive};
    }
    for (const auto& name : bench_strategies_list) {
      const auto s = parse_strategy(name);
      if (!s) throw std::invalid_argument("unknown strategy '" + name + "'");
      chosen.push_back(*s);
    }
    const auto per_source = for_each_source<std::vector<BenchRecord>>(
        sources, jobs, [&](const MatrixSource& s) {
          return bench_strategies(materialize(s), source_id(s), chosen, bench_cfg);
        });
    std::vector<BenchRecord> records;
    for (const auto& batch : per_source) {
      for (const auto& r : batch) {
        if (!r.error.empty()) err << r.matrix_id << ' ' << r.strategy << ": " << r.error << '\n';
        records.push_back(r);
      }
    }
    emit_csv(csv_path, out, [](std::ostream& os, const auto& r) { write_bench_csv(os, r); },
             records);
    const bool any_failed = std::any_of(records.begin(), records.end(),
                                        [](const BenchRecord& r) { return !r.error.empty(); });
    return any_failed ? 3 : 0;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ratdet
