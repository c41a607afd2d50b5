#include "ratdet/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ratdet/errors.hpp"

namespace ratdet {

namespace {

constexpr long kMaxExponent = 100000;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

struct Token {
  std::string text;
  std::size_t line;
};

}  // namespace

Rational parse_decimal(std::string_view literal) {
  std::string_view s = trim(literal);
  auto fail = [&] {
    throw std::invalid_argument("malformed decimal literal '" + std::string(literal) + "'");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';

  std::string digits;
  std::size_t frac_digits = 0;
  bool any_digit = false;
  while (i < s.size() && is_digit(s[i])) {
    digits.push_back(s[i++]);
    any_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) {
      digits.push_back(s[i++]);
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) fail();

  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E' || s[i] == 'd' || s[i] == 'D')) {
    ++i;
    bool exp_negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) exp_negative = s[i++] == '-';
    if (i == s.size() || !is_digit(s[i])) fail();
    while (i < s.size() && is_digit(s[i])) {
      exponent = exponent * 10 + (s[i++] - '0');
      if (exponent > kMaxExponent) fail();
    }
    if (exp_negative) exponent = -exponent;
  }
  if (i != s.size()) fail();

  mpz_class mantissa(digits.empty() ? "0" : digits, 10);
  if (negative) mantissa = -mantissa;
  const long scale = exponent - static_cast<long>(frac_digits);
  if (scale >= 0) return canonicalize(mantissa * pow10(static_cast<unsigned long>(scale)), 1);
  return canonicalize(mantissa, pow10(static_cast<unsigned long>(-scale)));
}

Rational parse_literal(std::string_view literal) {
  std::string_view s = trim(literal);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  auto int_part = [&](std::string_view t) {
    t = trim(t);
    std::string text(t);
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    mpz_class z;
    if (text.empty() || z.set_str(text, 10) != 0) {
      throw std::invalid_argument("malformed fraction '" + std::string(literal) + "'");
    }
    return z;
  };
  const mpz_class den = int_part(s.substr(slash + 1));
  if (sgn(den) == 0) throw ZeroDenominator();
  return canonicalize(int_part(s.substr(0, slash)), den);
}

std::string to_decimal_string(const Rational& r) {
  mpz_class d = r.den();
  unsigned long twos = mpz_remove(d.get_mpz_t(), d.get_mpz_t(), mpz_class(2).get_mpz_t());
  unsigned long fives = mpz_remove(d.get_mpz_t(), d.get_mpz_t(), mpz_class(5).get_mpz_t());
  if (d != 1) {
    throw std::invalid_argument(r.to_string() + " has no finite decimal expansion");
  }
  const unsigned long places = std::max(twos, fives);
  mpz_class scaled = abs(r.num()) * pow10(places) / r.den();
  std::string digits = scaled.get_str();
  std::string out = sgn(r.num()) < 0 ? "-" : "";
  if (places == 0) return out + digits;
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return out + digits;
}

RationalMatrix parse_matrix_market(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string buf(text);
    std::istringstream in(buf);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
  }
  if (lines.empty()) throw ParseError(1, "empty input");

  std::istringstream header(lines[0]);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket") throw ParseError(1, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError(1, "object must be 'matrix'");
  if (format != "array" && format != "coordinate") {
    throw ParseError(1, "format must be 'array' or 'coordinate'");
  }
  if (field == "complex" || field == "pattern") throw UnsupportedField(field);
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError(1, "unknown field '" + field + "'");
  }
  if (symmetry == "hermitian") throw UnsupportedField("hermitian");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
    throw ParseError(1, "unknown symmetry '" + symmetry + "'");
  }
  const bool integer_field = field == "integer";

  std::vector<Token> tokens;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    std::string_view l = trim(lines[ln]);
    if (l.empty() || l.front() == '%') continue;
    std::istringstream in{std::string(l)};
    std::string tok;
    while (in >> tok) tokens.push_back({tok, ln + 1});
  }

  std::size_t pos = 0;
  auto next = [&](const char* what) -> const Token& {
    if (pos == tokens.size()) {
      throw ParseError(lines.size(), std::string("unexpected end of input, expected ") + what);
    }
    return tokens[pos++];
  };
  auto read_index = [&](const char* what) -> std::size_t {
    const Token& t = next(what);
    std::size_t idx = 0;
    for (char c : t.text) {
      if (!is_digit(c)) throw ParseError(t.line, std::string("bad ") + what + " '" + t.text + "'");
      idx = idx * 10 + static_cast<std::size_t>(c - '0');
      if (idx > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(t.line, std::string(what) + " too large");
      }
    }
    if (t.text.empty()) throw ParseError(t.line, std::string("bad ") + what);
    return idx;
  };
  auto read_value = [&]() -> Rational {
    const Token& t = next("value");
    if (integer_field) {
      std::string s = t.text;
      if (!s.empty() && s.front() == '+') s.erase(0, 1);
      mpz_class z;
      if (s.empty() || z.set_str(s, 10) != 0) {
        throw ParseError(t.line, "bad integer '" + t.text + "'");
      }
      return Rational(z);
    }
    try {
      return parse_decimal(t.text);
    } catch (const std::invalid_argument&) {
      throw ParseError(t.line, "bad real '" + t.text + "'");
    }
  };

  const std::size_t size_line = pos < tokens.size() ? tokens[pos].line : lines.size();
  const std::size_t rows = read_index("row count");
  const std::size_t cols = read_index("column count");
  if (rows != cols) throw ParseError(size_line, "matrix must be square");
  const std::size_t m = rows;
  RationalMatrix a(m);

  if (format == "array") {
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t first = 0;
      if (symmetry == "symmetric") first = j;
      if (symmetry == "skew-symmetric") first = j + 1;
      for (std::size_t i = first; i < m; ++i) {
        Rational v = read_value();
        if (symmetry == "skew-symmetric") {
          a(j, i) = canonicalize(-v.num(), v.den());
        } else if (symmetry == "symmetric") {
          a(j, i) = v;
        }
        a(i, j) = std::move(v);
      }
    }
  } else {
    const std::size_t nnz = read_index("entry count");
    std::vector<bool> seen(m * m, false);
    for (std::size_t k = 0; k < nnz; ++k) {
      const std::size_t line = pos < tokens.size() ? tokens[pos].line : lines.size();
      const std::size_t i = read_index("row index");
      const std::size_t j = read_index("column index");
      if (i < 1 || i > m || j < 1 || j > m) throw ParseError(line, "index out of range");
      Rational v = read_value();
      auto store = [&](std::size_t r, std::size_t c, Rational x) {
        if (seen[r * m + c]) throw ParseError(line, "duplicate entry");
        seen[r * m + c] = true;
        a(r, c) = std::move(x);
      };
      if (symmetry == "skew-symmetric" && i == j) {
        throw ParseError(line, "skew-symmetric diagonal must be empty");
      }
      if (symmetry != "general" && i != j) {
        Rational mirrored = symmetry == "skew-symmetric" ? canonicalize(-v.num(), v.den()) : v;
        store(j - 1, i - 1, std::move(mirrored));
      }
      store(i - 1, j - 1, std::move(v));
    }
  }
  if (pos != tokens.size()) throw ParseError(tokens[pos].line, "trailing data");
  return a;
}

void write_matrix_market(std::ostream& os, const RationalMatrix& a) {
  const std::size_t m = a.dim();
  bool all_integer = true;
  for (const auto& e : a.entries()) all_integer = all_integer && e.is_integer();
  std::vector<std::string> values;
  values.reserve(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) values.push_back(to_decimal_string(a(i, j)));
  }
  os << "%%MatrixMarket matrix array " << (all_integer ? "integer" : "real")
     << " general\n"
     << m << ' ' << m << '\n';
  for (const auto& v : values) os << v << '\n';
}

RationalMatrix parse_csv_matrix(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::string buf(text);
  std::istringstream in(buf);
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    std::vector<Rational> row;
    std::size_t start = 0;
    for (;;) {
      const auto comma = l.find(',', start);
      const auto cell = l.substr(start, comma == std::string_view::npos ? l.npos : comma - start);
      try {
        row.push_back(parse_literal(cell));
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln, e.what());
      } catch (const ZeroDenominator&) {
        throw ParseError(ln, "zero denominator");
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
    if (rows.back().size() != rows.front().size()) throw ParseError(ln, "ragged row");
  }
  if (rows.empty()) throw ParseError(ln == 0 ? 1 : ln, "no rows");
  const std::size_t m = rows.size();
  if (rows.front().size() != m) throw ParseError(ln, "matrix must be square");
  RationalMatrix a(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = std::move(rows[i][j]);
  }
  return a;
}

void write_csv_matrix(std::ostream& os, const RationalMatrix& a) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (j != 0) os << ',';
      os << a(i, j);
    }
    os << '\n';
  }
}

RationalMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return format == MatrixFormat::MatrixMarket ? parse_matrix_market(ss.str())
                                              : parse_csv_matrix(ss.str());
}

RationalMatrix load_matrix(const std::filesystem::path& path) {
  const auto ext = lower(path.extension().string());
  return load_matrix(path, ext == ".mtx" ? MatrixFormat::MatrixMarket : MatrixFormat::Csv);
}

Rational cf_approximant(const Rational& r, const mpz_class& den_bound) {
  if (den_bound < 1) throw std::invalid_argument("denominator bound must be >= 1");
  if (r.den() <= den_bound) return r;

  // Convergents h/k of r; (h1, k1) is the latest, (h0, k0) the one before.
  mpz_class h0 = 0, k0 = 1, h1 = 1, k1 = 0;
  mpz_class n = r.num();
  mpz_class d = r.den();
  mpz_class a, rem;
  for (;;) {
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class k2 = a * k1 + k0;
    if (k2 > den_bound) break;
    mpz_class h2 = a * h1 + h0;
    h0.swap(h1);
    h1.swap(h2);
    k0.swap(k1);
    k1.swap(k2);
    // r.den() > den_bound, so the expansion cannot end before the break.
    n.swap(d);
    d.swap(rem);
  }
  // Largest semiconvergent within the bound.
  const mpz_class j = (den_bound - k0) / k1;
  const Rational convergent = canonicalize(h1, k1);
  if (j == 0) return convergent;
  const Rational semi = canonicalize(j * h1 + h0, j * k1 + k0);
  const mpq_class target = r.to_mpq();
  const mpq_class e_conv = abs(convergent.to_mpq() - target);
  const mpq_class e_semi = abs(semi.to_mpq() - target);
  return e_semi < e_conv ? semi : convergent;
}

}  // namespace ratdet
