#pragma once

// Exact rational arithmetic plus the handful of exact comparisons the rest of
// the library needs: decimal/fraction parsing, canonical formatting, and sign
// evaluation of linear combinations of base-2 logarithms of integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bct {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }
inline double to_double(const Int& n) { return n.template convert_to<double>(); }

inline Int pow_int(Int base, std::uint64_t e) {
  Int r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline Rational pow_rational(const Rational& base, std::uint64_t e) {
  return Rational(pow_int(numerator(base), e), pow_int(denominator(base), e));
}

// Smallest power of two that is >= q (q > 0), returned as an exponent.
inline std::uint64_t ceil_log2(const Int& n) {
  if (n <= 0) throw std::domain_error("ceil_log2: argument must be positive");
  std::uint64_t bits = msb(n);  // floor(log2 n)
  return (Int(1) << bits) == n ? bits : bits + 1;
}

// Base-10 integer with optional sign. Leading zeros are stripped before the
// big-int constructor sees them (it would read "09" as malformed octal).
inline Int parse_int_decimal(const std::string& text) {
  bool negative = false;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits = text.substr(pos);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("parse_rational: malformed number '" + text + "'");
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  Int value(digits);
  return negative ? -value : value;
}

// Parses "3/4", "0.75", "1", "1e-2", "2.5e-1" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    const Int num = parse_int_decimal(text.substr(0, slash));
    const Int den = parse_int_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  std::string mantissa = text;
  long exp10 = 0;
  auto epos = text.find_first_of("eE");
  if (epos != std::string::npos) {
    mantissa = text.substr(0, epos);
    exp10 = std::stol(text.substr(epos + 1));
  }
  bool negative = false;
  std::string digits = mantissa;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    negative = digits[0] == '-';
    digits = digits.substr(1);
  }
  auto dot = digits.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  Rational value{parse_int_decimal(digits)};
  if (negative) value = -value;
  if (exp10 > 0) value *= pow_int(10, static_cast<std::uint64_t>(exp10));
  if (exp10 < 0) value /= pow_int(10, static_cast<std::uint64_t>(-exp10));
  return value;
}

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
inline std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Floats are always rendered with 12 significant digits so that reports and
// golden files are byte-stable across runs and platforms.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::string(buf);
}

// Rounds a double to its 12-significant-digit rendering. Used before placing
// floats into JSON documents so serialized numbers match format_double.
inline double canonical_double(double x) { return std::strtod(format_double(x).c_str(), nullptr); }

inline std::vector<Rational> parse_distribution(const std::string& csv) {
  std::vector<Rational> p;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto comma = csv.find(',', start);
    auto token = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (token.empty()) throw std::invalid_argument("parse_distribution: empty entry");
    p.push_back(parse_rational(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

inline void validate_distribution(const std::vector<Rational>& p) {
  if (p.empty()) throw std::invalid_argument("distribution: no entries");
  Rational total = 0;
  for (const auto& w : p) {
    if (w < 0) throw std::invalid_argument("distribution: negative entry");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("distribution: entries must sum to 1");
}

// --- Exact linear combinations of logarithms ------------------------------
//
// Value sum_j c_j * log2(b_j) with rational c_j and integer b_j >= 1. The sign
// is decided exactly by clearing denominators and comparing the two integer
// products prod b^(positive exponent) vs prod b^(-negative exponent).
class LogExpr {
 public:
  void add(const Rational& coeff, const Int& base) {
    if (base < 1) throw std::domain_error("LogExpr: log of non-positive integer");
    if (base == 1 || coeff == 0) return;
    auto [it, inserted] = terms_.emplace(base, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // coeff * log2(value) for rational value > 0.
  void add_log(const Rational& coeff, const Rational& value) {
    if (value <= 0) throw std::domain_error("LogExpr: log of non-positive value");
    add(coeff, numerator(value));
    add(-coeff, denominator(value));
  }

  // Adds the constant c, represented as c * log2(2).
  void add_constant(const Rational& c) { add(c, 2); }

  LogExpr& operator+=(const LogExpr& other) {
    for (const auto& [base, coeff] : other.terms_) add(coeff, base);
    return *this;
  }

  // Exact sign of the expression: -1, 0, or +1.
  int sign() const {
    if (terms_.empty()) return 0;
    Int common = 1;
    for (const auto& [base, coeff] : terms_) common = lcm(common, denominator(coeff));
    Int pos = 1, neg = 1;
    for (const auto& [base, coeff] : terms_) {
      Int e = numerator(coeff) * (common / denominator(coeff));
      if (e > 0)
        pos *= pow_int(base, e.template convert_to<std::uint64_t>());
      else
        neg *= pow_int(base, (-e).template convert_to<std::uint64_t>());
    }
    return pos.compare(neg);
  }

  double value() const {
    double v = 0;
    for (const auto& [base, coeff] : terms_) v += to_double(coeff) * std::log2(to_double(base));
    return v;
  }

 private:
  std::map<Int, Rational> terms_;
};

// Least integer m with m >= expr. The float estimate is corrected by exact
// sign tests, so the result is right even when expr sits on an integer.
inline std::int64_t ceil_of(const LogExpr& expr) {
  auto geq = [&expr](std::int64_t m) {
    LogExpr d = expr;
    d.add_constant(Rational(-m));
    return d.sign() <= 0;  // expr - m <= 0
  };
  std::int64_t m = static_cast<std::int64_t>(std::ceil(expr.value() - 0.5));
  while (!geq(m)) ++m;
  while (m > std::numeric_limits<std::int64_t>::min() && geq(m - 1)) --m;
  return m;
}

}  // namespace bct
