#pragma once

// Scalar policies shared by every module. Two arithmetic modes exist:
// binary64 (`double`) and exact rationals (`Rational`). Algorithms are
// templated on the scalar and consult scalar_traits for the few places where
// the modes differ (square roots, zero tests, serialization).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qips {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Mode { exact, floating };

inline std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "float"; }

/// Raised when an exact computation would need an irrational value.
class inexact_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a matrix lacks the structure an operation requires.
class structure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an identity that is expected to hold fails beyond tolerance.
class identity_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "7", "-3/4", "0.125", "1e-3" or "2.5e2" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    Rational n = parse_rational(num);
    Rational d = parse_rational(den);
    if (d == 0) fail();
    return n / d;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool in_fraction = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      seen_digit = true;
      if (in_fraction) ++frac_digits;
    } else if (ch == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') fail();
    std::string exp_text(text.substr(pos + 1));
    if (exp_text.empty()) fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != exp_text.size() || exponent > 4000 || exponent < -4000) fail();
  }
  exponent -= frac_digits;
  Rational value(mantissa);
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  value = exponent < 0 ? value / Rational(scale) : value * Rational(scale);
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& value) { return value.str(); }

inline double to_double(double value) { return value; }
inline double to_double(long double value) { return static_cast<double>(value); }
inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// Exact square root of a non-negative rational; throws inexact_error when
/// numerator or denominator is not a perfect square.
inline Rational exact_sqrt(const Rational& value) {
  if (value < 0) throw std::domain_error("square root of a negative rational");
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  const BigInt rn = boost::multiprecision::sqrt(num);
  const BigInt rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) {
    throw inexact_error("sqrt(" + value.str() + ") is irrational");
  }
  return Rational(rn, rd);
}

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static double sqrt(double x) { return x <= 0.0 ? 0.0 : std::sqrt(x); }
  static double magnitude(double x) { return std::abs(x); }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double from_rational(const Rational& x) { return qips::to_double(x); }
};

template <>
struct scalar_traits<long double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static long double sqrt(long double x) { return x <= 0.0L ? 0.0L : std::sqrt(x); }
  static double magnitude(long double x) { return static_cast<double>(std::abs(x)); }
  static bool is_zero(long double x, double tol) { return std::abs(x) <= tol; }
  static long double from_rational(const Rational& x) { return x.convert_to<long double>(); }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::exact;
  static Rational sqrt(const Rational& x) { return exact_sqrt(x); }
  static double magnitude(const Rational& x) { return std::abs(qips::to_double(x)); }
  static bool is_zero(const Rational& x, double /*tol*/) { return x == 0; }
  static Rational from_rational(const Rational& x) { return x; }
};

template <>
struct scalar_traits<std::complex<double>> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static std::complex<double> sqrt(std::complex<double> x) { return std::sqrt(x); }
  static double magnitude(std::complex<double> x) { return std::abs(x); }
  static bool is_zero(std::complex<double> x, double tol) { return std::abs(x) <= tol; }
  static std::complex<double> from_rational(const Rational& x) { return {qips::to_double(x), 0.0}; }
};

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

}  // namespace qips
