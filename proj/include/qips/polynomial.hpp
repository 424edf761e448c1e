#pragma once

#include "qips/scalar.hpp"

#include <algorithm>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace qips {

/// Univariate polynomial with ascending coefficients.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(const T& value) { return Polynomial(std::vector<T>{value}); }
  static Polynomial monomial(const T& coeff, std::size_t degree) {
    std::vector<T> c(degree + 1, T(0));
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  const T& leading() const { return c_.back(); }

  /// Index of the lowest nonzero coefficient (0 for the zero polynomial).
  std::size_t valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (c_[k] != T(0)) return k;
    return 0;
  }

  template <class X>
  X operator()(const X& x) const {
    X acc(0);
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + convert<X>(c_[k]);
    return acc;
  }

  /// x^d p(1/x); requires d >= degree().
  Polynomial reversed(std::size_t d) const {
    if (static_cast<int>(d) < degree()) throw std::invalid_argument("reversal degree below polynomial degree");
    std::vector<T> r(d + 1, T(0));
    for (std::size_t k = 0; k < c_.size(); ++k) r[d - k] = c_[k];
    return Polynomial(std::move(r));
  }

  /// Drops the factor x^valuation().
  Polynomial without_x_power() const {
    if (is_zero()) return *this;
    return Polynomial(std::vector<T>(c_.begin() + static_cast<std::ptrdiff_t>(valuation()), c_.end()));
  }

  /// Zeroes coefficients with magnitude <= tol (float mode noise cleanup).
  Polynomial chopped(double tol) const {
    std::vector<T> c = c_;
    for (auto& x : c)
      if (scalar_traits<T>::is_zero(x, tol)) x = T(0);
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(c));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial pow(unsigned k) const {
    Polynomial result = constant(T(1));
    Polynomial base = *this;
    while (k) {
      if (k & 1u) result *= base;
      k >>= 1u;
      if (k) base *= base;
    }
    return result;
  }

  template <class U>
  Polynomial<U> cast() const {
    std::vector<U> out;
    out.reserve(c_.size());
    for (const auto& x : c_) {
      if constexpr (std::is_same_v<T, Rational> && !std::is_same_v<U, Rational>) {
        out.push_back(U(to_double(x)));
      } else {
        out.push_back(U(x));
      }
    }
    return Polynomial<U>(std::move(out));
  }

 private:
  template <class X>
  static X convert(const T& x) {
    if constexpr (std::is_same_v<T, Rational> && !std::is_same_v<X, Rational>) {
      return X(to_double(x));
    } else {
      return X(x);
    }
  }

  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

/// Long division a = q b + r with deg r < deg b.
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> divmod(const Polynomial<T>& a, const Polynomial<T>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<T> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial<T>{}, a};
  std::vector<T> quot(static_cast<std::size_t>(a.degree() - db + 1), T(0));
  for (int k = a.degree() - db; k >= 0; --k) {
    const T factor = rem[static_cast<std::size_t>(k + db)] / b.leading();
    quot[static_cast<std::size_t>(k)] = factor;
    if (factor == T(0)) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= factor * b.coeffs()[static_cast<std::size_t>(j)];
    rem[static_cast<std::size_t>(k + db)] = T(0);
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Polynomial<T>(std::move(quot)), Polynomial<T>(std::move(rem))};
}

/// Monic greatest common divisor over the rationals.
inline Polynomial<Rational> gcd(Polynomial<Rational> a, Polynomial<Rational> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * Rational(1 / a.leading());
}

template <class T>
double max_coeff_gap(const Polynomial<T>& a, const Polynomial<T>& b) {
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  double gap = 0.0;
  for (std::size_t k = 0; k < n; ++k) gap = std::max(gap, scalar_traits<T>::magnitude(a.coeff(k) - b.coeff(k)));
  return gap;
}

template <class T>
double max_coeff_magnitude(const Polynomial<T>& a) {
  double best = 0.0;
  for (const auto& x : a.coeffs()) best = std::max(best, scalar_traits<T>::magnitude(x));
  return best;
}

/// numerator / denominator, normalized so that the lowest nonzero
/// denominator coefficient is +1 (so f(0) is read off directly when defined).
template <class T>
class RationalFunction {
 public:
  RationalFunction() : num_(Polynomial<T>::constant(T(0))), den_(Polynomial<T>::constant(T(1))) {}
  RationalFunction(Polynomial<T> num, Polynomial<T> den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RationalFunction polynomial(Polynomial<T> p) { return {std::move(p), Polynomial<T>::constant(T(1))}; }
  static RationalFunction reciprocal(Polynomial<T> p) { return {Polynomial<T>::constant(T(1)), std::move(p)}; }

  const Polynomial<T>& numerator() const { return num_; }
  const Polynomial<T>& denominator() const { return den_; }

  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }

  /// Exact-mode structural equality (both sides normalized and reduced).
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if constexpr (is_exact_v<T>) {
      if (num_.is_zero()) {
        den_ = Polynomial<T>::constant(T(1));
        return;
      }
      const std::size_t common = std::min(num_.valuation(), den_.valuation());
      if (common > 0) {
        num_ = Polynomial<T>(std::vector<T>(num_.coeffs().begin() + static_cast<std::ptrdiff_t>(common), num_.coeffs().end()));
        den_ = Polynomial<T>(std::vector<T>(den_.coeffs().begin() + static_cast<std::ptrdiff_t>(common), den_.coeffs().end()));
      }
      const Polynomial<T> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
      }
    }
    const T lowest = den_.coeffs()[den_.valuation()];
    if (lowest != T(1)) {
      const T inv = T(1) / lowest;
      num_ *= inv;
      den_ *= inv;
    }
  }

  Polynomial<T> num_;
  Polynomial<T> den_;
};

}  // namespace qips
