#pragma once

// Automorphy f(1/x) = C x^{-D} f(x) and recognition of rational functions of
// the shape x^{l/2} prod (x^m - 1) / prod (x^n - 1).

#include "qips/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qips {

inline int euler_phi(int d) {
  int result = d;
  for (int p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    while (d % p == 0) d /= p;
    result -= result / p;
  }
  if (d > 1) result -= result / d;
  return result;
}

inline int mobius(int d) {
  int result = 1;
  for (int p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    d /= p;
    if (d % p == 0) return 0;
    result = -result;
  }
  if (d > 1) result = -result;
  return result;
}

/// x^k - 1.
inline Polynomial<Rational> x_power_minus_one(int k) {
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1, Rational(0));
  c.front() = -1;
  c.back() = 1;
  return Polynomial<Rational>(std::move(c));
}

/// The d-th cyclotomic polynomial, prod_{e|d} (x^e - 1)^{mu(d/e)}.
inline Polynomial<Rational> cyclotomic_polynomial(int d) {
  if (d < 1) throw std::domain_error("cyclotomic index must be positive");
  Polynomial<Rational> num = Polynomial<Rational>::constant(1);
  Polynomial<Rational> den = Polynomial<Rational>::constant(1);
  for (int e = 1; e <= d; ++e) {
    if (d % e) continue;
    const int mu = mobius(d / e);
    if (mu == 1) num *= x_power_minus_one(e);
    if (mu == -1) den *= x_power_minus_one(e);
  }
  return divmod(num, den).first;
}

struct AutomorphyWitness {
  int C = 1;
  int D = 0;
  friend bool operator==(const AutomorphyWitness&, const AutomorphyWitness&) = default;
};

/// Finds (C, D) with f(1/x) = C x^{-D} f(x). Writing f = x^v N0 / D0 with
/// N0(0), D0(0) nonzero, D is forced to deg N - deg D + val N - val D and C
/// must satisfy rev(N0) D0 = C N0 rev(D0). Exact for rationals; binary64
/// input is compared to `tol` relative to the largest coefficient.
template <class T>
std::optional<AutomorphyWitness> detect_automorphy(const Polynomial<T>& num, const Polynomial<T>& den,
                                                   double tol = 1e-9) {
  Polynomial<T> n = num;
  Polynomial<T> d = den;
  if constexpr (!is_exact_v<T>) {
    n = n.chopped(tol * std::max(1.0, max_coeff_magnitude(n)));
    d = d.chopped(tol * std::max(1.0, max_coeff_magnitude(d)));
  }
  if (n.is_zero()) throw std::domain_error("automorphy of the zero function");
  if (d.is_zero()) throw std::domain_error("zero denominator");
  const int weight = n.degree() - d.degree() + static_cast<int>(n.valuation()) - static_cast<int>(d.valuation());
  const Polynomial<T> n0 = n.without_x_power();
  const Polynomial<T> d0 = d.without_x_power();
  const Polynomial<T> lhs = n0.reversed(static_cast<std::size_t>(n0.degree())) * d0;
  const Polynomial<T> rhs = n0 * d0.reversed(static_cast<std::size_t>(d0.degree()));
  for (int c : {1, -1}) {
    const Polynomial<T> target = rhs * T(c);
    if constexpr (is_exact_v<T>) {
      if (lhs == target) return AutomorphyWitness{c, weight};
    } else {
      const double scale = std::max(1.0, max_coeff_magnitude(rhs));
      if (max_coeff_gap(lhs, target) <= tol * scale) return AutomorphyWitness{c, weight};
    }
  }
  return std::nullopt;
}

template <class T>
std::optional<AutomorphyWitness> detect_automorphy(const RationalFunction<T>& f, double tol = 1e-9) {
  return detect_automorphy(f.numerator(), f.denominator(), tol);
}

struct CyclotomicForm {
  int ell = 0;
  std::vector<int> m_list;
  std::vector<int> n_list;
  friend bool operator==(const CyclotomicForm&, const CyclotomicForm&) = default;
};

enum class CyclotomicFailure { none, not_cyclotomic, sign_mismatch, form_mismatch };

inline std::string to_string(CyclotomicFailure f) {
  switch (f) {
    case CyclotomicFailure::none: return "none";
    case CyclotomicFailure::not_cyclotomic: return "NotCyclotomic";
    case CyclotomicFailure::sign_mismatch: return "SignMismatch";
    case CyclotomicFailure::form_mismatch: return "FormMismatch";
  }
  return "unknown";
}

struct CyclotomicOutcome {
  std::optional<CyclotomicForm> form;
  CyclotomicFailure failure = CyclotomicFailure::none;
  std::string detail;
  /// Net exponent of Phi_d (denominator minus numerator), for d with a
  /// nonzero entry. Filled whenever the factorization itself succeeded.
  std::map<int, int> phi_exponents;

  bool ok() const { return form.has_value(); }
};

/// x^{l/2} prod (x^m - 1) / prod (x^n - 1).
inline RationalFunction<Rational> reconstruct(const CyclotomicForm& form) {
  if (form.ell % 2 != 0) throw std::domain_error("odd ell has no rational reconstruction");
  Polynomial<Rational> num = Polynomial<Rational>::constant(1);
  Polynomial<Rational> den = Polynomial<Rational>::constant(1);
  for (int m : form.m_list) num *= x_power_minus_one(m);
  for (int n : form.n_list) den *= x_power_minus_one(n);
  const int half = form.ell / 2;
  if (half > 0) num *= Polynomial<Rational>::monomial(1, static_cast<std::size_t>(half));
  if (half < 0) den *= Polynomial<Rational>::monomial(1, static_cast<std::size_t>(-half));
  return {std::move(num), std::move(den)};
}

namespace detail {

/// Divides out Phi_d as often as possible; returns the multiplicity.
inline int strip_factor(Polynomial<Rational>& p, const Polynomial<Rational>& phi) {
  int count = 0;
  while (p.degree() >= phi.degree()) {
    auto [q, r] = divmod(p, phi);
    if (!r.is_zero()) break;
    p = std::move(q);
    ++count;
  }
  return count;
}

}  // namespace detail

/// Factors numerator and denominator over cyclotomic polynomials and reads
/// off the unique shortest (m_list, n_list) by Moebius inversion of the
/// Phi_d exponents: the net count of x^k - 1 in the denominator is
/// g(k) = sum_t mu(t) e_{kt}.
inline CyclotomicOutcome to_cyclotomic_form(const RationalFunction<Rational>& f) {
  CyclotomicOutcome out;
  Polynomial<Rational> num = f.numerator();
  Polynomial<Rational> den = f.denominator();
  if (num.is_zero()) {
    out.failure = CyclotomicFailure::not_cyclotomic;
    out.detail = "zero function";
    return out;
  }
  const int v = static_cast<int>(num.valuation()) - static_cast<int>(den.valuation());
  num = num.without_x_power();
  den = den.without_x_power();
  const int total = num.degree() + den.degree();

  std::map<int, int> e;
  // phi(d) >= sqrt(d/2), so every d with phi(d) <= total is below 2 total^2 + 3.
  const int bound = 2 * total * total + 2;
  for (int d = 1; d <= bound && (num.degree() > 0 || den.degree() > 0); ++d) {
    if (euler_phi(d) > std::max(num.degree(), den.degree())) continue;
    const Polynomial<Rational> phi = cyclotomic_polynomial(d);
    const int in_den = detail::strip_factor(den, phi);
    const int in_num = detail::strip_factor(num, phi);
    if (in_den != in_num) e[d] = in_den - in_num;
  }
  if (num.degree() > 0 || den.degree() > 0) {
    out.failure = CyclotomicFailure::not_cyclotomic;
    out.detail = "factor of degree " + std::to_string(std::max(num.degree(), den.degree())) +
                 " is not a product of cyclotomic polynomials";
    return out;
  }
  out.phi_exponents = e;
  const Rational kappa = num.leading() / den.leading();

  const int max_d = e.empty() ? 0 : e.rbegin()->first;
  CyclotomicForm form;
  for (int k = 1; k <= max_d; ++k) {
    int g = 0;
    for (int t = 1; k * t <= max_d; ++t) {
      auto it = e.find(k * t);
      if (it != e.end()) g += mobius(t) * it->second;
    }
    for (int i = 0; i < g; ++i) form.n_list.push_back(k);
    for (int i = 0; i < -g; ++i) form.m_list.push_back(k);
  }
  int sum_m = 0, sum_n = 0;
  for (int m : form.m_list) sum_m += m;
  for (int n : form.n_list) sum_n += n;

  const auto witness = detect_automorphy(f);
  if (!witness) {
    out.failure = CyclotomicFailure::form_mismatch;
    out.detail = "not an absolute automorphic form";
    return out;
  }
  form.ell = witness->D - (sum_m - sum_n);
  if (form.ell % 2 != 0 || form.ell != 2 * v) {
    out.failure = CyclotomicFailure::form_mismatch;
    out.detail = "ell = " + std::to_string(form.ell) + " does not match the x-power " + std::to_string(v);
    return out;
  }
  if (kappa == -1) {
    out.failure = CyclotomicFailure::sign_mismatch;
    out.detail = "only -f has the cyclotomic shape";
    return out;
  }
  if (kappa != 1) {
    out.failure = CyclotomicFailure::not_cyclotomic;
    out.detail = "leading constant " + kappa.str() + " is not +-1";
    return out;
  }
  if (!(reconstruct(form) == f)) throw identity_violation("cyclotomic reconstruction does not reproduce f");
  out.form = std::move(form);
  return out;
}

}  // namespace qips
