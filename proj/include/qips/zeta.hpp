#pragma once

// The zeta function det(I - uU)^{-1} of a quantized chain, its factorization
// through the symmetrized matrix S, and the unit-circle spectrum of U.

#include "qips/charpoly.hpp"
#include "qips/quantizer.hpp"
#include "qips/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace qips {

/// det(I - uU) as a polynomial in u: the characteristic polynomial reversed.
template <class T>
Polynomial<T> zeta_reciprocal(const Matrix<T>& u) {
  return charpoly(u).reversed(u.rows());
}

template <class T>
Polynomial<T> zeta_reciprocal(const QuantumCoin<T>& coin) {
  return zeta_reciprocal(coin.u);
}

template <class T>
RationalFunction<T> zeta_function(const QuantumCoin<T>& coin) {
  return RationalFunction<T>::reciprocal(zeta_reciprocal(coin));
}

/// det(lambda I - U) recovered from det(I - uU) by u = 1/lambda.
template <class T>
Polynomial<T> charpoly_from_reciprocal(const Polynomial<T>& reciprocal, std::size_t dim) {
  return reciprocal.reversed(dim);
}

namespace detail {

/// (1+u)^n sum_k c_k (1+u^2)^k (2u)^(n-k).
template <class T>
Polynomial<T> factorization_core(int n, int m, const Polynomial<T>& chi_s) {
  if (n < 1 || m < 0) throw std::domain_error("need n >= 1 and m >= 0");
  if (chi_s.degree() != n) throw std::domain_error("chi_S must have degree n");
  const Polynomial<T> one_plus_u2{T(1), T(0), T(1)};
  const Polynomial<T> two_u{T(0), T(2)};
  Polynomial<T> sum;
  for (int k = 0; k <= n; ++k) {
    const T& c = chi_s.coeffs()[static_cast<std::size_t>(k)];
    if (c == T(0)) continue;
    sum += one_plus_u2.pow(static_cast<unsigned>(k)) * two_u.pow(static_cast<unsigned>(n - k)) * c;
  }
  return Polynomial<T>{T(1), T(1)}.pow(static_cast<unsigned>(n)) * sum;
}

template <class T>
Polynomial<T> one_minus_u2_pow(int k) {
  return Polynomial<T>{T(1), T(0), T(-1)}.pow(static_cast<unsigned>(k));
}

}  // namespace detail

/// (1+u)^n (1-u^2)^(m-n) sum_k c_k (1+u^2)^k (2u)^(n-k), where chi_S = sum c_k x^k.
/// A negative power of (1 - u^2) stays in the denominator.
template <class T>
RationalFunction<T> factorization_rhs(int n, int m, const Polynomial<T>& chi_s) {
  Polynomial<T> num = detail::factorization_core(n, m, chi_s);
  if (m >= n) return RationalFunction<T>::polynomial(num * detail::one_minus_u2_pow<T>(m - n));
  return RationalFunction<T>(std::move(num), detail::one_minus_u2_pow<T>(n - m));
}

/// Right-hand side as a polynomial. When m < n the division by (1-u^2)^(n-m)
/// must be exact (float: remainder within tol relative to the numerator).
template <class T>
Polynomial<T> factorization_polynomial(int n, int m, const Polynomial<T>& chi_s, double tol = 1e-9) {
  if constexpr (std::is_same_v<T, double>) {
    return factorization_polynomial(n, m, chi_s.template cast<Extended>(), tol).template cast<double>();
  } else {
    Polynomial<T> num = detail::factorization_core(n, m, chi_s);
    if (m >= n) return num * detail::one_minus_u2_pow<T>(m - n);
    auto [quot, rem] = divmod(num, detail::one_minus_u2_pow<T>(n - m));
    if constexpr (is_exact_v<T>) {
      if (!rem.is_zero()) throw identity_violation("(1-u^2)^(n-m) does not divide the right-hand side");
    } else {
      const double scale = std::max(1.0, max_coeff_magnitude(num));
      if (max_coeff_magnitude(rem) > tol * scale)
        throw identity_violation("(1-u^2)^(n-m) does not divide the right-hand side; remainder " +
                                 std::to_string(max_coeff_magnitude(rem)));
    }
    return quot;
  }
}

template <class T>
struct FactorizationReport {
  Polynomial<T> lhs;
  Polynomial<T> rhs;
  double max_coefficient_gap = 0.0;
  /// max_coefficient_gap / max(1, largest |coefficient| of lhs).
  double scaled_gap = 0.0;
};

template <class T>
FactorizationReport<T> factorization_report(const Polynomial<T>& lhs, const Polynomial<T>& rhs) {
  FactorizationReport<T> r{lhs, rhs, max_coeff_gap(lhs, rhs), 0.0};
  r.scaled_gap = r.max_coefficient_gap / std::max(1.0, max_coeff_magnitude(lhs));
  return r;
}

/// det(I - uU) from U versus the factorization through chi_S, both computed
/// from the chain independently.
template <class T>
FactorizationReport<T> verify_factorization(const MarkovChain<T>& chain, double tol = 1e-9) {
  const Polynomial<T> lhs = zeta_reciprocal(quantize(chain));
  const Polynomial<T> chi_s = charpoly(symmetrize(chain).s);
  const Polynomial<T> rhs = factorization_polynomial(chain.graph.vertex_count(), chain.graph.edge_count(), chi_s, tol);
  return factorization_report(lhs, rhs);
}

struct SpectrumReport {
  std::vector<double> mu_list;
  /// mu +- i sqrt(1 - mu^2) for every mu, after cancellation.
  std::vector<std::complex<double>> unit_circle_pairs;
  int minus_one_mult = 0;
  int plus_one_mult = 0;
  /// Number of +1 values removed from the pairs when m < n.
  int cancelled = 0;

  /// The full multiset: pairs, then -1 and +1 with their multiplicities.
  std::vector<std::complex<double>> eigenvalues() const {
    std::vector<std::complex<double>> all = unit_circle_pairs;
    all.insert(all.end(), static_cast<std::size_t>(minus_one_mult), {-1.0, 0.0});
    all.insert(all.end(), static_cast<std::size_t>(plus_one_mult), {1.0, 0.0});
    return all;
  }
};

inline constexpr double spectral_radius_tol = 1e-9;
inline constexpr double unit_snap_tol = 1e-12;

/// Eigenvalues of U predicted from the spectrum of S: mu +- i sqrt(1-mu^2)
/// for mu in Spec(S), -1 with multiplicity m and +1 with multiplicity m - n.
/// A negative +1 multiplicity is absorbed by values coming from mu = 1.
inline SpectrumReport predicted_spectrum_from_mu(std::vector<double> mu, int n, int m) {
  if (static_cast<int>(mu.size()) != n) throw std::domain_error("need n eigenvalues of S");
  SpectrumReport report;
  for (double& x : mu) {
    if (std::abs(x) > 1.0 + spectral_radius_tol)
      throw identity_violation("eigenvalue " + std::to_string(x) + " of S lies outside [-1, 1]");
    if (std::abs(x - 1.0) <= unit_snap_tol) x = 1.0;
    if (std::abs(x + 1.0) <= unit_snap_tol) x = -1.0;
    x = std::clamp(x, -1.0, 1.0);
  }
  report.mu_list = mu;
  int plus_available = 0;
  for (double x : mu) {
    const double im = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    report.unit_circle_pairs.emplace_back(x, im);
    report.unit_circle_pairs.emplace_back(x, -im);
    if (x == 1.0) plus_available += 2;
  }
  report.minus_one_mult = m;
  report.plus_one_mult = m - n;
  if (report.plus_one_mult < 0) {
    const int need = -report.plus_one_mult;
    if (need > plus_available)
      throw identity_violation("cannot cancel " + std::to_string(need) + " eigenvalues +1; only " +
                               std::to_string(plus_available) + " available");
    int removed = 0;
    auto& v = report.unit_circle_pairs;
    for (auto it = v.begin(); it != v.end() && removed < need;) {
      if (*it == std::complex<double>(1.0, 0.0)) {
        it = v.erase(it);
        ++removed;
      } else {
        ++it;
      }
    }
    report.cancelled = need;
    report.plus_one_mult = 0;
  }
  return report;
}

inline SpectrumReport predicted_spectrum(const Matrix<double>& s, int n, int m) {
  return predicted_spectrum_from_mu(symmetric_eigenvalues(s), n, m);
}

template <class T>
SpectrumReport predicted_spectrum(const SymmetrizedMatrix<T>& s, int n, int m) {
  return predicted_spectrum(s.s.template cast<double>(), n, m);
}

inline constexpr std::int64_t default_max_denominator = 1000000;
inline constexpr double default_rationalize_tol = 1e-9;

/// Best rational approximation with denominator <= max_den by continued
/// fractions (convergents and the admissible semiconvergent).
inline Rational rationalize(double x, std::int64_t max_den = default_max_denominator,
                            double tol = default_rationalize_tol) {
  if (!std::isfinite(x)) throw std::domain_error("cannot rationalize a non-finite value");
  const bool negative = x < 0;
  double r = std::abs(x);
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // h_{-2}, h_{-1}, k_{-2}, k_{-1}
  Rational best;
  bool found = false;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(r);
    if (a_d > 9.0e15) break;
    const BigInt a = static_cast<std::int64_t>(a_d);
    const BigInt h2 = a * h1 + h0;
    const BigInt k2 = a * k1 + k0;
    if (k2 > max_den) {
      // semiconvergent h1 + t*h0 ... with the largest admissible t
      const BigInt t = (BigInt(max_den) - k0) / k1;
      if (t > 0) {
        const Rational semi(t * h1 + h0, t * k1 + k0);
        if (!found || std::abs(to_double(semi) - std::abs(x)) < std::abs(to_double(best) - std::abs(x))) {
          best = semi;
          found = true;
        }
      }
      break;
    }
    best = Rational(h2, k2);
    found = true;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a_d;
    if (frac < 1e-300 || std::abs(to_double(best) - std::abs(x)) == 0.0) break;
    r = 1.0 / frac;
  }
  if (!found || std::abs(to_double(best) - std::abs(x)) > tol)
    throw std::domain_error("no rational with denominator <= " + std::to_string(max_den) + " within " +
                            std::to_string(tol) + " of " + std::to_string(x));
  return negative ? Rational(-best) : best;
}

/// Coefficientwise rational reconstruction; the result is checked against the
/// input to `tol`.
inline Polynomial<Rational> rationalize_poly(const Polynomial<double>& p,
                                             std::int64_t max_den = default_max_denominator,
                                             double tol = default_rationalize_tol) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (double x : p.coeffs()) c.push_back(rationalize(x, max_den, tol));
  Polynomial<Rational> out(std::move(c));
  if (max_coeff_gap(out.cast<double>(), p) > tol) throw std::domain_error("rational reconstruction drifted");
  return out;
}

}  // namespace qips
