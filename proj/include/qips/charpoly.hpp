#pragma once

// Characteristic polynomials det(xI - A), returned monic with ascending
// coefficients.

#include "qips/matrix.hpp"
#include "qips/polynomial.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace qips {

inline constexpr std::size_t charpoly_max_dim = 1024;

namespace detail {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

inline void check_charpoly_input(std::size_t rows, std::size_t cols) {
  if (rows != cols) throw std::domain_error("characteristic polynomial of a non-square matrix");
  if (rows > charpoly_max_dim) throw std::domain_error("matrix dimension exceeds the characteristic polynomial cap");
}

}  // namespace detail

/// Faddeev-LeVerrier recursion: M_k = A M_{k-1} + c_{n-k+1} I and
/// c_{n-k} = -tr(A M_k) / k. Exact over the rationals; in binary64 the traces
/// use compensated summation.
template <class T>
Polynomial<T> charpoly_faddeev_leverrier(const Matrix<T>& a) {
  detail::check_charpoly_input(a.rows(), a.cols());
  const std::size_t n = a.rows();
  std::vector<T> c(n + 1, T(0));
  c[n] = T(1);
  Matrix<T> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<T> am = a * m;
    for (std::size_t i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
    m = std::move(am);
    const Matrix<T> product = a * m;
    T trace(0);
    if constexpr (is_exact_v<T>) {
      for (std::size_t i = 0; i < n; ++i) trace += product(i, i);
    } else {
      detail::CompensatedSum acc;
      for (std::size_t i = 0; i < n; ++i) acc.add(product(i, i));
      trace = acc.value();
    }
    c[n - k] = -trace / T(static_cast<long>(k));
  }
  return Polynomial<T>(std::move(c));
}

/// Householder reduction to upper Hessenberg form followed by the Hessenberg
/// determinant recurrence. Backward stable; preferred for binary64 input.
template <class F>
Polynomial<F> charpoly_hessenberg(const Matrix<F>& a) {
  static_assert(std::is_floating_point_v<F>);
  detail::check_charpoly_input(a.rows(), a.cols());
  const std::size_t n = a.rows();
  Matrix<F> h = a;
  std::vector<F> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    F alpha = F(0);
    for (std::size_t i = k + 1; i < n; ++i) alpha += h(i, k) * h(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == F(0)) continue;
    if (h(k + 1, k) > 0) alpha = -alpha;
    F vnorm2 = F(0);
    for (std::size_t i = 0; i < n; ++i) v[i] = F(0);
    v[k + 1] = h(k + 1, k) - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == F(0)) continue;
    // H <- P H P with P = I - 2 v v^T / (v^T v)
    for (std::size_t j = 0; j < n; ++j) {
      F dot = F(0);
      for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * h(i, j);
      const F f = F(2) * dot / vnorm2;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= f * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      F dot = F(0);
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      const F f = F(2) * dot / vnorm2;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= f * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = F(0);
  }

  // p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
  std::vector<Polynomial<F>> p;
  p.reserve(n + 1);
  p.push_back(Polynomial<F>::constant(F(1)));
  for (std::size_t k = 1; k <= n; ++k) {
    Polynomial<F> next = Polynomial<F>{-h(k - 1, k - 1), F(1)} * p[k - 1];
    F sub = F(1);
    for (std::size_t i = k - 1; i-- > 0;) {
      sub *= h(i + 1, i);
      if (sub == F(0)) break;
      next -= p[i] * (h(i, k - 1) * sub);
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

/// Working precision for binary64 polynomial algebra: coefficients of
/// dimension-64 problems reach 1e5 and lose about seven digits to
/// cancellation in plain double.
using Extended = long double;

/// det(xI - A): Faddeev-LeVerrier for exact scalars, Hessenberg otherwise
/// (binary64 input is reduced in extended precision and rounded back).
template <class T>
Polynomial<T> charpoly(const Matrix<T>& a) {
  if constexpr (is_exact_v<T>) {
    return charpoly_faddeev_leverrier(a);
  } else if constexpr (std::is_same_v<T, double>) {
    return charpoly_hessenberg(a.template cast<Extended>()).template cast<double>();
  } else {
    return charpoly_hessenberg(a);
  }
}

}  // namespace qips
