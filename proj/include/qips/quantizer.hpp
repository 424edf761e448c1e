#pragma once

// Quantization of a loop-decorated Markov chain: the orthogonal matrix
// U = 2 K L^T - J on the arc space, plus the symmetrized vertex matrix S.

#include "qips/markov.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qips {

/// K, L and J of a chain. K and L are kept through their entrywise squares
/// (K² holds p(e) at (e, o(e)), L² holds p(e^{-1}) at (e, t(e))) so that the
/// exact mode never needs an irrational entry; `k()`/`l()` take entrywise
/// square roots and are exact only when every probability is a square.
template <class T>
struct CouplingMatrices {
  Matrix<T> k_squared;
  Matrix<T> l_squared;
  Matrix<T> j;

  Matrix<T> k() const { return entrywise_sqrt(k_squared); }
  Matrix<T> l() const { return entrywise_sqrt(l_squared); }

  static Matrix<T> entrywise_sqrt(const Matrix<T>& m) {
    Matrix<T> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = scalar_traits<T>::sqrt(m(r, c));
    return out;
  }
};

/// Arc-indexed square matrix U. `arcs` records the arc order of the rows.
template <class T>
struct QuantumCoin {
  Matrix<T> u;
  ArcSet arcs;
};

template <class T>
struct SymmetrizedMatrix {
  Matrix<T> s;
};

template <class T>
CouplingMatrices<T> build_coupling(const MarkovChain<T>& chain) {
  const std::size_t arcs = chain.arcs.size();
  const auto n = static_cast<std::size_t>(chain.graph.vertex_count());
  CouplingMatrices<T> out{Matrix<T>(arcs, n), Matrix<T>(arcs, n), Matrix<T>(arcs, arcs)};
  for (std::size_t e = 0; e < arcs; ++e) {
    const Arc& a = chain.arcs[e];
    const auto inv = static_cast<std::size_t>(chain.arcs.inverse(e));
    out.k_squared(e, static_cast<std::size_t>(a.origin)) = chain.prob[e];
    out.l_squared(e, static_cast<std::size_t>(a.terminus)) = chain.prob[inv];
    out.j(e, inv) = T(1);
  }
  return out;
}

/// (A B^T)(e,f) where A and B are given by their entrywise squares:
/// sum over v of sqrt(A²(e,v)) sqrt(B²(f,v)). Each summand is taken as the
/// root of the product, so it is exact whenever that product is a square.
template <class T>
Matrix<T> radical_product(const Matrix<T>& a_squared, const Matrix<T>& b_squared) {
  if (a_squared.cols() != b_squared.cols()) throw std::invalid_argument("radical product shape mismatch");
  if constexpr (!is_exact_v<T>) {
    Matrix<T> a = CouplingMatrices<T>::entrywise_sqrt(a_squared);
    Matrix<T> b = CouplingMatrices<T>::entrywise_sqrt(b_squared);
    return a * b.transpose();
  } else {
    Matrix<T> out(a_squared.rows(), b_squared.rows());
    for (std::size_t e = 0; e < a_squared.rows(); ++e)
      for (std::size_t f = 0; f < b_squared.rows(); ++f) {
        T sum(0);
        for (std::size_t v = 0; v < a_squared.cols(); ++v) {
          if (a_squared(e, v) == 0 || b_squared(f, v) == 0) continue;
          sum += exact_sqrt(a_squared(e, v) * b_squared(f, v));
        }
        out(e, f) = sum;
      }
    return out;
  }
}

/// U by the entrywise rule: 2 sqrt(p(e) p(f^{-1})) when t(f) = o(e), minus 1
/// when f = e^{-1}, zero otherwise.
template <class T>
Matrix<T> quantize_entrywise(const MarkovChain<T>& chain) {
  const std::size_t arcs = chain.arcs.size();
  Matrix<T> u(arcs, arcs);
  for (std::size_t e = 0; e < arcs; ++e)
    for (std::size_t f = 0; f < arcs; ++f) {
      const bool inverse_pair = static_cast<int>(f) == chain.arcs.inverse(e);
      if (chain.arcs[f].terminus != chain.arcs[e].origin) continue;
      const auto finv = static_cast<std::size_t>(chain.arcs.inverse(f));
      T value = T(2) * scalar_traits<T>::sqrt(T(chain.prob[e] * chain.prob[finv]));
      if (inverse_pair) value -= T(1);
      u(e, f) = value;
    }
  return u;
}

inline constexpr double construction_agreement_tol = 1e-14;

/// U = 2 K L^T - J, cross-checked against the entrywise rule.
template <class T>
QuantumCoin<T> quantize(const MarkovChain<T>& chain) {
  const CouplingMatrices<T> c = build_coupling(chain);
  Matrix<T> u = T(2) * radical_product(c.k_squared, c.l_squared) - c.j;
  const Matrix<T> reference = quantize_entrywise(chain);
  const double gap = max_abs_diff(u, reference);
  if constexpr (is_exact_v<T>) {
    if (!(u == reference)) throw identity_violation("2KL^T - J disagrees with the entrywise quantization");
  } else {
    if (gap > construction_agreement_tol)
      throw identity_violation("2KL^T - J disagrees with the entrywise quantization by " + std::to_string(gap));
  }
  return {std::move(u), chain.arcs};
}

/// max-norm of U U^T - I and U^T U - I.
template <class T>
double unitarity_defect(const Matrix<T>& u) {
  const Matrix<T> id = Matrix<T>::identity(u.rows());
  const Matrix<T> ut = u.transpose();
  return std::max(max_abs_diff(u * ut, id), max_abs_diff(ut * u, id));
}

template <class T>
double unitarity_defect(const QuantumCoin<T>& coin) {
  return unitarity_defect(coin.u);
}

/// S(u,v) = sqrt(p(u,v) p(v,u)) on arcs, zero elsewhere.
template <class T>
SymmetrizedMatrix<T> symmetrize(const MarkovChain<T>& chain) {
  const auto n = static_cast<std::size_t>(chain.graph.vertex_count());
  SymmetrizedMatrix<T> out{Matrix<T>(n, n)};
  for (std::size_t e = 0; e < chain.arcs.size(); ++e) {
    const Arc& a = chain.arcs[e];
    const T& forward = chain.prob[e];
    const T& backward = chain.prob[static_cast<std::size_t>(chain.arcs.inverse(e))];
    out.s(static_cast<std::size_t>(a.origin), static_cast<std::size_t>(a.terminus)) =
        a.is_loop() ? forward : scalar_traits<T>::sqrt(T(forward * backward));
  }
  return out;
}

/// Amplitudes over the arcs of a chain.
struct WalkState {
  std::vector<std::complex<double>> amplitudes;

  double norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return std::sqrt(sum);
  }

  static WalkState basis(std::size_t size, std::size_t index) {
    WalkState s{std::vector<std::complex<double>>(size)};
    s.amplitudes.at(index) = 1.0;
    return s;
  }
};

inline constexpr double walk_norm_tol = 1e-12;

/// U^steps applied to `state`.
template <class T>
WalkState walk_evolve(const QuantumCoin<T>& coin, const WalkState& state, int steps) {
  if (steps < 0) throw std::domain_error("steps must be non-negative");
  const std::size_t dim = coin.u.rows();
  if (state.amplitudes.size() != dim) throw std::domain_error("walk state size does not match the arc count");
  if (std::abs(state.norm() - 1.0) > walk_norm_tol) throw std::domain_error("walk state must have unit norm");
  const Matrix<double> u = coin.u.template cast<double>();
  std::vector<std::complex<double>> cur = state.amplitudes;
  std::vector<std::complex<double>> next(dim);
  for (int t = 0; t < steps; ++t) {
    for (std::size_t r = 0; r < dim; ++r) {
      std::complex<double> acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) acc += u(r, c) * cur[c];
      next[r] = acc;
    }
    cur.swap(next);
  }
  return {std::move(cur)};
}

}  // namespace qips
