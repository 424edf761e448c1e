#pragma once

#include "qips/graph.hpp"
#include "qips/matrix.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qips {

enum class Orientation {
  column_stochastic,  // entry (v,u) is the probability of u -> v
  row_stochastic,     // entry (u,v) is the probability of u -> v
};

inline constexpr double default_chain_tol = 1e-12;

/// A loop-decorated graph with probabilities on its arcs. `prob` is aligned
/// with the lexicographic arc order of `arcs`.
template <class T>
struct MarkovChain {
  Graph graph;
  ArcSet arcs;
  std::vector<T> prob;

  const T& probability(int u, int v) const {
    int e = arcs.find(u, v);
    if (e < 0) throw std::out_of_range("no arc between the given vertices");
    return prob[static_cast<std::size_t>(e)];
  }
};

/// Checks entries in [0,1] and the per-vertex sum rule sum_{o(e)=u} p(e) = 1.
template <class T>
void validate_chain(const MarkovChain<T>& chain, double tol = default_chain_tol) {
  const int n = chain.graph.vertex_count();
  if (chain.prob.size() != chain.arcs.size()) throw std::domain_error("probability vector does not match arc count");
  std::vector<T> out_sum(static_cast<std::size_t>(n), T(0));
  for (std::size_t e = 0; e < chain.arcs.size(); ++e) {
    const T& p = chain.prob[e];
    if (to_double(p) < -tol || to_double(p) > 1.0 + tol) throw std::domain_error("arc probability outside [0,1]");
    out_sum[static_cast<std::size_t>(chain.arcs[e].origin)] += p;
  }
  for (int u = 0; u < n; ++u) {
    const T residual = out_sum[static_cast<std::size_t>(u)] - T(1);
    if (!scalar_traits<T>::is_zero(residual, tol))
      throw std::domain_error("outgoing probabilities of vertex " + chain.graph.labels()[static_cast<std::size_t>(u)] +
                              " do not sum to 1");
  }
}

template <class T>
MarkovChain<T> make_chain(Graph graph, std::vector<T> prob, double tol = default_chain_tol) {
  MarkovChain<T> chain{graph, ArcSet(graph), std::move(prob)};
  validate_chain(chain, tol);
  return chain;
}

/// Reads a stochastic matrix onto the arcs of `graph`. Probability on a pair
/// that is not an arc is a structure error.
template <class T>
MarkovChain<T> chain_from_block(const Graph& graph, const Matrix<T>& block, Orientation orientation,
                                double tol = default_chain_tol) {
  const auto n = static_cast<std::size_t>(graph.vertex_count());
  if (block.rows() != n || block.cols() != n) throw std::domain_error("block size does not match the graph");
  MarkovChain<T> chain{graph, ArcSet(graph), {}};
  chain.prob.resize(chain.arcs.size(), T(0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      const T& p = orientation == Orientation::column_stochastic ? block(v, u) : block(u, v);
      int e = chain.arcs.find(static_cast<int>(u), static_cast<int>(v));
      if (e < 0) {
        if (!scalar_traits<T>::is_zero(p, tol))
          throw structure_error("nonzero probability on non-arc " + graph.labels()[u] + "->" + graph.labels()[v]);
        continue;
      }
      chain.prob[static_cast<std::size_t>(e)] = p;
    }
  validate_chain(chain, tol);
  return chain;
}

/// Row-stochastic n x n matrix M with M(u,v) = p(u -> v).
template <class T>
Matrix<T> transition_matrix(const MarkovChain<T>& chain) {
  const auto n = static_cast<std::size_t>(chain.graph.vertex_count());
  Matrix<T> m(n, n);
  for (std::size_t e = 0; e < chain.arcs.size(); ++e)
    m(static_cast<std::size_t>(chain.arcs[e].origin), static_cast<std::size_t>(chain.arcs[e].terminus)) = chain.prob[e];
  return m;
}

}  // namespace qips
