#pragma once

// Loop-decorated graphs: simple undirected graphs with exactly one loop at each
// vertex, and their symmetric arc sets.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qips {

class Graph {
 public:
  Graph() = default;

  /// Edges are unordered nonloop pairs; loops are implicit (one per vertex).
  Graph(std::vector<std::string> labels, std::vector<std::pair<int, int>> edges) : labels_(std::move(labels)) {
    const int n = static_cast<int>(labels_.size());
    if (n == 0) throw std::domain_error("graph needs at least one vertex");
    adjacency_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), false);
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) throw std::domain_error("edge endpoint out of range");
      if (u == v) throw std::domain_error("loops are implicit; nonloop edge list must not contain (u,u)");
      if (u > v) std::swap(u, v);
      if (has_edge(u, v)) throw std::domain_error("duplicate edge");
      adjacency_[index(u, v)] = adjacency_[index(v, u)] = true;
      edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (!connected()) throw std::domain_error("graph must be connected");
  }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int loop_count() const { return vertex_count(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// True for u == v (the loop) or a nonloop edge uv.
  bool has_edge(int u, int v) const { return u == v || adjacency_[index(u, v)]; }

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * labels_.size() + static_cast<std::size_t>(v);
  }

  bool connected() const {
    const int n = vertex_count();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (v != u && !seen[static_cast<std::size_t>(v)] && adjacency_[index(u, v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          ++count;
          stack.push_back(v);
        }
    }
    return count == n;
  }

  std::vector<std::string> labels_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<bool> adjacency_;
};

/// Complete graph on the 2^(N-1) configurations sharing the given last bit,
/// plus one loop per vertex. Vertex i is labelled by the N-1 bit binary
/// expansion of i followed by `last_bit`.
inline Graph build_component_graph(int sites, int last_bit = 0) {
  if (sites < 2) throw std::domain_error("component graph needs N >= 2");
  if (sites > 24) throw std::domain_error("component graph too large");
  if (last_bit != 0 && last_bit != 1) throw std::domain_error("last bit must be 0 or 1");
  const int n = 1 << (sites - 1);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::string label;
    for (int b = sites - 2; b >= 0; --b) label.push_back(static_cast<char>('0' + ((i >> b) & 1)));
    label.push_back(static_cast<char>('0' + last_bit));
    labels.push_back(std::move(label));
  }
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(std::move(labels), std::move(edges));
}

struct Arc {
  int origin = 0;
  int terminus = 0;
  bool is_loop() const { return origin == terminus; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Arcs in lexicographic (origin, terminus) order; size n + 2m.
class ArcSet {
 public:
  ArcSet() = default;
  explicit ArcSet(const Graph& g) : n_(g.vertex_count()) {
    lookup_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1);
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v)
        if (g.has_edge(u, v)) {
          lookup_[slot(u, v)] = static_cast<int>(arcs_.size());
          arcs_.push_back({u, v});
        }
    inverse_.resize(arcs_.size());
    for (std::size_t e = 0; e < arcs_.size(); ++e) inverse_[e] = find(arcs_[e].terminus, arcs_[e].origin);
  }

  std::size_t size() const { return arcs_.size(); }
  const Arc& operator[](std::size_t e) const { return arcs_[e]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  int inverse(std::size_t e) const { return inverse_[e]; }

  /// Index of arc (u,v) or -1.
  int find(int u, int v) const { return lookup_[slot(u, v)]; }

 private:
  std::size_t slot(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> inverse_;
  std::vector<int> lookup_;
};

}  // namespace qips
