#pragma once

#include <spherecon/detail/platonic.hpp>

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spherecon {

/// Undirected simple graph on nodes 0..N-1. Immutable edge set after
/// construction; each edge additionally carries a gain identifier (default 0,
/// i.e. one shared gain) so that per-edge gains f_ij are keyed by the
/// unordered pair and f_ij = f_ji holds structurally.
class Graph {
 public:
  Graph(int num_nodes, std::vector<std::pair<int, int>> edge_list)
      : num_nodes_(num_nodes) {
    if (num_nodes_ < 1) throw std::invalid_argument("Graph: need at least one node");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edge_list) {
      if (a == b) throw std::invalid_argument("Graph: self-loop rejected");
      if (a < 0 || b < 0 || a >= num_nodes_ || b >= num_nodes_) {
        throw std::invalid_argument("Graph: node index out of range");
      }
      if (a > b) std::swap(a, b);
      if (!seen.insert({a, b}).second) {
        throw std::invalid_argument("Graph: duplicate edge rejected");
      }
    }
    edges_.assign(seen.begin(), seen.end());
    edge_gain_.assign(edges_.size(), 0);
    incident_.assign(num_nodes_, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      auto [a, b] = edges_[e];
      incident_[a].emplace_back(b, e);
      incident_[b].emplace_back(a, e);
    }
  }

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// (neighbor, edge index) pairs incident to node i.
  const std::vector<std::pair<int, int>>& incident(int i) const { return incident_.at(i); }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (auto [j, e] : incident_.at(i)) out.push_back(j);
    return out;
  }

  int degree(int i) const { return static_cast<int>(incident_.at(i).size()); }

  int edge_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(a, b));
    if (it == edges_.end() || *it != std::make_pair(a, b)) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  void set_edge_gain(int a, int b, int gain_id) {
    const int e = edge_index(a, b);
    if (e < 0) throw std::invalid_argument("set_edge_gain: no such edge");
    edge_gain_[e] = gain_id;
  }

  int edge_gain(int edge) const { return edge_gain_.at(edge); }

  bool is_connected() const {
    std::vector<char> visited(num_nodes_, 0);
    std::queue<int> queue;
    queue.push(0);
    visited[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop();
      for (auto [j, e] : incident_[i]) {
        if (!visited[j]) {
          visited[j] = 1;
          ++count;
          queue.push(j);
        }
      }
    }
    return count == num_nodes_;
  }

  static Graph cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(e));
  }

  static Graph complete(int n) {
    if (n < 2) throw std::invalid_argument("complete: need n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, std::move(e));
  }

  static Graph path(int n) {
    if (n < 2) throw std::invalid_argument("path: need n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, std::move(e));
  }

  /// Two complete clusters of n/2 nodes joined by a single bridge edge.
  static Graph barbell(int n) {
    if (n < 6 || n % 2 != 0) throw std::invalid_argument("barbell: need even n >= 6");
    const int half = n / 2;
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < half; ++i)
      for (int j = i + 1; j < half; ++j) e.emplace_back(i, j);
    for (int i = half; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    e.emplace_back(half - 1, half);
    return Graph(n, std::move(e));
  }

  static Graph from_solid(detail::Solid solid) {
    const auto vertices = detail::platonic_vertices(solid);
    return Graph(static_cast<int>(vertices.size()), detail::nearest_neighbor_edges(vertices));
  }

  static Graph tetrahedral() { return from_solid(detail::Solid::tetrahedron); }
  static Graph octahedral() { return from_solid(detail::Solid::octahedron); }
  static Graph cube() { return from_solid(detail::Solid::cube); }
  static Graph icosahedral() { return from_solid(detail::Solid::icosahedron); }
  static Graph dodecahedral() { return from_solid(detail::Solid::dodecahedron); }

 private:
  int num_nodes_;
  std::vector<std::pair<int, int>> edges_;  // normalized a < b, sorted
  std::vector<int> edge_gain_;
  std::vector<std::vector<std::pair<int, int>>> incident_;
};

/// Builds a named topology. `n` is required for the sized kinds and, when
/// given for a fixed-size kind, must match its node count.
inline Graph named_graph(const std::string& kind, int n = -1) {
  auto fixed = [&](Graph g) {
    if (n >= 0 && n != g.num_nodes()) {
      throw std::invalid_argument("named_graph: node count does not match kind '" + kind + "'");
    }
    return g;
  };
  if (kind == "cycle") return Graph::cycle(n);
  if (kind == "complete") return Graph::complete(n);
  if (kind == "path" || kind == "tree") return Graph::path(n);
  if (kind == "barbell") return Graph::barbell(n < 0 ? 6 : n);
  if (kind == "tetrahedral") return fixed(Graph::tetrahedral());
  if (kind == "octahedral") return fixed(Graph::octahedral());
  if (kind == "cube") return fixed(Graph::cube());
  if (kind == "icosahedral") return fixed(Graph::icosahedral());
  if (kind == "dodecahedral") return fixed(Graph::dodecahedral());
  throw std::invalid_argument("named_graph: unknown kind '" + kind + "'");
}

}  // namespace spherecon
