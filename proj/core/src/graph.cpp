#include "loewner/graph.hpp"

#include <algorithm>
#include <set>

#include "loewner/errors.hpp"
#include "loewner/rng.hpp"

namespace loewner {

Graph::Graph(std::size_t n_nodes,
             const std::vector<std::pair<int, int>>& edges) {
  if (n_nodes == 0) throw ValidationError("Graph: need at least one node");
  std::set<std::pair<int, int>> uniq;
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= static_cast<int>(n_nodes) ||
        j >= static_cast<int>(n_nodes)) {
      throw ValidationError("Graph: edge endpoint out of range");
    }
    if (i == j) throw ValidationError("Graph: self-loop");
    uniq.insert({std::min(i, j), std::max(i, j)});
  }
  edges_.assign(uniq.begin(), uniq.end());

  neighbors_.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    neighbors_[i].push_back(static_cast<int>(i));
  }
  for (auto [i, j] : edges_) {
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

  // Connectivity via breadth-first traversal from node 0.
  std::vector<char> seen(n_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : neighbors_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  if (visited != n_nodes) {
    throw DisconnectedGraph("Graph: not connected");
  }
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  const auto& nb = neighbors_.at(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::size_t Graph::degree(int i) const { return neighbors_.at(i).size() - 1; }

const std::vector<int>& Graph::closed_neighborhood(int i) const {
  return neighbors_.at(i);
}

Graph random_connected_graph(std::size_t n_nodes, double edge_prob,
                             std::uint64_t seed) {
  if (!(edge_prob > 0.0) || edge_prob > 1.0) {
    throw ValidationError("random_connected_graph: edge_prob not in (0, 1]");
  }
  Rng rng(seed);
  for (;;) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      for (std::size_t j = i + 1; j < n_nodes; ++j) {
        if (rng.bernoulli(edge_prob)) {
          edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
      }
    }
    try {
      return Graph(n_nodes, edges);
    } catch (const DisconnectedGraph&) {
      // redraw; success has positive probability since edge_prob > 0
    }
  }
}

}  // namespace loewner
