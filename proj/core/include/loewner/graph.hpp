// Undirected communication topology. Neighborhoods are closed (a node is
// its own neighbor) and returned in ascending id order, which fixes the
// atom ordering everywhere downstream.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace loewner {

class Graph {
 public:
  // Nodes are 0..n-1. Edges are unordered pairs; duplicates are collapsed.
  // Throws ValidationError for out-of-range or self-loop edges and
  // DisconnectedGraph when the graph is not connected.
  Graph(std::size_t n_nodes, const std::vector<std::pair<int, int>>& edges);

  std::size_t n_nodes() const { return neighbors_.size(); }
  bool has_edge(int i, int j) const;
  std::size_t degree(int i) const;  // open degree, excludes the node itself

  // Sorted ascending, always contains i itself.
  const std::vector<int>& closed_neighborhood(int i) const;

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  std::vector<std::vector<int>> neighbors_;  // closed, sorted
  std::vector<std::pair<int, int>> edges_;   // normalized i < j, sorted
};

// Erdos-Renyi draws with the given edge probability, redrawn until
// connected. Deterministic in (n_nodes, edge_prob, seed).
Graph random_connected_graph(std::size_t n_nodes, double edge_prob,
                             std::uint64_t seed);

}  // namespace loewner
