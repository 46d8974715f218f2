#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chains {

/// A simple connected graph with canonically sorted edge list. Vertices
/// are 0-based indices; every edge is stored as (i, j) with i < j.
struct GraphSpec {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  /// Throws PlanInvalidError if the graph is not simple, not connected,
  /// or has fewer than 2 vertices. Sorts the edge list.
  static GraphSpec make(int vertex_count, std::vector<std::pair<int, int>> edges);

  static GraphSpec path(int vertex_count);
  static GraphSpec complete(int vertex_count);
  /// Vertex 0 is the hub; vertices 1..leaves attach to it.
  static GraphSpec star(int leaves);

  std::vector<std::vector<int>> adjacency() const;

  friend bool operator==(const GraphSpec& a, const GraphSpec& b) = default;
};

GraphSpec graph_from_json(const std::string& text);
GraphSpec load_graph(const std::string& path);
std::string graph_to_json(const GraphSpec& g);

/// Deterministic spanning tree: breadth-first from vertex 0, neighbors
/// scanned in increasing order. Returns G itself when G is already a tree
/// (the BFS tree of a tree is the tree).
GraphSpec spanning_tree(const GraphSpec& g);

/// A vertex order visiting every vertex once along edges of g, if one
/// exists. Bitmask dynamic program; throws SizeGuardError above 20 vertices.
std::optional<std::vector<int>> hamiltonian_path(const GraphSpec& g);

}  // namespace chains
