#include "chains/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chains/errors.hpp"

namespace chains {

GraphSpec GraphSpec::make(int vertex_count, std::vector<std::pair<int, int>> edges) {
  if (vertex_count < 2) throw PlanInvalidError("GraphSpec: need at least 2 vertices");
  std::set<std::pair<int, int>> canon;
  for (auto [a, b] : edges) {
    if (a == b) throw PlanInvalidError("GraphSpec: loop at vertex " + std::to_string(a));
    if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
      throw PlanInvalidError("GraphSpec: edge endpoint out of range");
    if (a > b) std::swap(a, b);
    if (!canon.insert({a, b}).second)
      throw PlanInvalidError("GraphSpec: duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  GraphSpec g;
  g.vertex_count = vertex_count;
  g.edges.assign(canon.begin(), canon.end());

  // Connectivity check.
  std::vector<char> seen(vertex_count, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  const auto adj = g.adjacency();
  int reached = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  if (reached != vertex_count) throw PlanInvalidError("GraphSpec: graph is not connected");
  return g;
}

GraphSpec GraphSpec::path(int vertex_count) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < vertex_count; ++i) e.push_back({i, i + 1});
  return make(vertex_count, std::move(e));
}

GraphSpec GraphSpec::complete(int vertex_count) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < vertex_count; ++i)
    for (int j = i + 1; j < vertex_count; ++j) e.push_back({i, j});
  return make(vertex_count, std::move(e));
}

GraphSpec GraphSpec::star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
  return make(leaves + 1, std::move(e));
}

std::vector<std::vector<int>> GraphSpec::adjacency() const {
  std::vector<std::vector<int>> adj(vertex_count);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

GraphSpec graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedFileError(std::string("graph parse error: ") + e.what());
  }
  if (!j.contains("m") || !j["m"].is_number_integer())
    throw MalformedFileError("graph: missing integer field 'm'");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw MalformedFileError("graph: missing array field 'edges'");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw MalformedFileError("graph: edges must be pairs");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  try {
    return GraphSpec::make(j["m"].get<int>(), std::move(edges));
  } catch (const PlanInvalidError& e) {
    throw MalformedFileError(e.what());
  }
}

GraphSpec load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

std::string graph_to_json(const GraphSpec& g) {
  nlohmann::json j;
  j["m"] = g.vertex_count;
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : g.edges) edges.push_back({a, b});
  j["edges"] = edges;
  return j.dump();
}

GraphSpec spanning_tree(const GraphSpec& g) {
  const auto adj = g.adjacency();
  std::vector<char> seen(g.vertex_count, 0);
  std::vector<std::pair<int, int>> tree_edges;
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        tree_edges.push_back({std::min(u, v), std::max(u, v)});
        q.push(v);
      }
    }
  }
  return GraphSpec::make(g.vertex_count, std::move(tree_edges));
}

std::optional<std::vector<int>> hamiltonian_path(const GraphSpec& g) {
  const int m = g.vertex_count;
  if (m > 20) throw SizeGuardError("hamiltonian_path: vertex count above bitmask budget (20)");
  const auto adj = g.adjacency();
  std::vector<std::uint32_t> nbr(m, 0);
  for (int u = 0; u < m; ++u)
    for (int v : adj[u]) nbr[u] |= 1u << v;

  const std::uint32_t full = (1u << m) - 1;
  // reach[mask][v] = a path visiting exactly `mask` can end at v.
  std::vector<std::vector<char>> reach(full + 1, std::vector<char>(m, 0));
  std::vector<std::vector<int>> pred(full + 1, std::vector<int>(m, -1));
  for (int v = 0; v < m; ++v) reach[1u << v][v] = 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int v = 0; v < m; ++v) {
      if (!reach[mask][v]) continue;
      for (int w = 0; w < m; ++w) {
        const std::uint32_t bit = 1u << w;
        if ((mask & bit) || !(nbr[v] & bit)) continue;
        if (!reach[mask | bit][w]) {
          reach[mask | bit][w] = 1;
          pred[mask | bit][w] = v;
        }
      }
    }
  }
  for (int v = 0; v < m; ++v) {
    if (!reach[full][v]) continue;
    std::vector<int> order;
    std::uint32_t mask = full;
    int cur = v;
    while (cur != -1) {
      order.push_back(cur);
      const int p = pred[mask][cur];
      mask &= ~(1u << cur);
      cur = p;
    }
    std::reverse(order.begin(), order.end());
    return order;
  }
  return std::nullopt;
}

}  // namespace chains
