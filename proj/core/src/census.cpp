#include "chains/census.hpp"

#include <cmath>
#include <functional>
#include <thread>
#include <utility>

#include "chains/errors.hpp"

namespace chains {

namespace {

// Dense squared-distance matrix for a config; the counting loops index it
// instead of recomputing rational differences.
std::vector<std::vector<SquaredDistance>> distance_matrix(const PointConfig& P) {
  const std::size_t N = P.size();
  std::vector<std::vector<SquaredDistance>> d(N, std::vector<SquaredDistance>(N));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      d[i][j] = squared_distance(P.points[i], P.points[j]);
      d[j][i] = d[i][j];
    }
  }
  return d;
}

using FrontierState = std::unordered_map<ChainSignature, std::vector<BigInt>>;

// Full census restricted to chains whose first point lies in [first_begin,
// first_end).
std::unordered_map<ChainSignature, BigInt> census_chunk(
    const std::vector<std::vector<SquaredDistance>>& dist, std::size_t N, int n, ChainMode mode,
    std::size_t first_begin, std::size_t first_end, const Budgets& budgets) {
  const bool proper = mode == ChainMode::Proper;

  FrontierState frontier;
  {
    std::vector<BigInt> init(N, BigInt(0));
    for (std::size_t a = first_begin; a < first_end; ++a) init[a] = 1;
    frontier.emplace(ChainSignature{}, std::move(init));
  }

  std::unordered_map<ChainSignature, BigInt> final_table;
  for (int level = 1; level <= n; ++level) {
    const bool last = level == n;
    FrontierState next;
    for (const auto& [sig, per_endpoint] : frontier) {
      for (std::size_t a = 0; a < N; ++a) {
        if (per_endpoint[a] == 0) continue;
        for (std::size_t b = 0; b < N; ++b) {
          if (proper && a == b) continue;
          ChainSignature extended = sig;
          extended.entries.push_back(dist[a][b]);
          if (last) {
            final_table[std::move(extended)] += per_endpoint[a];
          } else {
            auto it = next.find(extended);
            if (it == next.end()) {
              if (next.size() >= budgets.signature_limit)
                throw SizeGuardError("delta_n_census: signature count exceeds budget");
              it = next.emplace(std::move(extended), std::vector<BigInt>(N, BigInt(0))).first;
            }
            it->second[b] += per_endpoint[a];
          }
        }
      }
      if (last && final_table.size() > budgets.signature_limit)
        throw SizeGuardError("delta_n_census: signature count exceeds budget");
    }
    frontier = std::move(next);
  }
  return final_table;
}

}  // namespace

BigInt MultiplicityTable::total_mass() const {
  BigInt total = 0;
  for (const auto& [sig, count] : counts) total += count;
  return total;
}

BigInt MultiplicityTable::sum_squares() const {
  BigInt total = 0;
  for (const auto& [sig, count] : counts) total += count * count;
  return total;
}

CensusResult delta_n_census(const PointConfig& P, int n, ChainMode mode, const Budgets& budgets,
                            int workers) {
  if (n < 1) throw PlanInvalidError("delta_n_census: n must be >= 1");
  const std::size_t N = P.size();
  if (N < 1 || (mode == ChainMode::Proper && N < 2))
    throw PlanInvalidError("delta_n_census: config too small for mode");
  if (workers < 1) workers = 1;
  const auto dist = distance_matrix(P);

  const std::size_t chunk_count = std::min<std::size_t>(static_cast<std::size_t>(workers), N);
  std::vector<std::unordered_map<ChainSignature, BigInt>> partials(chunk_count);
  if (chunk_count == 1) {
    partials[0] = census_chunk(dist, N, n, mode, 0, N, budgets);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(chunk_count);
    for (std::size_t c = 0; c < chunk_count; ++c) {
      const std::size_t begin = N * c / chunk_count;
      const std::size_t end = N * (c + 1) / chunk_count;
      threads.emplace_back([&, c, begin, end] {
        try {
          partials[c] = census_chunk(dist, N, n, mode, begin, end, budgets);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  CensusResult result;
  result.table.n = n;
  result.table.mode = mode;
  // Merge in chunk order; exact addition makes the union independent of
  // worker count.
  for (auto& part : partials) {
    for (auto& [sig, count] : part) result.table.counts[sig] += count;
  }
  result.cardinality = BigInt(result.table.counts.size());
  return result;
}

CensusResult delta_graph_census(const PointConfig& P, const GraphSpec& G, ChainMode mode,
                                const Budgets& budgets) {
  const std::size_t N = P.size();
  if (N < 1) throw PlanInvalidError("delta_graph_census: empty config");
  const int m = G.vertex_count;
  if (std::pow(static_cast<double>(N), m) > budgets.assignment_limit)
    throw SizeGuardError("delta_graph_census: |P|^m exceeds assignment budget");
  const auto dist = distance_matrix(P);
  const bool proper = mode == ChainMode::Proper;

  // Edges incident to vertex v against already-assigned vertices; used for
  // the adjacent-distinct pruning during assignment.
  std::vector<std::vector<int>> earlier_neighbors(m);
  for (auto [a, b] : G.edges) earlier_neighbors[std::max(a, b)].push_back(std::min(a, b));

  CensusResult result;
  result.table.n = static_cast<int>(G.edges.size());
  result.table.mode = mode;

  std::vector<std::size_t> assign(m, 0);
  // Iterative odometer over assignments with properness pruning.
  auto emit = [&]() {
    ChainSignature sig;
    sig.entries.reserve(G.edges.size());
    for (auto [a, b] : G.edges) sig.entries.push_back(dist[assign[a]][assign[b]]);
    result.table.counts[std::move(sig)] += 1;
  };
  std::function<void(int)> rec = [&](int v) {
    if (v == m) {
      emit();
      return;
    }
    for (std::size_t p = 0; p < N; ++p) {
      if (proper) {
        bool clash = false;
        for (int u : earlier_neighbors[v]) {
          if (assign[u] == p) {
            clash = true;
            break;
          }
        }
        if (clash) continue;
      }
      assign[v] = p;
      rec(v + 1);
    }
  };
  rec(0);

  result.cardinality = BigInt(result.table.counts.size());
  return result;
}

}  // namespace chains
