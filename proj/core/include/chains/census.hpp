#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <vector>

#include "chains/budgets.hpp"
#include "chains/config.hpp"
#include "chains/graph.hpp"
#include "chains/plane.hpp"

namespace chains {

/// Repeats allows consecutive equal points in a chain (zero steps);
/// Proper forbids them. For graph censuses, Proper restricts to
/// assignments where adjacent vertices map to distinct points.
enum class ChainMode { Repeats, Proper };

inline const char* mode_name(ChainMode m) { return m == ChainMode::Repeats ? "repeats" : "proper"; }

/// An ordered tuple of consecutive squared distances identifying a chain.
struct ChainSignature {
  std::vector<SquaredDistance> entries;

  friend bool operator==(const ChainSignature& a, const ChainSignature& b) = default;
};

inline std::size_t hash_value(const ChainSignature& s) {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ s.entries.size();
  for (const auto& e : s.entries) h = hash_combine(h, hash_value(e));
  return h;
}

}  // namespace chains

template <>
struct std::hash<chains::ChainSignature> {
  std::size_t operator()(const chains::ChainSignature& s) const { return chains::hash_value(s); }
};

namespace chains {

/// Signature -> realization count. Absent signatures are not stored;
/// every stored count is >= 1. Total mass is |P|^{n+1} in Repeats mode
/// and |P|(|P|-1)^n in Proper mode.
struct MultiplicityTable {
  std::unordered_map<ChainSignature, BigInt> counts;
  int n = 0;
  ChainMode mode = ChainMode::Repeats;

  BigInt total_mass() const;
  /// Chain energy identity: sum of squared multiplicities.
  BigInt sum_squares() const;
};

struct CensusResult {
  BigInt cardinality;  // |Delta_n(P)| (or |Delta_G(P)|)
  MultiplicityTable table;
};

/// The distinct-chain census: |Delta_n(P)| plus the full multiplicity
/// function nu. Frontier DP over (signature prefix, endpoint) states; the
/// worker fan-out is over the first chain point with an ordered exact
/// merge, so results are independent of worker count.
CensusResult delta_n_census(const PointConfig& P, int n, ChainMode mode,
                            const Budgets& budgets = {}, int workers = 1);

/// Census over vertex assignments V(G) -> P, signature indexed by the
/// canonical edge order of G. Repeats mode places no constraint on the
/// assignment; Proper requires adjacent vertices to map to distinct
/// points.
CensusResult delta_graph_census(const PointConfig& P, const GraphSpec& G, ChainMode mode,
                                const Budgets& budgets = {});

}  // namespace chains
