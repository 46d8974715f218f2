#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "chains/budgets.hpp"
#include "chains/census.hpp"
#include "chains/config.hpp"
#include "chains/graph.hpp"

namespace chains {

/// The symmetric 0/1 relation on ordered point pairs (a, a') whose
/// length-n walk count equals the chain energy E_n(P): a step to (b, b')
/// is allowed iff |a-b|^2 = |a'-b'|^2 (Proper mode additionally requires
/// a != b and a' != b'). Realized through per-point distance buckets, not
/// a dense |P|^2 x |P|^2 matrix.
class TransferOperator {
 public:
  TransferOperator(const PointConfig& P, ChainMode mode, const Budgets& budgets = {});

  std::size_t state_count() const { return n_ * n_; }
  ChainMode mode() const { return mode_; }

  /// One application of the relation to a walk-count vector indexed by
  /// state a * |P| + a'. Deterministic for any worker count: targets are
  /// partitioned and written disjointly.
  std::vector<BigInt> apply(const std::vector<BigInt>& v, int workers = 1) const;

  /// Total length-n walk count from the all-ones vector.
  BigInt total_walks(int n, int workers = 1) const;

  /// Direct adjacency test between two states; used by audits and tests.
  bool step_allowed(std::size_t a, std::size_t a2, std::size_t b, std::size_t b2) const;

 private:
  std::size_t n_;
  ChainMode mode_;
  std::vector<std::vector<SquaredDistance>> dist_;
  // buckets_[q]: squared distance -> points of P at that distance from q.
  // Repeats mode keeps the zero bucket {q}; Proper drops it.
  std::vector<std::unordered_map<SquaredDistance, std::vector<std::size_t>>> buckets_;
};

/// |E_n(P)| by transfer-operator walk counting.
BigInt energy_chain(const PointConfig& P, int n, ChainMode mode, const Budgets& budgets = {},
                    int workers = 1);

/// Independent oracle for energy_chain: direct enumeration of chain pairs
/// with step-by-step distance comparison, no bucket machinery.
BigInt energy_bruteforce(const PointConfig& P, int n, ChainMode mode, const Budgets& budgets = {});

/// Graph energy: sum of squared multiplicities of the graph census.
BigInt energy_graph(const PointConfig& P, const GraphSpec& G, ChainMode mode,
                    const Budgets& budgets = {});

struct EnergyReport {
  int n = 0;
  ChainMode mode = ChainMode::Repeats;
  BigInt energy;              // E_n(P)
  BigInt delta_cardinality;   // |Delta_n(P)|
  BigInt mass_squared;        // (total chain count)^2, the Cauchy-Schwarz left side
  BigInt bound;               // |Delta_n| * E_n, the right side
  double ratio = 0.0;         // left / right
};

/// Evaluates the Cauchy-Schwarz chain inequality exactly and returns all
/// quantities. The inequality itself (left <= right) is a theorem; the
/// report lets callers assert it.
EnergyReport check_cauchy_schwarz(const PointConfig& P, int n, ChainMode mode,
                                  const Budgets& budgets = {}, int workers = 1);

struct MomentRow {
  int n = 0;
  BigInt squared;           // E_n^2
  BigInt bound;             // the provable product for this parity
  bool adjacent = false;    // true: bound = E_{n-1} E_{n+1}; false: E_{n-2} E_{n+2}
  bool holds = false;
  // Both products are recorded so the complementary parity pattern can be
  // inspected as well.
  BigInt adjacent_product;  // E_{n-1} E_{n+1}
  BigInt spread_product;    // E_{n-2} E_{n+2}
  double ratio = 0.0;       // squared / bound
};

/// Exact point-level moment inequalities of the symmetric transfer
/// operator: E_n^2 <= E_{n-1} E_{n+1} for odd n and E_n^2 <= E_{n-2}
/// E_{n+2} for even n, for n = 3..n_max. No hidden constants.
std::vector<MomentRow> check_moment_inequalities(const PointConfig& P, int n_max, ChainMode mode,
                                                 const Budgets& budgets = {}, int workers = 1);

}  // namespace chains
