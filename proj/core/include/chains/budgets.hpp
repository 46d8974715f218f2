#pragma once

#include <cstddef>
#include <cstdint>

namespace chains {

/// Enumeration and memory budgets shared by the counting kernels. All
/// guards throw SizeGuardError when exceeded; nothing is truncated
/// silently.
struct Budgets {
  /// Max distinct chain signatures held by the census DP.
  std::size_t signature_limit = 5'000'000;
  /// Max |P|^m vertex assignments for graph census / graph energy.
  double assignment_limit = 1e8;
  /// Max |P|^{2(n+1)} chain pairs for the brute-force energy oracle.
  double bruteforce_limit = 1e8;
  /// Max |P|^2 pair states for the transfer operator.
  std::size_t state_limit = 4'000'000;
  /// Max lines in an incidence structure (pair classification is quadratic).
  std::size_t line_limit = 10'000;
  /// Max pairwise-skew triples examined by the regulus audit.
  std::uint64_t regulus_triple_limit = 2'000'000;
};

}  // namespace chains
