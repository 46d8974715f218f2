#include "chains/energy.hpp"

#include <cmath>
#include <functional>
#include <thread>

#include "chains/errors.hpp"

namespace chains {

TransferOperator::TransferOperator(const PointConfig& P, ChainMode mode, const Budgets& budgets)
    : n_(P.size()), mode_(mode) {
  if (n_ < 1 || (mode == ChainMode::Proper && n_ < 2))
    throw PlanInvalidError("TransferOperator: config too small for mode");
  if (n_ * n_ > budgets.state_limit)
    throw SizeGuardError("TransferOperator: |P|^2 states exceed budget");
  dist_.assign(n_, std::vector<SquaredDistance>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      dist_[i][j] = squared_distance(P.points[i], P.points[j]);

  buckets_.resize(n_);
  for (std::size_t q = 0; q < n_; ++q) {
    for (std::size_t p = 0; p < n_; ++p) {
      if (mode == ChainMode::Proper && p == q) continue;
      buckets_[q][dist_[q][p]].push_back(p);
    }
  }
}

bool TransferOperator::step_allowed(std::size_t a, std::size_t a2, std::size_t b,
                                    std::size_t b2) const {
  if (mode_ == ChainMode::Proper && (a == b || a2 == b2)) return false;
  return dist_[a][b] == dist_[a2][b2];
}

std::vector<BigInt> TransferOperator::apply(const std::vector<BigInt>& v, int workers) const {
  const std::size_t N = n_;
  std::vector<BigInt> w(N * N, BigInt(0));
  auto run = [&](std::size_t begin, std::size_t end) {
    // Targets are flat state indices b * N + b2.
    for (std::size_t state = begin; state < end; ++state) {
      const std::size_t b = state / N;
      const std::size_t b2 = state % N;
      BigInt acc = 0;
      // Matching buckets: a step lands on (b, b2) iff the sources sit at
      // equal squared distance from b and b2 respectively.
      const auto& small = buckets_[b].size() <= buckets_[b2].size() ? buckets_[b] : buckets_[b2];
      const auto& other = buckets_[b].size() <= buckets_[b2].size() ? buckets_[b2] : buckets_[b];
      const bool small_is_b = buckets_[b].size() <= buckets_[b2].size();
      for (const auto& [d, pts] : small) {
        const auto it = other.find(d);
        if (it == other.end()) continue;
        const auto& a_side = small_is_b ? pts : it->second;
        const auto& a2_side = small_is_b ? it->second : pts;
        for (std::size_t a : a_side)
          for (std::size_t a2 : a2_side) acc += v[a * N + a2];
      }
      w[state] = std::move(acc);
    }
  };
  if (workers <= 1) {
    run(0, N * N);
  } else {
    const std::size_t total = N * N;
    const std::size_t chunk_count = std::min<std::size_t>(static_cast<std::size_t>(workers), total);
    std::vector<std::thread> threads;
    for (std::size_t c = 0; c < chunk_count; ++c) {
      threads.emplace_back(run, total * c / chunk_count, total * (c + 1) / chunk_count);
    }
    for (auto& t : threads) t.join();
  }
  return w;
}

BigInt TransferOperator::total_walks(int n, int workers) const {
  std::vector<BigInt> v(n_ * n_, BigInt(1));
  for (int i = 0; i < n; ++i) v = apply(v, workers);
  BigInt total = 0;
  for (const auto& x : v) total += x;
  return total;
}

BigInt energy_chain(const PointConfig& P, int n, ChainMode mode, const Budgets& budgets,
                    int workers) {
  if (n < 1) throw PlanInvalidError("energy_chain: n must be >= 1");
  return TransferOperator(P, mode, budgets).total_walks(n, workers);
}

BigInt energy_bruteforce(const PointConfig& P, int n, ChainMode mode, const Budgets& budgets) {
  if (n < 1) throw PlanInvalidError("energy_bruteforce: n must be >= 1");
  const std::size_t N = P.size();
  if (N < 1 || (mode == ChainMode::Proper && N < 2))
    throw PlanInvalidError("energy_bruteforce: config too small for mode");
  if (std::pow(static_cast<double>(N), 2 * (n + 1)) > budgets.bruteforce_limit)
    throw SizeGuardError("energy_bruteforce: |P|^{2(n+1)} exceeds budget");
  const bool proper = mode == ChainMode::Proper;

  std::vector<std::vector<SquaredDistance>> dist(N, std::vector<SquaredDistance>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) dist[i][j] = squared_distance(P.points[i], P.points[j]);

  BigInt total = 0;
  // Enumerate pairs of chains in lockstep, comparing each step directly.
  std::function<void(int, std::size_t, std::size_t)> rec = [&](int step, std::size_t a,
                                                               std::size_t a2) {
    if (step == n) {
      total += 1;
      return;
    }
    for (std::size_t b = 0; b < N; ++b) {
      if (proper && b == a) continue;
      for (std::size_t b2 = 0; b2 < N; ++b2) {
        if (proper && b2 == a2) continue;
        if (dist[a][b] == dist[a2][b2]) rec(step + 1, b, b2);
      }
    }
  };
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t a2 = 0; a2 < N; ++a2) rec(0, a, a2);
  return total;
}

BigInt energy_graph(const PointConfig& P, const GraphSpec& G, ChainMode mode,
                    const Budgets& budgets) {
  return delta_graph_census(P, G, mode, budgets).table.sum_squares();
}

EnergyReport check_cauchy_schwarz(const PointConfig& P, int n, ChainMode mode,
                                  const Budgets& budgets, int workers) {
  EnergyReport r;
  r.n = n;
  r.mode = mode;
  const auto census = delta_n_census(P, n, mode, budgets, workers);
  r.energy = energy_chain(P, n, mode, budgets, workers);
  r.delta_cardinality = census.cardinality;
  const BigInt mass = census.table.total_mass();
  r.mass_squared = mass * mass;
  r.bound = r.delta_cardinality * r.energy;
  r.ratio = r.bound == 0 ? 0.0 : mpq_class(mpq_class(r.mass_squared) / mpq_class(r.bound)).get_d();
  return r;
}

std::vector<MomentRow> check_moment_inequalities(const PointConfig& P, int n_max, ChainMode mode,
                                                 const Budgets& budgets, int workers) {
  if (n_max < 3) throw PlanInvalidError("check_moment_inequalities: n_max must be >= 3");
  TransferOperator T(P, mode, budgets);
  // One walk-count ladder up to n_max + 2 serves every row.
  std::vector<BigInt> E(n_max + 3);
  std::vector<BigInt> v(T.state_count(), BigInt(1));
  BigInt total = 0;
  for (const auto& x : v) total += x;
  E[0] = total;
  for (int i = 1; i <= n_max + 2; ++i) {
    v = T.apply(v, workers);
    total = 0;
    for (const auto& x : v) total += x;
    E[i] = total;
  }

  std::vector<MomentRow> rows;
  for (int n = 3; n <= n_max; ++n) {
    MomentRow row;
    row.n = n;
    row.squared = E[n] * E[n];
    row.adjacent_product = E[n - 1] * E[n + 1];
    row.spread_product = E[n - 2] * E[n + 2];
    row.adjacent = n % 2 == 1;
    row.bound = row.adjacent ? row.adjacent_product : row.spread_product;
    row.holds = row.squared <= row.bound;
    row.ratio = row.bound == 0 ? 0.0
                               : mpq_class(mpq_class(row.squared) / mpq_class(row.bound)).get_d();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace chains
