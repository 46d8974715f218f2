#include <doctest.h>

#include "chains/energy.hpp"
#include "chains/errors.hpp"

using namespace chains;

namespace {
Rational rat(long n) { return Rational(n); }

PointConfig two_points() {
  PointConfig cfg;
  cfg.name = "pair";
  cfg.points = {{rat(0), rat(0)}, {rat(1), rat(0)}};
  return cfg;
}
}  // namespace

TEST_CASE("two-point energies in closed form") {
  // With |P| = 2 every ordered pair of chains is compatible in Repeats
  // mode (each step either stays or swaps on both sides), so E_n = 4 * 2^n.
  const auto P = two_points();
  CHECK(energy_chain(P, 1, ChainMode::Repeats) == 8);
  CHECK(energy_chain(P, 2, ChainMode::Repeats) == 16);
  CHECK(energy_chain(P, 3, ChainMode::Repeats) == 32);
  // Proper chains must alternate, so exactly 2 chains exist per length and
  // E_n = 4.
  CHECK(energy_chain(P, 1, ChainMode::Proper) == 4);
  CHECK(energy_chain(P, 2, ChainMode::Proper) == 4);
}

TEST_CASE("unit square E_1") {
  // nu(0) = 4, nu(1) = 8, nu(2) = 4: E_1 = 16 + 64 + 16 = 96.
  CHECK(energy_chain(gen_lattice(2), 1, ChainMode::Repeats) == 96);
  // Proper drops the zero class: 64 + 16 = 80.
  CHECK(energy_chain(gen_lattice(2), 1, ChainMode::Proper) == 80);
}

TEST_CASE("transfer operator agrees with brute force") {
  const auto configs = {gen_lattice(2), gen_random(4, 21, 5), gen_star_circles(2, {rat(1)})};
  for (const auto& P : configs) {
    for (int n : {1, 2}) {
      for (ChainMode mode : {ChainMode::Repeats, ChainMode::Proper}) {
        CAPTURE(P.name);
        CAPTURE(n);
        CHECK(energy_chain(P, n, mode) == energy_bruteforce(P, n, mode));
      }
    }
  }
}

TEST_CASE("energy equals sum of squared census multiplicities") {
  const auto P = gen_random(6, 13, 5);
  for (int n : {1, 2, 3}) {
    for (ChainMode mode : {ChainMode::Repeats, ChainMode::Proper}) {
      const auto census = delta_n_census(P, n, mode);
      CHECK(energy_chain(P, n, mode) == census.table.sum_squares());
    }
  }
}

TEST_CASE("graph energy on a path equals chain energy") {
  const auto P = gen_random(5, 8, 4);
  for (int n : {1, 2}) {
    for (ChainMode mode : {ChainMode::Repeats, ChainMode::Proper}) {
      CHECK(energy_graph(P, GraphSpec::path(n + 1), mode) == energy_chain(P, n, mode));
    }
  }
}

TEST_CASE("step_allowed matches the defining distance equality") {
  const auto P = gen_random(5, 31, 4);
  const TransferOperator T(P, ChainMode::Repeats);
  const TransferOperator Tp(P, ChainMode::Proper);
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t a2 = 0; a2 < P.size(); ++a2)
      for (std::size_t b = 0; b < P.size(); ++b)
        for (std::size_t b2 = 0; b2 < P.size(); ++b2) {
          const bool equal_step = squared_distance(P.points[a], P.points[b]) ==
                                  squared_distance(P.points[a2], P.points[b2]);
          CHECK(T.step_allowed(a, a2, b, b2) == equal_step);
          CHECK(Tp.step_allowed(a, a2, b, b2) == (equal_step && a != b && a2 != b2));
        }
}

TEST_CASE("cauchy-schwarz report") {
  SUBCASE("two points achieve equality") {
    const auto rep = check_cauchy_schwarz(two_points(), 2, ChainMode::Repeats);
    CHECK(rep.mass_squared == 64);  // (2^3)^2
    CHECK(rep.energy == 16);
    CHECK(rep.delta_cardinality == 4);
    CHECK(rep.bound == 64);
    CHECK(rep.ratio == doctest::Approx(1.0));
  }
  SUBCASE("inequality holds on varied sets") {
    for (const auto& P : {gen_lattice(3), gen_random(7, 2, 5)}) {
      for (int n : {1, 2}) {
        for (ChainMode mode : {ChainMode::Repeats, ChainMode::Proper}) {
          const auto rep = check_cauchy_schwarz(P, n, mode);
          CHECK(rep.mass_squared <= rep.bound);
          CHECK(rep.ratio <= 1.0 + 1e-12);
          CHECK(rep.ratio > 0.0);
        }
      }
    }
  }
}

TEST_CASE("moment inequalities hold with both products recorded") {
  for (const auto& P : {gen_lattice(2), gen_lattice(3), gen_random(6, 44, 5)}) {
    for (ChainMode mode : {ChainMode::Repeats, ChainMode::Proper}) {
      const auto rows = check_moment_inequalities(P, 6, mode);
      REQUIRE(rows.size() == 4);  // n = 3..6
      for (const auto& row : rows) {
        CAPTURE(P.name);
        CAPTURE(row.n);
        CHECK(row.holds);
        CHECK(row.squared <= row.bound);
        CHECK(row.adjacent == (row.n % 2 == 1));
        CHECK(row.bound == (row.adjacent ? row.adjacent_product : row.spread_product));
        CHECK(row.ratio <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("worker count does not change energies") {
  const auto P = gen_random(8, 55, 6);
  for (int workers : {2, 5, 8}) {
    CHECK(energy_chain(P, 3, ChainMode::Repeats, {}, workers) ==
          energy_chain(P, 3, ChainMode::Repeats, {}, 1));
    CHECK(energy_chain(P, 3, ChainMode::Proper, {}, workers) ==
          energy_chain(P, 3, ChainMode::Proper, {}, 1));
  }
}

TEST_CASE("state budget guard") {
  Budgets tight;
  tight.state_limit = 10;
  CHECK_THROWS_AS(energy_chain(gen_lattice(3), 2, ChainMode::Repeats, tight), SizeGuardError);
}
