#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chains/budgets.hpp"
#include "chains/census.hpp"
#include "chains/config.hpp"
#include "chains/esgk.hpp"
#include "chains/graph.hpp"

namespace chains {

/// One quantity to evaluate per ladder size.
struct QuantitySpec {
  enum class Kind { DeltaN, EnergyN, DeltaGraph, Bound };
  Kind kind = Kind::DeltaN;
  int n = 1;                      // DeltaN / EnergyN
  std::optional<GraphSpec> graph; // DeltaGraph
  std::optional<BoundId> bound;   // Bound

  std::string id() const;
};

struct GeneratorSpec {
  enum class Kind { Lattice, StarCircles, Random };
  Kind kind = Kind::Lattice;
  std::vector<Rational> radii;        // star
  std::uint64_t seed = 1;             // random
  int denominator_bound = 100;        // random

  /// The ladder size parameter is the lattice side, points per circle, or
  /// random point count respectively.
  PointConfig generate(int size) const;
};

struct ExperimentPlan {
  std::string name;
  GeneratorSpec generator;
  std::vector<int> sizes;  // strictly increasing
  std::vector<QuantitySpec> quantities;
  std::vector<ChainMode> modes;
  Budgets budgets;
  int workers = 1;

  /// Throws PlanInvalidError on an empty quantity list, a non-increasing
  /// ladder, or an unusable generator.
  void validate() const;
};

ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan load_plan(const std::string& path);

struct ResultRow {
  std::string config_name;
  std::size_t point_count = 0;
  std::string quantity;
  std::string mode;
  std::string value;  // exact decimal string, empty on error
  double wall_ms = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Evaluates every (size, quantity, mode) cell. A failing cell records an
/// error row; the sweep continues. Rows come back sorted by (config,
/// size, quantity, mode).
std::vector<ResultRow> run_plan(const ExperimentPlan& plan);

struct FitSummary {
  std::string quantity;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square residual of the fit
  int row_count = 0;
  double gamma = 0.0;  // polylog correction exponent applied, 0 = none
};

/// Ordinary least squares of log(value) (optionally log(value *
/// log^gamma |P|)) against log |P| over the positive rows of one
/// quantity. Throws InsufficientDataError below 3 rows.
FitSummary fit_exponent(const std::vector<ResultRow>& rows, const std::string& quantity,
                        double gamma = 0.0);

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> load_rows_csv(const std::string& path);

/// Standalone SVG 1.1 log-log scatter with the fitted line.
void emit_svg_loglog(const std::vector<ResultRow>& rows, const FitSummary& fit,
                     const std::string& path);

}  // namespace chains
