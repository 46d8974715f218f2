// chain-census: command-line surface over the exact chain/energy/line
// counting library. See README.md for the subcommand grammar.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chains/census.hpp"
#include "chains/config.hpp"
#include "chains/energy.hpp"
#include "chains/errors.hpp"
#include "chains/esgk.hpp"
#include "chains/experiment.hpp"
#include "chains/graph.hpp"

namespace {

using namespace chains;

ChainMode parse_mode(const std::string& s) {
  if (s == "repeats") return ChainMode::Repeats;
  if (s == "proper") return ChainMode::Proper;
  throw PlanInvalidError("mode must be repeats|proper");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json table_json(const MultiplicityTable& table) {
  // Sorted by signature for reproducible output.
  std::vector<const std::pair<const ChainSignature, BigInt>*> entries;
  entries.reserve(table.counts.size());
  for (const auto& e : table.counts) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
    return std::lexicographical_compare(a->first.entries.begin(), a->first.entries.end(),
                                        b->first.entries.begin(), b->first.entries.end());
  });
  nlohmann::json arr = nlohmann::json::array();
  for (const auto* e : entries) {
    nlohmann::json sig = nlohmann::json::array();
    for (const auto& d : e->first.entries) sig.push_back(d.str());
    arr.push_back({{"signature", sig}, {"count", e->second.get_str()}});
  }
  return arr;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"exact chain, energy and line-arrangement statistics for planar point sets"};
  app.require_subcommand(1);
  int workers = 1;
  app.add_option("--workers", workers, "worker threads for the counting kernels")
      ->capture_default_str();

  // ---- gen ----------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a point configuration");
  std::string gen_kind = "lattice", gen_out, gen_radii = "1,2,3";
  int gen_size = 3, gen_bound = 100;
  std::uint64_t gen_seed = 1;
  gen->add_option("--kind", gen_kind, "lattice|star|random")->capture_default_str();
  gen->add_option("--size", gen_size, "lattice side / points per circle / random point count")
      ->capture_default_str();
  gen->add_option("--radii", gen_radii, "star radii, comma separated rationals")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "random generator seed")->capture_default_str();
  gen->add_option("--bound", gen_bound, "random denominator bound")->capture_default_str();
  gen->add_option("--out", gen_out, "output config file (default stdout)");

  // ---- census -------------------------------------------------------
  auto* census = app.add_subcommand("census", "distinct chain / graph distance census");
  census->require_subcommand(1);
  auto* census_chains = census->add_subcommand("chains", "census of distance n-chains");
  std::string cc_config, cc_mode = "repeats", cc_out;
  int cc_n = 1;
  census_chains->add_option("--config", cc_config, "point config file")->required();
  census_chains->add_option("--n", cc_n, "chain length")->capture_default_str();
  census_chains->add_option("--mode", cc_mode, "repeats|proper")->capture_default_str();
  census_chains->add_option("--out", cc_out, "output JSON file (default stdout)");
  auto* census_graph = census->add_subcommand("graph", "census of graph distance vectors");
  std::string cg_config, cg_graph, cg_mode = "repeats", cg_out;
  census_graph->add_option("--config", cg_config, "point config file")->required();
  census_graph->add_option("--graph", cg_graph, "graph spec file")->required();
  census_graph->add_option("--mode", cg_mode, "repeats|proper")->capture_default_str();
  census_graph->add_option("--out", cg_out, "output JSON file (default stdout)");

  // ---- energy -------------------------------------------------------
  auto* energy = app.add_subcommand("energy", "chain or graph energy");
  std::string en_config, en_mode = "repeats", en_graph, en_out;
  int en_n = 1;
  bool en_oracle = false;
  energy->add_option("--config", en_config, "point config file")->required();
  energy->add_option("--n", en_n, "chain length")->capture_default_str();
  energy->add_option("--mode", en_mode, "repeats|proper")->capture_default_str();
  energy->add_flag("--oracle", en_oracle, "also run the brute-force oracle and compare");
  energy->add_option("--graph", en_graph, "graph spec file (graph energy instead of chain)");
  energy->add_option("--out", en_out, "output JSON file (default stdout)");

  // ---- lines --------------------------------------------------------
  auto* lines = app.add_subcommand("lines", "rotation-line arrangements in R^3");
  lines->require_subcommand(1);
  auto* lines_build = lines->add_subcommand("build", "build the rotation lines of a config");
  std::string lb_config, lb_diagonal = "on", lb_out;
  lines_build->add_option("--config", lb_config, "point config file")->required();
  lines_build->add_option("--diagonal", lb_diagonal, "on|off: include lines of pairs (p,p)")
      ->capture_default_str();
  lines_build->add_option("--out", lb_out, "arrangement JSON file (default stdout)");
  auto* lines_audit = lines->add_subcommand("audit", "degeneracy audits of an arrangement");
  std::string la_arr, la_out;
  std::uint64_t la_regulus_budget = 0;
  lines_audit->add_option("--arr", la_arr, "arrangement JSON file")->required();
  lines_audit->add_option("--regulus-budget", la_regulus_budget,
                          "max skew triples for the regulus audit (0 = skip)")
      ->capture_default_str();
  lines_audit->add_option("--out", la_out, "output JSON file (default stdout)");

  std::string ob_arr, ob_bound, ob_out;
  std::optional<long> ob_s;
  bool ob_regulus = false;
  int ob_energy_n = 3;
  auto add_bounds_options = [&](CLI::App* cmd) {
    cmd->add_option("--arr", ob_arr, "arrangement JSON file")->required();
    cmd->add_option("--bound", ob_bound,
                    "GuthKatz|tRichPoints|RichLines|GenRichLines|kRichLines|IterativeLines|"
                    "EnergyEstimate")
        ->required();
    cmd->add_option("--s", ob_s, "override the degeneracy parameter s");
    cmd->add_flag("--regulus", ob_regulus, "include the regulus audit when deriving s");
    cmd->add_option("--energy-n", ob_energy_n, "odd chain length for EnergyEstimate")
        ->capture_default_str();
    cmd->add_option("--out", ob_out, "report CSV file (default stdout)");
  };
  auto* lines_bounds = lines->add_subcommand("bounds", "both-sides incidence bound report");
  add_bounds_options(lines_bounds);
  auto* bounds = app.add_subcommand("bounds", "alias of `lines bounds`");
  add_bounds_options(bounds);

  // ---- run / fit / plot --------------------------------------------
  auto* run = app.add_subcommand("run", "execute an experiment plan");
  std::string run_plan_path, run_out;
  run->add_option("--plan", run_plan_path, "plan JSON file")->required();
  run->add_option("--out", run_out, "result CSV file (default stdout)");

  auto* fit = app.add_subcommand("fit", "log-log slope fit over result rows");
  std::string fit_csv, fit_quantity;
  double fit_gamma = 0.0;
  fit->add_option("--csv", fit_csv, "result CSV from `run`")->required();
  fit->add_option("--quantity", fit_quantity, "quantity id to fit")->required();
  fit->add_option("--gamma", fit_gamma, "polylog correction exponent")->capture_default_str();

  auto* plot = app.add_subcommand("plot", "log-log SVG scatter with fitted line");
  std::string plot_csv, plot_quantity, plot_out;
  double plot_gamma = 0.0;
  plot->add_option("--csv", plot_csv, "result CSV from `run`")->required();
  plot->add_option("--quantity", plot_quantity, "quantity id to plot")->required();
  plot->add_option("--gamma", plot_gamma, "polylog correction exponent")->capture_default_str();
  plot->add_option("--out", plot_out, "SVG output file")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    PointConfig config;
    if (gen_kind == "lattice") {
      config = gen_lattice(gen_size);
    } else if (gen_kind == "star") {
      std::vector<Rational> radii;
      std::stringstream ss(gen_radii);
      std::string item;
      while (std::getline(ss, item, ',')) radii.push_back(Rational::parse(item));
      config = gen_star_circles(gen_size, radii);
    } else if (gen_kind == "random") {
      config = gen_random(gen_size, gen_seed, gen_bound);
    } else {
      throw PlanInvalidError("gen: kind must be lattice|star|random");
    }
    write_text(gen_out, config_to_json(config) + "\n");
    return 0;
  }

  if (census_chains->parsed()) {
    const auto config = load_config(cc_config);
    const auto result = delta_n_census(config, cc_n, parse_mode(cc_mode), {}, workers);
    nlohmann::json j;
    j["config"] = config.name;
    j["n"] = cc_n;
    j["mode"] = cc_mode;
    j["cardinality"] = result.cardinality.get_str();
    j["mass"] = result.table.total_mass().get_str();
    j["table"] = table_json(result.table);
    write_text(cc_out, j.dump(2) + "\n");
    return 0;
  }

  if (census_graph->parsed()) {
    const auto config = load_config(cg_config);
    const auto graph = load_graph(cg_graph);
    const auto result = delta_graph_census(config, graph, parse_mode(cg_mode));
    nlohmann::json j;
    j["config"] = config.name;
    j["graph"] = nlohmann::json::parse(graph_to_json(graph));
    j["mode"] = cg_mode;
    j["cardinality"] = result.cardinality.get_str();
    j["table"] = table_json(result.table);
    write_text(cg_out, j.dump(2) + "\n");
    return 0;
  }

  if (energy->parsed()) {
    const auto config = load_config(en_config);
    const auto mode = parse_mode(en_mode);
    nlohmann::json j;
    j["config"] = config.name;
    j["mode"] = en_mode;
    if (!en_graph.empty()) {
      const auto graph = load_graph(en_graph);
      j["graph"] = nlohmann::json::parse(graph_to_json(graph));
      j["energy"] = energy_graph(config, graph, mode).get_str();
    } else {
      const auto report = check_cauchy_schwarz(config, en_n, mode, {}, workers);
      j["n"] = en_n;
      j["energy"] = report.energy.get_str();
      j["delta_cardinality"] = report.delta_cardinality.get_str();
      j["mass_squared"] = report.mass_squared.get_str();
      j["bound"] = report.bound.get_str();
      j["ratio"] = report.ratio;
      if (en_oracle) {
        const auto oracle = energy_bruteforce(config, en_n, mode);
        j["oracle"] = oracle.get_str();
        j["oracle_agrees"] = oracle == report.energy;
      }
    }
    write_text(en_out, j.dump(2) + "\n");
    return 0;
  }

  if (lines_build->parsed()) {
    const auto config = load_config(lb_config);
    if (lb_diagonal != "on" && lb_diagonal != "off")
      throw PlanInvalidError("lines build: --diagonal must be on|off");
    const auto L = build_lines(config, lb_diagonal == "on");
    write_text(lb_out, arrangement_to_json(L) + "\n");
    return 0;
  }

  if (lines_audit->parsed()) {
    const auto L = load_arrangement(la_arr);
    const auto IS = build_incidence(L, {}, workers);
    const auto audit = run_audits(IS, la_regulus_budget > 0, la_regulus_budget);
    nlohmann::json j;
    j["line_count"] = audit.line_count;
    j["max_coplanar"] = audit.max_coplanar;
    j["max_concurrent"] = audit.max_concurrent;
    j["regulus_computed"] = audit.regulus_computed;
    if (audit.regulus_computed) j["max_regulus_transversals"] = audit.max_regulus_transversals;
    j["s"] = audit.s_value();
    write_text(la_out, j.dump(2) + "\n");
    return 0;
  }

  if (lines_bounds->parsed() || bounds->parsed()) {
    const auto L = load_arrangement(ob_arr);
    const auto IS = build_incidence(L, {}, workers);
    const auto id = parse_bound_id(ob_bound);
    if (!id) throw PlanInvalidError("unknown bound id: " + ob_bound);
    BoundOptions opts;
    opts.s_override = ob_s;
    opts.energy_n = ob_energy_n;
    const auto audit = run_audits(IS, ob_regulus);
    const auto report = bound_report(IS, *id, &audit, opts);
    write_text(ob_out, bound_report_csv(report));
    return 0;
  }

  if (run->parsed()) {
    const auto plan = load_plan(run_plan_path);
    auto rows = run_plan(plan);
    if (run_out.empty()) {
      for (const auto& row : rows) {
        std::cout << row.config_name << "," << row.point_count << "," << row.quantity << ","
                  << row.mode << "," << (row.ok() ? row.value : ("ERROR: " + row.error)) << "\n";
      }
    } else {
      emit_csv(rows, run_out);
    }
    const bool failures = std::any_of(rows.begin(), rows.end(),
                                      [](const ResultRow& r) { return !r.ok(); });
    return failures ? 3 : 0;
  }

  if (fit->parsed()) {
    const auto rows = load_rows_csv(fit_csv);
    const auto summary = fit_exponent(rows, fit_quantity, fit_gamma);
    nlohmann::json j;
    j["quantity"] = summary.quantity;
    j["slope"] = summary.slope;
    j["intercept"] = summary.intercept;
    j["residual"] = summary.residual;
    j["rows"] = summary.row_count;
    j["gamma"] = summary.gamma;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (plot->parsed()) {
    const auto rows = load_rows_csv(plot_csv);
    const auto summary = fit_exponent(rows, plot_quantity, plot_gamma);
    emit_svg_loglog(rows, summary, plot_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const chains::PlanInvalidError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
