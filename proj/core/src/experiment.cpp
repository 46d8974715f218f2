#include "chains/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chains/energy.hpp"
#include "chains/errors.hpp"

namespace chains {

std::string QuantitySpec::id() const {
  switch (kind) {
    case Kind::DeltaN: return "delta_" + std::to_string(n);
    case Kind::EnergyN: return "energy_" + std::to_string(n);
    case Kind::DeltaGraph: return "delta_graph_m" + std::to_string(graph ? graph->vertex_count : 0);
    case Kind::Bound: return "bound_" + (bound ? bound_id_name(*bound) : std::string("?"));
  }
  return "?";
}

PointConfig GeneratorSpec::generate(int size) const {
  switch (kind) {
    case Kind::Lattice: return gen_lattice(size);
    case Kind::StarCircles: return gen_star_circles(size, radii);
    case Kind::Random: return gen_random(size, seed + static_cast<std::uint64_t>(size), denominator_bound);
  }
  throw PlanInvalidError("unknown generator kind");
}

void ExperimentPlan::validate() const {
  if (quantities.empty()) throw PlanInvalidError("plan: empty quantity list");
  if (sizes.empty()) throw PlanInvalidError("plan: empty size ladder");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw PlanInvalidError("plan: size ladder must be strictly increasing");
  }
  if (modes.empty()) throw PlanInvalidError("plan: empty mode list");
  if (generator.kind == GeneratorSpec::Kind::StarCircles && generator.radii.empty())
    throw PlanInvalidError("plan: star generator needs radii");
  for (const auto& q : quantities) {
    if ((q.kind == QuantitySpec::Kind::DeltaN || q.kind == QuantitySpec::Kind::EnergyN) && q.n < 1)
      throw PlanInvalidError("plan: chain quantities need n >= 1");
    if (q.kind == QuantitySpec::Kind::DeltaGraph && !q.graph)
      throw PlanInvalidError("plan: delta_graph quantity needs a graph");
    if (q.kind == QuantitySpec::Kind::Bound && !q.bound)
      throw PlanInvalidError("plan: bound quantity needs a bound id");
  }
}

ExperimentPlan plan_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PlanInvalidError(std::string("plan parse error: ") + e.what());
  }
  ExperimentPlan plan;
  plan.name = j.value("name", std::string("plan"));
  if (!j.contains("generator") || !j["generator"].is_object())
    throw PlanInvalidError("plan: missing object field 'generator'");
  const auto& g = j["generator"];
  const std::string kind = g.value("kind", std::string());
  if (kind == "lattice") {
    plan.generator.kind = GeneratorSpec::Kind::Lattice;
  } else if (kind == "star") {
    plan.generator.kind = GeneratorSpec::Kind::StarCircles;
    if (g.contains("radii")) {
      for (const auto& r : g["radii"]) plan.generator.radii.push_back(Rational::parse(r.get<std::string>()));
    }
  } else if (kind == "random") {
    plan.generator.kind = GeneratorSpec::Kind::Random;
    plan.generator.seed = g.value("seed", std::uint64_t{1});
    plan.generator.denominator_bound = g.value("denominator_bound", 100);
  } else {
    throw PlanInvalidError("plan: generator kind must be lattice|star|random");
  }
  if (!j.contains("sizes") || !j["sizes"].is_array()) throw PlanInvalidError("plan: missing 'sizes'");
  for (const auto& s : j["sizes"]) plan.sizes.push_back(s.get<int>());
  if (!j.contains("quantities") || !j["quantities"].is_array())
    throw PlanInvalidError("plan: missing 'quantities'");
  for (const auto& q : j["quantities"]) {
    QuantitySpec spec;
    const std::string qid = q.value("id", std::string());
    if (qid == "delta_n") {
      spec.kind = QuantitySpec::Kind::DeltaN;
      spec.n = q.value("n", 1);
    } else if (qid == "energy_n") {
      spec.kind = QuantitySpec::Kind::EnergyN;
      spec.n = q.value("n", 1);
    } else if (qid == "delta_graph") {
      spec.kind = QuantitySpec::Kind::DeltaGraph;
      if (!q.contains("graph")) throw PlanInvalidError("plan: delta_graph needs 'graph'");
      spec.graph = graph_from_json(q["graph"].dump());
    } else if (qid == "bound") {
      spec.kind = QuantitySpec::Kind::Bound;
      const auto id = parse_bound_id(q.value("bound_id", std::string()));
      if (!id) throw PlanInvalidError("plan: unknown bound_id");
      spec.bound = *id;
    } else {
      throw PlanInvalidError("plan: unknown quantity id '" + qid + "'");
    }
    plan.quantities.push_back(std::move(spec));
  }
  if (j.contains("modes")) {
    for (const auto& m : j["modes"]) {
      const std::string name = m.get<std::string>();
      if (name == "repeats") {
        plan.modes.push_back(ChainMode::Repeats);
      } else if (name == "proper") {
        plan.modes.push_back(ChainMode::Proper);
      } else {
        throw PlanInvalidError("plan: mode must be repeats|proper");
      }
    }
  } else {
    plan.modes = {ChainMode::Repeats};
  }
  if (j.contains("budgets")) {
    const auto& b = j["budgets"];
    plan.budgets.signature_limit = b.value("signature_limit", plan.budgets.signature_limit);
    plan.budgets.assignment_limit = b.value("assignment_limit", plan.budgets.assignment_limit);
    plan.budgets.bruteforce_limit = b.value("bruteforce_limit", plan.budgets.bruteforce_limit);
    plan.budgets.state_limit = b.value("state_limit", plan.budgets.state_limit);
    plan.budgets.line_limit = b.value("line_limit", plan.budgets.line_limit);
  }
  plan.workers = j.value("workers", 1);
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

namespace {

std::string evaluate_cell(const PointConfig& config, const QuantitySpec& q, ChainMode mode,
                          const Budgets& budgets, int workers) {
  switch (q.kind) {
    case QuantitySpec::Kind::DeltaN:
      return delta_n_census(config, q.n, mode, budgets, workers).cardinality.get_str();
    case QuantitySpec::Kind::EnergyN:
      return energy_chain(config, q.n, mode, budgets, workers).get_str();
    case QuantitySpec::Kind::DeltaGraph:
      return delta_graph_census(config, *q.graph, mode, budgets).cardinality.get_str();
    case QuantitySpec::Kind::Bound: {
      const auto lines = build_lines(config, /*include_diagonal=*/true);
      const auto IS = build_incidence(lines, budgets, workers);
      const auto audit = run_audits(IS);
      const auto report = bound_report(IS, *q.bound, &audit);
      // The scalar cell value is the row count; the full report belongs
      // to the `lines bounds` CLI path.
      return std::to_string(report.rows.size());
    }
  }
  throw PlanInvalidError("unknown quantity kind");
}

}  // namespace

std::vector<ResultRow> run_plan(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<ResultRow> rows;
  for (const int size : plan.sizes) {
    PointConfig config;
    std::string gen_error;
    try {
      config = plan.generator.generate(size);
    } catch (const std::exception& e) {
      gen_error = e.what();
    }
    for (const auto& q : plan.quantities) {
      for (const auto mode : plan.modes) {
        ResultRow row;
        row.config_name = gen_error.empty() ? config.name : ("size-" + std::to_string(size));
        row.point_count = gen_error.empty() ? config.size() : 0;
        row.quantity = q.id();
        row.mode = mode_name(mode);
        if (!gen_error.empty()) {
          row.error = gen_error;
          rows.push_back(std::move(row));
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
          row.value = evaluate_cell(config, q, mode, plan.budgets, plan.workers);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        rows.push_back(std::move(row));
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.config_name != b.config_name) return a.config_name < b.config_name;
    if (a.point_count != b.point_count) return a.point_count < b.point_count;
    if (a.quantity != b.quantity) return a.quantity < b.quantity;
    return a.mode < b.mode;
  });
  return rows;
}

FitSummary fit_exponent(const std::vector<ResultRow>& rows, const std::string& quantity,
                        double gamma) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows) {
    if (row.quantity != quantity || !row.ok() || row.point_count < 2) continue;
    const double v = std::stod(row.value);
    if (v <= 0) continue;
    const double x = std::log(static_cast<double>(row.point_count));
    double y = std::log(v);
    if (gamma != 0.0) y += gamma * std::log(x);
    pts.push_back({x, y});
  }
  if (pts.size() < 3)
    throw InsufficientDataError("fit_exponent: need >= 3 positive rows for '" + quantity + "'");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw InsufficientDataError("fit_exponent: degenerate x values");
  FitSummary fit;
  fit.quantity = quantity;
  fit.gamma = gamma;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.row_count = static_cast<int>(pts.size());
  return fit;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "config,size,quantity,mode,value,wall_ms,error\n";
  for (const auto& row : rows) {
    out << csv_escape(row.config_name) << "," << row.point_count << "," << row.quantity << ","
        << row.mode << "," << row.value << "," << row.wall_ms << "," << csv_escape(row.error)
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<ResultRow> load_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<ResultRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    // Fields are simple enough that a split on unquoted commas suffices.
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 7) throw MalformedFileError("rows csv: expected 7 fields, line: " + line);
    ResultRow row;
    row.config_name = fields[0];
    row.point_count = static_cast<std::size_t>(std::stoull(fields[1]));
    row.quantity = fields[2];
    row.mode = fields[3];
    row.value = fields[4];
    row.wall_ms = std::stod(fields[5]);
    row.error = fields[6];
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_svg_loglog(const std::vector<ResultRow>& rows, const FitSummary& fit,
                     const std::string& path) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows) {
    if (row.quantity != fit.quantity || !row.ok()) continue;
    const double v = std::stod(row.value);
    if (v <= 0 || row.point_count < 2) continue;
    pts.push_back({std::log(static_cast<double>(row.point_count)), std::log(v)});
  }
  if (pts.empty()) throw InsufficientDataError("emit_svg_loglog: no plottable rows");

  double xmin = pts[0].first, xmax = pts[0].first, ymin = pts[0].second, ymax = pts[0].second;
  for (const auto& [x, y] : pts) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double W = 640, H = 480, margin = 48;
  auto X = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (W - 2 * margin); };
  auto Y = [&](double y) { return H - margin - (y - ymin) / (ymax - ymin) * (H - 2 * margin); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "  <rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "  <line x1=\"" << margin << "\" y1=\"" << H - margin << "\" x2=\"" << W - margin
      << "\" y2=\"" << H - margin << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << H - margin << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << X(xmin) << "\" y1=\"" << Y(fit.slope * xmin + fit.intercept)
      << "\" x2=\"" << X(xmax) << "\" y2=\"" << Y(fit.slope * xmax + fit.intercept)
      << "\" stroke=\"#c33\" stroke-width=\"1.5\"/>\n";
  for (const auto& [x, y] : pts) {
    out << "  <circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"3.5\" fill=\"#369\"/>\n";
  }
  std::ostringstream label;
  label << fit.quantity << ": slope " << fit.slope << ", residual " << fit.residual;
  out << "  <text x=\"" << margin + 6 << "\" y=\"" << margin - 12
      << "\" font-family=\"sans-serif\" font-size=\"13\">" << label.str() << "</text>\n";
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace chains
