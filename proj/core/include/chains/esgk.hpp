#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chains/budgets.hpp"
#include "chains/census.hpp"
#include "chains/config.hpp"
#include "chains/space.hpp"

namespace chains {

/// A planar rotation (or half-turn) given by its center and exact
/// cosine/sine.
struct RigidMotion {
  PlanePoint center;
  Rational cos_theta;
  Rational sin_theta;

  PlanePoint apply(const PlanePoint& p) const;
};

/// The line in R^3 parametrizing all rotations taking source point p to
/// source point q: height t carries the rotation with cot(theta/2) = t.
/// For p = q this is the vertical line above p.
struct RotationLine {
  SpaceLine geometry;
  PlanePoint p;
  PlanePoint q;

  friend bool operator==(const RotationLine& a, const RotationLine& b) = default;
};

RotationLine rotation_line(const PlanePoint& p, const PlanePoint& q);

/// One line per ordered pair of points of P; diagonal pairs (p, p) are
/// included iff requested. The pair -> line map is injective.
std::vector<RotationLine> build_lines(const PointConfig& P, bool include_diagonal);

/// The rigid motion at height t on l. Maps l.p to l.q exactly for every
/// rational t.
RigidMotion motion_at(const RotationLine& l, const Rational& t);

/// True iff the two lines meet as point sets: Equal, Parallel (the
/// translation case) or Intersect. Equivalent to the planar distance
/// equality |p1-p2| = |q1-q2|; that equivalence is tested, not assumed.
bool meets(const RotationLine& l1, const RotationLine& l2);

/// The full exact intersection record of a line arrangement.
struct IncidenceStructure {
  std::vector<RotationLine> lines;

  /// Intersection points where >= 2 lines meet, sorted lexicographically.
  std::vector<SpacePoint> points;
  /// Sorted line indices through each point.
  std::vector<std::vector<int>> point_lines;
  /// Per line: (point index, multiplicity of that point), sorted by point.
  std::vector<std::vector<std::pair<int, int>>> line_points;
  /// Partition of line indices by primitive direction (the translation
  /// relation); classes are sorted, largest first is not guaranteed.
  std::vector<std::vector<int>> direction_classes;
  std::vector<int> line_direction_class;

  std::uint64_t ordered_intersect_pairs = 0;
  std::uint64_t unordered_parallel_pairs = 0;

  std::size_t line_count() const { return lines.size(); }
  /// Lines of L through a point, i.e. the multiplicity m_p.
  int multiplicity(int point_idx) const { return static_cast<int>(point_lines[point_idx].size()); }
};

IncidenceStructure build_incidence(const std::vector<RotationLine>& L, const Budgets& budgets = {},
                                   int workers = 1);

/// Points with at least t lines through them.
std::vector<int> rich_points(const IncidenceStructure& IS, int t);
/// Points with between t and 2t (half-open) lines through them.
std::vector<int> dyadic_rich_points(const IncidenceStructure& IS, int t);

/// Lines carrying between t and 2t points whose multiplicity lies in
/// [k, 2k).
std::vector<int> rich_lines_kt(const IncidenceStructure& IS, int k, int t);

/// Nested dyadic families over a line subset M (indices into IS.lines):
///   points_of(M, t)          — intersection points of lines of M with
///                              [t, 2t) lines of L through them;
///   lines_meeting_lines(M,s) — lines of L met by [s, 2s) lines of M;
///   lines_through_points(S,s)— lines of L containing [s, 2s) points of S.
std::vector<int> points_of(const IncidenceStructure& IS, const std::vector<int>& M, int t);
std::vector<int> lines_meeting_lines(const IncidenceStructure& IS, const std::vector<int>& M, int s);
std::vector<int> lines_through_points(const IncidenceStructure& IS, const std::vector<int>& point_set,
                                      int s);

/// A nesting expression over the families above. `evaluate_nested` checks
/// the composition types and throws MalformedNestingError on a mismatch
/// (e.g. taking points of a point set).
struct NestedSpec {
  enum class Kind { AllLines, PointsOf, LinesOfLines, LinesOfPoints };
  Kind kind = Kind::AllLines;
  int threshold = 0;
  std::shared_ptr<NestedSpec> child;

  static NestedSpec all_lines();
  static NestedSpec points_of(int t, NestedSpec child);
  static NestedSpec lines_of_lines(int s, NestedSpec child);
  static NestedSpec lines_of_points(int s, NestedSpec child);
};

struct NestedResult {
  bool is_points = false;
  std::vector<int> indices;
};

NestedResult evaluate_nested(const IncidenceStructure& IS, const NestedSpec& spec);

/// Which count "line l contains t lines of the family F" uses:
///   MeetingLines  — distinct lines of F meeting l;
///   MeetingPoints — distinct intersection points on l carrying a line of F.
/// The two differ when several family lines concur at one point.
enum class IteratedCounter { MeetingLines, MeetingPoints };

/// Iterated rich-line families: the innermost family keeps lines with at
/// least t_j intersections with other lines of L; each further threshold
/// keeps lines of L with at least t_i counts against the previous family.
std::vector<int> iterated_lines(const IncidenceStructure& IS, const std::vector<int>& thresholds,
                                IteratedCounter counter = IteratedCounter::MeetingLines);

struct NuIterates {
  /// nu_line[k][l] for k = 1..k_max; nu_line[1][l] = lines of L meeting l.
  std::map<int, std::vector<BigInt>> nu_line;
  /// nu_point[k][p] for k = 2..k_max; nu_point[k+1](p) = sum over lines
  /// through p of nu_line[k].
  std::map<int, std::vector<BigInt>> nu_point;
};

NuIterates nu_iterates(const IncidenceStructure& IS, int k_max);

/// Line-side energy count: (n+1)-tuples of rotation lines of P x P with
/// every consecutive pair meeting (Repeats allows repeating a line; Proper
/// requires consecutive lines distinct). Equals energy_chain exactly.
BigInt energy_via_lines(const PointConfig& P, int n, ChainMode mode, const Budgets& budgets = {});

struct DegeneracyAudit {
  std::size_t line_count = 0;
  long max_coplanar = 0;
  std::optional<SpacePlane> plane_witness;
  long max_concurrent = 0;
  std::optional<SpacePoint> concurrency_witness;
  bool regulus_computed = false;
  long max_regulus_transversals = 0;
  std::optional<std::array<int, 3>> regulus_witness;

  /// The smallest certified s admissible in the incidence bounds:
  /// max(plane, concurrency, regulus when computed, ceil(sqrt(|L|))).
  long s_value() const;
};

/// Largest number of lines lying in one plane, with a witness plane.
void audit_planes(const IncidenceStructure& IS, DegeneracyAudit& out);
/// Largest number of concurrent lines, from the point table.
void audit_concurrency(const IncidenceStructure& IS, DegeneracyAudit& out);
/// Max number of common transversals over pairwise-skew triples. Degrades
/// to "not computed" when the triple budget is exhausted.
void audit_regulus(const IncidenceStructure& IS, DegeneracyAudit& out,
                   std::uint64_t triple_budget);

DegeneracyAudit run_audits(const IncidenceStructure& IS, bool include_regulus = false,
                           std::uint64_t regulus_triple_budget = 2'000'000);

enum class BoundId {
  GuthKatz,
  tRichPoints,
  RichLines,
  GenRichLines,
  kRichLines,
  IterativeLines,
  EnergyEstimate,
};

std::optional<BoundId> parse_bound_id(const std::string& name);
std::string bound_id_name(BoundId id);

struct BoundRow {
  std::vector<std::pair<std::string, std::string>> params;
  double measured = 0.0;
  double expression = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  BoundId id = BoundId::GuthKatz;
  std::vector<BoundRow> rows;
  std::size_t line_count = 0;
  long s_used = 0;
  std::string s_source;
  std::vector<std::pair<std::string, std::string>> metadata;
};

struct BoundOptions {
  std::optional<long> s_override;
  /// Chain length for the EnergyEstimate report (odd).
  int energy_n = 3;
};

/// Both-sides numeric evaluation of one of the incidence bounds: the
/// measured quantity, the bound expression, and their ratio per sweep
/// row. Nothing is asserted; the hidden constants are unknown.
BoundReport bound_report(const IncidenceStructure& IS, BoundId id,
                         const DegeneracyAudit* audit = nullptr, const BoundOptions& opts = {});

std::string bound_report_csv(const BoundReport& report);

std::string arrangement_to_json(const std::vector<RotationLine>& lines);
std::vector<RotationLine> arrangement_from_json(const std::string& text);
void save_arrangement(const std::vector<RotationLine>& lines, const std::string& path);
std::vector<RotationLine> load_arrangement(const std::string& path);

}  // namespace chains
