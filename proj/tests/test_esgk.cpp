#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <random>
#include <set>
#include <unordered_set>

#include "chains/energy.hpp"
#include "chains/errors.hpp"
#include "chains/esgk.hpp"

using namespace chains;

namespace {

Rational rat(long n, long d = 1) { return Rational(BigInt(n), BigInt(d)); }

Rational random_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 9);
  return rat(num(rng), den(rng));
}

PlanePoint random_point(std::mt19937_64& rng) { return {random_rat(rng), random_rat(rng)}; }

}  // namespace

TEST_CASE("motion at height t maps p to q") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_point(rng);
    const auto q = random_point(rng);
    const auto l = rotation_line(p, q);
    const auto t = random_rat(rng);
    const auto motion = motion_at(l, t);
    CHECK(motion.apply(p) == q);
    // The motion is a genuine rotation: cos^2 + sin^2 = 1.
    CHECK(motion.cos_theta * motion.cos_theta + motion.sin_theta * motion.sin_theta == rat(1));
  }
}

TEST_CASE("rotation line examples") {
  // p = q gives the vertical line above p.
  const auto diag = rotation_line({rat(2), rat(3)}, {rat(2), rat(3)});
  CHECK(diag.geometry.direction == std::array<BigInt, 3>{0, 0, 1});
  CHECK(diag.geometry.base == SpacePoint{rat(2), rat(3), rat(0)});

  // The line passes through (midpoint, 0): the half-turn about the midpoint.
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_point(rng);
    auto q = random_point(rng);
    if (p == q) continue;
    const auto l = rotation_line(p, q);
    const SpacePoint mid{(p.x + q.x) / rat(2), (p.y + q.y) / rat(2), rat(0)};
    CHECK(l.geometry.contains(mid));
    const auto half_turn = motion_at(l, rat(0));
    CHECK(half_turn.cos_theta == rat(-1));
    CHECK(half_turn.sin_theta == rat(0));
  }
}

TEST_CASE("build_lines is injective on ordered pairs") {
  const auto P = gen_lattice(3);
  const auto with_diag = build_lines(P, true);
  const auto without = build_lines(P, false);
  CHECK(with_diag.size() == 81);
  CHECK(without.size() == 72);
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& l : with_diag) keys.insert({l.p.str(), l.q.str()});
  CHECK(keys.size() == with_diag.size());
  // Distinct pairs give distinct space lines.
  std::unordered_set<SpaceLine> geoms;
  for (const auto& l : with_diag) geoms.insert(l.geometry);
  CHECK(geoms.size() == with_diag.size());
}

TEST_CASE("two rotation lines meet iff the distances agree") {
  // The bridge between the planar statistics and the space arrangement,
  // checked exhaustively rather than assumed.
  const auto P = gen_lattice(3);
  const auto L = build_lines(P, true);
  for (const auto& l1 : L)
    for (const auto& l2 : L) {
      const bool same_dist = squared_distance(l1.p, l2.p) == squared_distance(l1.q, l2.q);
      CHECK(meets(l1, l2) == same_dist);
    }
}

TEST_CASE("translation pairs are exactly the parallel classes") {
  const auto P = gen_lattice(2);
  const auto L = build_lines(P, true);
  const auto IS = build_incidence(L);
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = i + 1; j < L.size(); ++j) {
      const auto cls = line_meet_classify(L[i].geometry, L[j].geometry);
      const bool same_class = IS.line_direction_class[i] == IS.line_direction_class[j];
      // q - p identical <=> the two motions differ by a translation <=>
      // parallel (or equal, excluded by injectivity) lines.
      const bool translation = (L[i].q.x - L[i].p.x == L[j].q.x - L[j].p.x) &&
                               (L[i].q.y - L[i].p.y == L[j].q.y - L[j].p.y);
      CHECK(same_class == translation);
      if (cls.kind == MeetKind::Parallel) CHECK(same_class);
    }
}

TEST_CASE("incidence structure counts agree with a pairwise rescan") {
  for (const auto& P : {gen_lattice(2), gen_random(4, 61, 5)}) {
    const auto L = build_lines(P, true);
    const auto IS = build_incidence(L);

    std::uint64_t intersect_pairs = 0;
    std::uint64_t parallel_pairs = 0;
    std::unordered_map<SpacePoint, std::set<int>> by_point;
    for (std::size_t i = 0; i < L.size(); ++i)
      for (std::size_t j = 0; j < L.size(); ++j) {
        if (i == j) continue;
        const auto cls = line_meet_classify(L[i].geometry, L[j].geometry);
        if (cls.kind == MeetKind::Intersect) {
          ++intersect_pairs;
          by_point[*cls.point].insert(static_cast<int>(i));
          by_point[*cls.point].insert(static_cast<int>(j));
        } else if (cls.kind == MeetKind::Parallel && i < j) {
          ++parallel_pairs;
        }
      }

    CHECK(IS.ordered_intersect_pairs == intersect_pairs);
    CHECK(IS.unordered_parallel_pairs == parallel_pairs);
    REQUIRE(IS.points.size() == by_point.size());
    for (std::size_t k = 0; k < IS.points.size(); ++k) {
      const auto it = by_point.find(IS.points[k]);
      REQUIRE(it != by_point.end());
      CHECK(std::set<int>(IS.point_lines[k].begin(), IS.point_lines[k].end()) == it->second);
    }
    // Points come out lexicographically sorted.
    const auto lex_less = [](const SpacePoint& a, const SpacePoint& b) {
      if (a.x != b.x) return a.x < b.x;
      if (a.y != b.y) return a.y < b.y;
      return a.z < b.z;
    };
    CHECK(std::is_sorted(IS.points.begin(), IS.points.end(), lex_less));

    // sum_p m_p (m_p - 1) counts the ordered intersecting pairs.
    std::uint64_t pair_sum = 0;
    for (std::size_t k = 0; k < IS.points.size(); ++k) {
      const std::uint64_t m = IS.multiplicity(static_cast<int>(k));
      pair_sum += m * (m - 1);
    }
    CHECK(pair_sum == IS.ordered_intersect_pairs);
  }
}

TEST_CASE("incidence build is worker independent") {
  const auto L = build_lines(gen_lattice(3), false);
  const auto base = build_incidence(L, {}, 1);
  for (int workers : {2, 7}) {
    const auto multi = build_incidence(L, {}, workers);
    CHECK(multi.points == base.points);
    CHECK(multi.point_lines == base.point_lines);
    CHECK(multi.ordered_intersect_pairs == base.ordered_intersect_pairs);
    CHECK(multi.unordered_parallel_pairs == base.unordered_parallel_pairs);
  }
}

TEST_CASE("rich families agree with recount oracles") {
  const auto L = build_lines(gen_lattice(3), true);
  const auto IS = build_incidence(L);
  const int n_lines = static_cast<int>(L.size());

  for (int t = 2; t <= 12; ++t) {
    std::set<int> expect_rich, expect_dyadic;
    for (std::size_t k = 0; k < IS.points.size(); ++k) {
      const int m = IS.multiplicity(static_cast<int>(k));
      if (m >= t) expect_rich.insert(static_cast<int>(k));
      if (m >= t && m < 2 * t) expect_dyadic.insert(static_cast<int>(k));
    }
    const auto rich = rich_points(IS, t);
    const auto dyadic = dyadic_rich_points(IS, t);
    CHECK(std::set<int>(rich.begin(), rich.end()) == expect_rich);
    CHECK(std::set<int>(dyadic.begin(), dyadic.end()) == expect_dyadic);
  }

  for (int k = 2; k <= 6; k += 2)
    for (int t = 1; t <= n_lines; t *= 2) {
      std::set<int> expect;
      for (int li = 0; li < n_lines; ++li) {
        int carried = 0;
        for (const auto& [pt, mult] : IS.line_points[li])
          if (mult >= k && mult < 2 * k) ++carried;
        if (carried >= t && carried < 2 * t) expect.insert(li);
      }
      const auto got = rich_lines_kt(IS, k, t);
      CHECK(std::set<int>(got.begin(), got.end()) == expect);
    }
}

TEST_CASE("nested families") {
  const auto L = build_lines(gen_lattice(3), true);
  const auto IS = build_incidence(L);

  std::vector<int> all_lines(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) all_lines[i] = static_cast<int>(i);

  SUBCASE("points_of over all lines matches dyadic rich points") {
    for (int t = 2; t <= 8; ++t) {
      const auto via_nested = points_of(IS, all_lines, t);
      const auto direct = dyadic_rich_points(IS, t);
      CHECK(via_nested == direct);
    }
  }

  SUBCASE("evaluate_nested composes the primitives") {
    const auto spec = NestedSpec::points_of(3, NestedSpec::all_lines());
    const auto res = evaluate_nested(IS, spec);
    CHECK(res.is_points);
    CHECK(res.indices == points_of(IS, all_lines, 3));

    const auto spec2 = NestedSpec::lines_of_points(2, NestedSpec::points_of(3, NestedSpec::all_lines()));
    const auto res2 = evaluate_nested(IS, spec2);
    CHECK(!res2.is_points);
    CHECK(res2.indices == lines_through_points(IS, res.indices, 2));

    const auto spec3 = NestedSpec::lines_of_lines(4, NestedSpec::all_lines());
    const auto res3 = evaluate_nested(IS, spec3);
    CHECK(res3.indices == lines_meeting_lines(IS, all_lines, 4));
  }

  SUBCASE("type mismatches are rejected") {
    // Points of a point set.
    auto bad = NestedSpec::points_of(2, NestedSpec::points_of(2, NestedSpec::all_lines()));
    CHECK_THROWS_AS(evaluate_nested(IS, bad), MalformedNestingError);
    // Lines-of-lines applied to points.
    auto bad2 = NestedSpec::lines_of_lines(2, NestedSpec::points_of(2, NestedSpec::all_lines()));
    CHECK_THROWS_AS(evaluate_nested(IS, bad2), MalformedNestingError);
    // Lines-of-points applied to lines.
    auto bad3 = NestedSpec::lines_of_points(2, NestedSpec::all_lines());
    CHECK_THROWS_AS(evaluate_nested(IS, bad3), MalformedNestingError);
  }
}

TEST_CASE("iterated families and the two counters") {
  const auto L = build_lines(gen_lattice(3), true);
  const auto IS = build_incidence(L);

  // One threshold: lines crossed by at least t others (transversally;
  // translation pairs share no point), recounted directly.
  for (int t : {1, 4, 16}) {
    std::set<int> expect;
    for (std::size_t i = 0; i < L.size(); ++i) {
      int met = 0;
      for (std::size_t j = 0; j < L.size(); ++j)
        if (i != j &&
            line_meet_classify(L[i].geometry, L[j].geometry).kind == MeetKind::Intersect)
          ++met;
      if (met >= t) expect.insert(static_cast<int>(i));
    }
    const auto fam = iterated_lines(IS, {t}, IteratedCounter::MeetingLines);
    CHECK(std::set<int>(fam.begin(), fam.end()) == expect);
  }

  // Nesting is monotone: raising an outer threshold shrinks the family,
  // and each family is a subset of the previous level.
  const auto inner = iterated_lines(IS, {4});
  const auto two_a = iterated_lines(IS, {2, 4});
  const auto two_b = iterated_lines(IS, {6, 4});
  CHECK(two_b.size() <= two_a.size());
  CHECK(std::includes(inner.begin(), inner.end(), two_a.begin(), two_a.end()));

  // The point counter never exceeds the line counter, and both are
  // monotone against the threshold.
  for (int t : {2, 6, 10}) {
    const auto by_lines = iterated_lines(IS, {t, 2}, IteratedCounter::MeetingLines);
    const auto by_points = iterated_lines(IS, {t, 2}, IteratedCounter::MeetingPoints);
    CHECK(std::includes(by_lines.begin(), by_lines.end(), by_points.begin(), by_points.end()));
  }
}

TEST_CASE("nu iterates") {
  const auto L = build_lines(gen_lattice(2), true);
  const auto IS = build_incidence(L);
  const auto nu = nu_iterates(IS, 3);

  // nu_1(l) recounts the lines crossing l.
  REQUIRE(nu.nu_line.count(1) == 1);
  for (std::size_t i = 0; i < L.size(); ++i) {
    BigInt met = 0;
    for (std::size_t j = 0; j < L.size(); ++j)
      if (i != j &&
          line_meet_classify(L[i].geometry, L[j].geometry).kind == MeetKind::Intersect)
        ++met;
    CHECK(nu.nu_line.at(1)[i] == met);
  }

  // nu_2 on points sums nu_1 over the lines through the point; the next
  // line iterate sums over its points excluding the line's own count.
  REQUIRE(nu.nu_point.count(2) == 1);
  for (std::size_t k = 0; k < IS.points.size(); ++k) {
    BigInt sum = 0;
    for (int li : IS.point_lines[k]) sum += nu.nu_line.at(1)[li];
    CHECK(nu.nu_point.at(2)[k] == sum);
  }
  REQUIRE(nu.nu_line.count(2) == 1);
  for (std::size_t i = 0; i < L.size(); ++i) {
    BigInt sum = 0;
    for (const auto& [pt, mult] : IS.line_points[i])
      sum += nu.nu_point.at(2)[pt] - nu.nu_line.at(1)[i];
    CHECK(nu.nu_line.at(2)[i] == sum);
  }
}

TEST_CASE("line-side energy equals the chain energy") {
  for (const auto& P : {gen_lattice(2), gen_random(4, 77, 4), gen_star_circles(2, {rat(1)})}) {
    for (int n : {1, 2, 3}) {
      for (ChainMode mode : {ChainMode::Repeats, ChainMode::Proper}) {
        CAPTURE(P.name);
        CAPTURE(n);
        CAPTURE(mode_name(mode));
        CHECK(energy_via_lines(P, n, mode) == energy_chain(P, n, mode));
      }
    }
  }
}

TEST_CASE("degeneracy audits") {
  const auto L = build_lines(gen_lattice(2), true);
  const auto IS = build_incidence(L);
  auto audit = run_audits(IS, true);

  CHECK(audit.line_count == 16);
  // Concurrency witness really carries that many lines.
  REQUIRE(audit.concurrency_witness.has_value());
  long through = 0;
  for (const auto& l : L)
    if (l.geometry.contains(*audit.concurrency_witness)) ++through;
  CHECK(through == audit.max_concurrent);
  // Plane witness really contains that many lines.
  REQUIRE(audit.plane_witness.has_value());
  long coplanar = 0;
  for (const auto& l : L)
    if (audit.plane_witness->contains(l.geometry)) ++coplanar;
  CHECK(coplanar == audit.max_coplanar);
  CHECK(audit.max_coplanar >= 2);

  CHECK(audit.regulus_computed);
  CHECK(audit.s_value() >= 4);  // ceil(sqrt(16))
  CHECK(audit.s_value() >= audit.max_coplanar);
  CHECK(audit.s_value() >= audit.max_concurrent);

  // An exhausted triple budget degrades to "not computed".
  DegeneracyAudit tight;
  tight.line_count = IS.line_count();
  audit_regulus(IS, tight, 1);
  CHECK(!tight.regulus_computed);
}

TEST_CASE("bound reports") {
  const auto L = build_lines(gen_lattice(3), true);
  const auto IS = build_incidence(L);
  const auto audit = run_audits(IS, false);

  SUBCASE("ids round trip") {
    for (BoundId id : {BoundId::GuthKatz, BoundId::tRichPoints, BoundId::RichLines,
                       BoundId::GenRichLines, BoundId::kRichLines, BoundId::IterativeLines,
                       BoundId::EnergyEstimate}) {
      CHECK(parse_bound_id(bound_id_name(id)) == id);
    }
    CHECK(!parse_bound_id("nonsense").has_value());
  }

  SUBCASE("audit-dependent bounds require an audit") {
    for (BoundId id :
         {BoundId::GuthKatz, BoundId::tRichPoints, BoundId::GenRichLines, BoundId::kRichLines}) {
      CHECK_THROWS_AS(bound_report(IS, id), MissingAuditError);
    }
    // An explicit s override substitutes for the audit.
    BoundOptions opts;
    opts.s_override = 10;
    const auto rep = bound_report(IS, BoundId::GuthKatz, nullptr, opts);
    CHECK(rep.s_used == 10);
    CHECK(rep.s_source == "override");
  }

  SUBCASE("every row has finite positive ratio") {
    for (BoundId id : {BoundId::GuthKatz, BoundId::tRichPoints, BoundId::RichLines,
                       BoundId::GenRichLines, BoundId::kRichLines, BoundId::IterativeLines,
                       BoundId::EnergyEstimate}) {
      const auto rep = bound_report(IS, id, &audit);
      CAPTURE(bound_id_name(id));
      CHECK(!rep.rows.empty());
      for (const auto& row : rep.rows) {
        CHECK(row.measured > 0.0);
        CHECK(row.expression > 0.0);
        CHECK(row.ratio > 0.0);
        CHECK(row.ratio == doctest::Approx(row.measured / row.expression));
      }
    }
  }

  SUBCASE("csv shape") {
    const auto rep = bound_report(IS, BoundId::RichLines, &audit);
    const auto csv = bound_report_csv(rep);
    CHECK(csv.rfind("bound_id", 0) == 0);
    CHECK(csv.find("measured,expression,ratio") != std::string::npos);
    CHECK(csv.find("RichLines") != std::string::npos);
  }
}

TEST_CASE("arrangement persistence") {
  const auto L = build_lines(gen_random(4, 9, 5), true);
  const auto text = arrangement_to_json(L);
  const auto back = arrangement_from_json(text);
  CHECK(back == L);

  const std::string path = "/tmp/chains_test_arrangement.json";
  save_arrangement(L, path);
  CHECK(load_arrangement(path) == L);
  std::remove(path.c_str());

  CHECK_THROWS_AS(arrangement_from_json("[]"), MalformedFileError);
  CHECK_THROWS_AS(arrangement_from_json("not json"), MalformedFileError);
}
