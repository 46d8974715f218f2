#include <doctest.h>

#include <cstdio>
#include <set>
#include <string>

#include "chains/config.hpp"
#include "chains/errors.hpp"

using namespace chains;

namespace {
Rational rat(long n, long d = 1) { return Rational(BigInt(n), BigInt(d)); }
}  // namespace

TEST_CASE("lattice generator") {
  const auto l2 = gen_lattice(2);
  REQUIRE(l2.size() == 4);
  CHECK(l2.points[0] == PlanePoint{rat(0), rat(0)});
  CHECK(l2.points[1] == PlanePoint{rat(1), rat(0)});
  CHECK(l2.points[2] == PlanePoint{rat(0), rat(1)});
  CHECK(l2.points[3] == PlanePoint{rat(1), rat(1)});
  l2.validate();

  const auto l5 = gen_lattice(5);
  CHECK(l5.size() == 25);
  l5.validate();
}

TEST_CASE("star circle points lie exactly on their circles") {
  const auto cfg = gen_star_circles(4, {rat(1), rat(2), rat(5, 2)});
  REQUIRE(cfg.size() == 1 + 3 * 4);
  CHECK(cfg.points[0] == PlanePoint{rat(0), rat(0)});
  cfg.validate();

  // Every non-origin point satisfies x^2 + y^2 = r^2 for its circle.
  std::size_t idx = 1;
  for (const Rational& r : {rat(1), rat(2), rat(5, 2)}) {
    for (int t = 1; t <= 4; ++t, ++idx) {
      const auto& p = cfg.points[idx];
      CHECK(p.x * p.x + p.y * p.y == r * r);
    }
  }

  // Spot check: t = 1 on r = 1 gives (0, 1); t = 2 gives (-3/5, 4/5).
  CHECK(cfg.points[1] == PlanePoint{rat(0), rat(1)});
  CHECK(cfg.points[2] == PlanePoint{rat(-3, 5), rat(4, 5)});
}

TEST_CASE("random generator is deterministic and duplicate-free") {
  const auto a = gen_random(30, 99, 10);
  const auto b = gen_random(30, 99, 10);
  CHECK(a.points == b.points);
  CHECK(a.seed == 99);
  a.validate();

  const auto c = gen_random(30, 100, 10);
  CHECK(a.points != c.points);

  // Tiny coordinate space with more points than it holds must give up.
  CHECK_THROWS_AS(gen_random(50, 1, 1), ExhaustedSamplingError);
}

TEST_CASE("duplicate detection") {
  PointConfig cfg;
  cfg.name = "dup";
  cfg.points = {{rat(0), rat(0)}, {rat(1), rat(2)}, {rat(2, 2), rat(4, 2)}};
  CHECK_THROWS_AS(cfg.validate(), DuplicatePointError);
}

TEST_CASE("json round trip preserves exact coordinates") {
  PointConfig cfg;
  cfg.name = "frac";
  cfg.seed = 7;
  cfg.points = {{rat(1, 3), rat(-2, 7)}, {rat(0), rat(5)}};
  const auto text = config_to_json(cfg);
  const auto back = config_from_json(text);
  CHECK(back == cfg);

  const std::string path = "/tmp/chains_test_config.json";
  save_config(cfg, path);
  CHECK(load_config(path) == cfg);
  std::remove(path.c_str());
}

TEST_CASE("malformed point files are rejected") {
  CHECK_THROWS_AS(config_from_json("not json"), MalformedFileError);
  CHECK_THROWS_AS(config_from_json(R"({"name":"x"})"), MalformedFileError);
  CHECK_THROWS_AS(config_from_json(R"({"name":"x","points":[["1/0","2"]]})"), MalformedFileError);
  CHECK_THROWS_AS(config_from_json(R"({"name":"x","points":[["1"]]})"), MalformedFileError);
}
