#include "chains/config.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "chains/errors.hpp"

namespace chains {

void PointConfig::validate() const {
  std::unordered_set<PlanePoint> seen;
  for (const auto& p : points) {
    if (!seen.insert(p).second) {
      throw DuplicatePointError("duplicate point " + p.str() + " in config '" + name + "'");
    }
  }
}

PointConfig gen_lattice(int m) {
  if (m < 1) throw PlanInvalidError("gen_lattice: m must be >= 1");
  PointConfig c;
  c.name = "lattice-" + std::to_string(m);
  c.points.reserve(static_cast<std::size_t>(m) * m);
  for (int y = 0; y < m; ++y) {
    for (int x = 0; x < m; ++x) {
      c.points.push_back({Rational(x), Rational(y)});
    }
  }
  return c;
}

PointConfig gen_star_circles(int count_per_circle, const std::vector<Rational>& radii) {
  if (count_per_circle < 1) throw PlanInvalidError("gen_star_circles: count must be >= 1");
  for (const auto& r : radii) {
    if (r.sign() <= 0) throw PlanInvalidError("gen_star_circles: radii must be positive");
  }
  PointConfig c;
  c.name = "star-" + std::to_string(count_per_circle) + "x" + std::to_string(radii.size());
  c.points.push_back({Rational(0), Rational(0)});
  for (const auto& r : radii) {
    for (int t = 1; t <= count_per_circle; ++t) {
      const Rational tt(t);
      const Rational denom = Rational(1) + tt * tt;
      c.points.push_back({r * (Rational(1) - tt * tt) / denom, r * (Rational(2) * tt) / denom});
    }
  }
  c.validate();
  return c;
}

PointConfig gen_random(int n, std::uint64_t seed, int denominator_bound) {
  if (n < 1) throw PlanInvalidError("gen_random: n must be >= 1");
  if (denominator_bound < 1) throw PlanInvalidError("gen_random: denominator_bound must be >= 1");
  std::mt19937_64 rng(seed);
  const std::int64_t num_bound =
      static_cast<std::int64_t>(denominator_bound) * denominator_bound;
  std::uniform_int_distribution<std::int64_t> num_dist(-num_bound, num_bound);
  std::uniform_int_distribution<std::int64_t> den_dist(1, denominator_bound);

  PointConfig c;
  c.name = "random-" + std::to_string(n) + "-s" + std::to_string(seed);
  c.seed = seed;
  std::unordered_set<PlanePoint> seen;
  const long max_attempts = 1000L * n + 1000;
  long attempts = 0;
  while (static_cast<int>(c.points.size()) < n) {
    if (++attempts > max_attempts) {
      throw ExhaustedSamplingError("gen_random: cannot find " + std::to_string(n) +
                                   " distinct points with denominator bound " +
                                   std::to_string(denominator_bound));
    }
    PlanePoint p{Rational(BigInt(num_dist(rng)), BigInt(den_dist(rng))),
                 Rational(BigInt(num_dist(rng)), BigInt(den_dist(rng)))};
    if (seen.insert(p).second) c.points.push_back(p);
  }
  return c;
}

std::string config_to_json(const PointConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  if (c.seed) {
    j["seed"] = *c.seed;
  } else {
    j["seed"] = nullptr;
  }
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) pts.push_back({p.x.str(), p.y.str()});
  j["points"] = pts;
  return j.dump();
}

PointConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedFileError(std::string("config parse error: ") + e.what());
  }
  PointConfig c;
  if (!j.contains("name") || !j["name"].is_string()) throw MalformedFileError("config: missing string field 'name'");
  c.name = j["name"].get<std::string>();
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
      throw MalformedFileError("config: field 'seed' must be an integer or null");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("points") || !j["points"].is_array()) throw MalformedFileError("config: missing array field 'points'");
  std::size_t idx = 0;
  for (const auto& entry : j["points"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_string())
      throw MalformedFileError("config: points[" + std::to_string(idx) + "] must be [\"x\",\"y\"]");
    c.points.push_back({Rational::parse(entry[0].get<std::string>()),
                        Rational::parse(entry[1].get<std::string>())});
    ++idx;
  }
  c.validate();
  return c;
}

void save_config(const PointConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << config_to_json(c) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

PointConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace chains
