#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chains/plane.hpp"

namespace chains {

/// An ordered planar point set. List order is the canonical indexing used
/// by every downstream count; points are pairwise distinct.
struct PointConfig {
  std::string name;
  std::vector<PlanePoint> points;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return points.size(); }
  friend bool operator==(const PointConfig& a, const PointConfig& b) = default;

  /// Throws DuplicatePointError if two points coincide.
  void validate() const;
};

/// The m x m integer grid {0..m-1}^2 in row-major order.
PointConfig gen_lattice(int m);

/// The origin plus count points on each concentric circle of the given
/// radii, generated by the tangent-half-angle parametrization
/// (r(1-t^2)/(1+t^2), r 2t/(1+t^2)) at t = 1..count. All coordinates are
/// rational, so circle membership is exact.
PointConfig gen_star_circles(int count_per_circle, const std::vector<Rational>& radii);

/// n distinct pseudorandom rational points, deterministic in (n, seed,
/// denominator_bound). Duplicates are resampled; throws
/// ExhaustedSamplingError if the coordinate space is too small.
PointConfig gen_random(int n, std::uint64_t seed, int denominator_bound);

void save_config(const PointConfig& c, const std::string& path);
PointConfig load_config(const std::string& path);

std::string config_to_json(const PointConfig& c);
PointConfig config_from_json(const std::string& text);

}  // namespace chains
