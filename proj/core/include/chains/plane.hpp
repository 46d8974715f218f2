#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "chains/rational.hpp"

namespace chains {

struct PlanePoint {
  Rational x;
  Rational y;

  friend bool operator==(const PlanePoint& a, const PlanePoint& b) = default;
  std::string str() const { return "(" + x.str() + "," + y.str() + ")"; }
};

/// Squared Euclidean distance between two planar points. Exact; zero iff
/// the points coincide. All distance comparisons in the library happen on
/// squared values, which are rational whenever the coordinates are.
using SquaredDistance = Rational;

inline SquaredDistance squared_distance(const PlanePoint& p, const PlanePoint& q) {
  const Rational dx = p.x - q.x;
  const Rational dy = p.y - q.y;
  return dx * dx + dy * dy;
}

inline std::size_t hash_value(const PlanePoint& p) {
  return hash_combine(hash_value(p.x), hash_value(p.y));
}

}  // namespace chains

template <>
struct std::hash<chains::PlanePoint> {
  std::size_t operator()(const chains::PlanePoint& p) const { return chains::hash_value(p); }
};
