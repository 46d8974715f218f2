#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "chains/rational.hpp"

namespace chains {

struct SpacePoint {
  Rational x, y, z;

  const Rational& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  Rational& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend bool operator==(const SpacePoint& a, const SpacePoint& b) = default;
  std::string str() const { return "(" + x.str() + "," + y.str() + "," + z.str() + ")"; }
};

inline std::size_t hash_value(const SpacePoint& p) {
  return hash_combine(hash_combine(hash_value(p.x), hash_value(p.y)), hash_value(p.z));
}

/// A line in R^3 in canonical form: primitive integer direction (gcd 1,
/// first nonzero entry positive) and the base point whose coordinate along
/// the first nonzero direction component is zero. Two lines are equal as
/// point sets iff their canonical forms are componentwise equal.
struct SpaceLine {
  SpacePoint base;
  std::array<BigInt, 3> direction;

  /// Canonicalizes from any point on the line and any nonzero rational
  /// direction vector.
  static SpaceLine through(const SpacePoint& point, const std::array<Rational, 3>& dir);

  bool contains(const SpacePoint& p) const;

  friend bool operator==(const SpaceLine& a, const SpaceLine& b) = default;
};

inline std::size_t hash_value(const SpaceLine& l) {
  std::size_t h = hash_value(l.base);
  for (const auto& d : l.direction) h = hash_combine(h, hash_value(d));
  return h;
}

/// Plane a x + b y + c z + d = 0 with primitive integer coefficients and
/// the first nonzero entry of (a,b,c) positive.
struct SpacePlane {
  std::array<BigInt, 4> coefficients;

  static SpacePlane from_normal_and_point(const std::array<Rational, 3>& normal, const SpacePoint& point);

  bool contains(const SpacePoint& p) const;
  bool contains(const SpaceLine& l) const;

  friend bool operator==(const SpacePlane& a, const SpacePlane& b) = default;
};

inline std::size_t hash_value(const SpacePlane& pl) {
  std::size_t h = 0;
  for (const auto& c : pl.coefficients) h = hash_combine(h, hash_value(c));
  return h;
}

enum class MeetKind { Equal, Parallel, Intersect, Skew };

struct MeetClass {
  MeetKind kind;
  std::optional<SpacePoint> point;  // present iff kind == Intersect
};

/// Exact classification of the relative position of two canonical lines.
MeetClass line_meet_classify(const SpaceLine& l1, const SpaceLine& l2);

/// The unique canonical plane containing two coplanar distinct lines.
/// Throws SkewInputError / DegenerateInputError otherwise.
SpacePlane plane_through(const SpaceLine& l1, const SpaceLine& l2);

}  // namespace chains

template <>
struct std::hash<chains::SpacePoint> {
  std::size_t operator()(const chains::SpacePoint& p) const { return chains::hash_value(p); }
};

template <>
struct std::hash<chains::SpaceLine> {
  std::size_t operator()(const chains::SpaceLine& l) const { return chains::hash_value(l); }
};

template <>
struct std::hash<chains::SpacePlane> {
  std::size_t operator()(const chains::SpacePlane& p) const { return chains::hash_value(p); }
};
