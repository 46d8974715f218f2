#include "chains/space.hpp"

#include <utility>

namespace chains {

namespace {

// Scales a nonzero rational 3-vector to a primitive integer vector with
// positive first nonzero entry.
std::array<BigInt, 3> primitive_direction(const std::array<Rational, 3>& dir) {
  BigInt scale = 1;
  for (const auto& c : dir) {
    BigInt den = c.denominator();
    BigInt g;
    mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
    scale = scale / g * den;
  }
  std::array<BigInt, 3> v;
  for (int i = 0; i < 3; ++i) {
    const Rational scaled = dir[i] * Rational(scale);
    v[i] = scaled.numerator();  // denominator is 1 after scaling
  }
  BigInt g = 0;
  for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) throw DegenerateInputError("SpaceLine: zero direction");
  for (auto& c : v) c /= g;
  for (const auto& c : v) {
    if (c != 0) {
      if (c < 0) {
        for (auto& e : v) e = -e;
      }
      break;
    }
  }
  return v;
}

std::array<Rational, 3> cross(const std::array<Rational, 3>& a, const std::array<Rational, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::array<Rational, 3> to_rational(const std::array<BigInt, 3>& v) {
  return {Rational(v[0]), Rational(v[1]), Rational(v[2])};
}

bool is_zero(const std::array<Rational, 3>& v) {
  return v[0].is_zero() && v[1].is_zero() && v[2].is_zero();
}

Rational dot(const std::array<Rational, 3>& a, const std::array<Rational, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<Rational, 3> diff(const SpacePoint& a, const SpacePoint& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

}  // namespace

SpaceLine SpaceLine::through(const SpacePoint& point, const std::array<Rational, 3>& dir) {
  SpaceLine l;
  l.direction = primitive_direction(dir);
  int pivot = 0;
  while (l.direction[pivot] == 0) ++pivot;
  // Slide the point along the line until the pivot coordinate vanishes.
  const Rational t = -point[pivot] / Rational(l.direction[pivot]);
  for (int i = 0; i < 3; ++i) l.base[i] = point[i] + t * Rational(l.direction[i]);
  return l;
}

bool SpaceLine::contains(const SpacePoint& p) const {
  const auto d = diff(p, base);
  return is_zero(cross(d, to_rational(direction)));
}

MeetClass line_meet_classify(const SpaceLine& l1, const SpaceLine& l2) {
  if (l1 == l2) return {MeetKind::Equal, std::nullopt};
  const auto d1 = to_rational(l1.direction);
  const auto d2 = to_rational(l2.direction);
  const auto n = cross(d1, d2);
  const auto b = diff(l2.base, l1.base);
  if (is_zero(n)) {
    // Same primitive direction. Canonical forms differ, so the lines are
    // distinct parallels.
    return {MeetKind::Parallel, std::nullopt};
  }
  if (!dot(b, n).is_zero()) return {MeetKind::Skew, std::nullopt};
  // Coplanar and non-parallel: unique intersection. Solve
  // base1 + s d1 = base2 + t d2 via s = ((b x d2) . n) / |n|^2.
  const Rational s = dot(cross(b, d2), n) / dot(n, n);
  SpacePoint p;
  for (int i = 0; i < 3; ++i) p[i] = l1.base[i] + s * d1[i];
  return {MeetKind::Intersect, p};
}

SpacePlane SpacePlane::from_normal_and_point(const std::array<Rational, 3>& normal, const SpacePoint& point) {
  if (is_zero(normal)) throw DegenerateInputError("SpacePlane: zero normal");
  const Rational d = -dot(normal, {point.x, point.y, point.z});
  // Clear denominators over all four coefficients, then reduce.
  BigInt scale = 1;
  const std::array<Rational, 4> raw = {normal[0], normal[1], normal[2], d};
  for (const auto& c : raw) {
    BigInt den = c.denominator();
    BigInt g;
    mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
    scale = scale / g * den;
  }
  SpacePlane pl;
  for (int i = 0; i < 4; ++i) pl.coefficients[i] = (raw[i] * Rational(scale)).numerator();
  BigInt g = 0;
  for (const auto& c : pl.coefficients) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  for (auto& c : pl.coefficients) c /= g;
  for (int i = 0; i < 3; ++i) {
    if (pl.coefficients[i] != 0) {
      if (pl.coefficients[i] < 0) {
        for (auto& c : pl.coefficients) c = -c;
      }
      break;
    }
  }
  return pl;
}

bool SpacePlane::contains(const SpacePoint& p) const {
  Rational acc = Rational(coefficients[3]);
  acc += Rational(coefficients[0]) * p.x;
  acc += Rational(coefficients[1]) * p.y;
  acc += Rational(coefficients[2]) * p.z;
  return acc.is_zero();
}

bool SpacePlane::contains(const SpaceLine& l) const {
  if (!contains(l.base)) return false;
  Rational acc = 0;
  for (int i = 0; i < 3; ++i) acc += Rational(coefficients[i]) * Rational(l.direction[i]);
  return acc.is_zero();
}

SpacePlane plane_through(const SpaceLine& l1, const SpaceLine& l2) {
  const auto cls = line_meet_classify(l1, l2);
  if (cls.kind == MeetKind::Equal) throw DegenerateInputError("plane_through: lines are equal");
  if (cls.kind == MeetKind::Skew) throw SkewInputError("plane_through: lines are skew");
  const auto d1 = to_rational(l1.direction);
  std::array<Rational, 3> normal;
  if (cls.kind == MeetKind::Parallel) {
    normal = cross(d1, diff(l2.base, l1.base));
  } else {
    normal = cross(d1, to_rational(l2.direction));
  }
  return SpacePlane::from_normal_and_point(normal, l1.base);
}

}  // namespace chains
