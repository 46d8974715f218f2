#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "chains/errors.hpp"

namespace chains {

using BigInt = mpz_class;

/// Arbitrary-precision rational, always held in canonical reduced form
/// (denominator > 0, gcd(|num|, den) = 1). Equality, ordering and hashing
/// agree with the mathematical value.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}                       // NOLINT(google-explicit-constructor)
  Rational(const BigInt& n) : v_(n) {}              // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) : v_(num, den) {
    if (den == 0) throw DegenerateInputError("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "a" or "a/b". Canonicalizes, so "2/4" loads as 1/2.
  static Rational parse(const std::string& s);

  const mpq_class& raw() const { return v_; }
  BigInt numerator() const { return v_.get_num(); }
  BigInt denominator() const { return v_.get_den(); }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }

  /// "a" when integral, "a/b" otherwise.
  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DegenerateInputError("Rational: division by zero");
    return Rational(mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;  // invariant: canonical
};

inline std::size_t hash_bigint(const mpz_srcptr z, std::size_t seed = 0xcbf29ce484222325ULL) {
  std::size_t h = seed;
  h = h * 0x100000001b3ULL ^ static_cast<std::size_t>(mpz_sgn(z) + 1);
  const std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    h = h * 0x100000001b3ULL ^ static_cast<std::size_t>(mpz_getlimbn(z, i));
  }
  return h;
}

inline std::size_t hash_value(const BigInt& z) { return hash_bigint(z.get_mpz_t()); }

inline std::size_t hash_value(const Rational& r) {
  std::size_t h = hash_bigint(r.raw().get_num_mpz_t());
  return hash_bigint(r.raw().get_den_mpz_t(), h);
}

inline std::size_t hash_combine(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

inline Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw MalformedFileError("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den <= 0) throw MalformedFileError("rational literal with non-positive denominator: " + s);
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw MalformedFileError("bad rational literal: " + s);
  }
}

}  // namespace chains

template <>
struct std::hash<chains::Rational> {
  std::size_t operator()(const chains::Rational& r) const { return chains::hash_value(r); }
};

template <>
struct std::hash<chains::BigInt> {
  std::size_t operator()(const chains::BigInt& z) const { return chains::hash_value(z); }
};
