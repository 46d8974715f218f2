#include <doctest.h>

#include <random>
#include <unordered_set>

#include "chains/rational.hpp"

using namespace chains;

namespace {

// Random rational with numerator/denominator up to 2^64.
Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> bits;
  BigInt num(std::to_string(bits(rng)));
  if (bits(rng) % 2) num = -num;
  BigInt den(std::to_string(bits(rng) | 1));  // nonzero
  return Rational(num, den);
}

}  // namespace

TEST_CASE("canonical reduced form") {
  const Rational half(BigInt(2), BigInt(4));
  CHECK(half.numerator() == 1);
  CHECK(half.denominator() == 2);

  const Rational neg(BigInt(3), BigInt(-6));
  CHECK(neg.numerator() == -1);
  CHECK(neg.denominator() == 2);

  CHECK(Rational(BigInt(0), BigInt(7)).str() == "0");
}

TEST_CASE("parse and round trip") {
  CHECK(Rational::parse("2/4") == Rational(BigInt(1), BigInt(2)));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational::parse("13/36").str() == "13/36");
  CHECK_THROWS_AS(Rational::parse(""), MalformedFileError);
  CHECK_THROWS_AS(Rational::parse("1/0"), MalformedFileError);
  CHECK_THROWS_AS(Rational::parse("x/3"), MalformedFileError);
}

TEST_CASE("field axioms on random rationals") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const Rational a = random_rational(rng);
    const Rational b = random_rational(rng);
    const Rational c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK(a / b * b == a);
  }
}

TEST_CASE("hash agrees with equality") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Rational a = random_rational(rng);
    const Rational same(a.numerator() * 3, a.denominator() * 3);
    CHECK(a == same);
    CHECK(hash_value(a) == hash_value(same));
  }
  std::unordered_set<Rational> set;
  set.insert(Rational(BigInt(1), BigInt(2)));
  set.insert(Rational(BigInt(2), BigInt(4)));
  CHECK(set.size() == 1);
}

TEST_CASE("ordering matches value") {
  CHECK(Rational(BigInt(1), BigInt(3)) < Rational(BigInt(1), BigInt(2)));
  CHECK(Rational(-1) < Rational(0));
  CHECK(Rational(BigInt(7), BigInt(2)) > Rational(3));
}
