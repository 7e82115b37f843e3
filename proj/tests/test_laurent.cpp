#include <doctest.h>

#include "bifinf/laurent.hpp"

using namespace bifinf;

TEST_CASE("Laurent arithmetic keeps no zero coefficients") {
  const auto a = LaurentScalar::monomial(-2, 3) + LaurentScalar::monomial(1, Rational(1, 2));
  const auto b = LaurentScalar::monomial(-2, -3);
  const auto s = a + b;
  CHECK(s.terms().size() == 1);
  CHECK(*s.find(1) == Rational(1, 2));
  CHECK(s.find(-2) == nullptr);
  CHECK((a - a).is_zero());
  CHECK(s.min_exponent() == 1);
  CHECK_FALSE(LaurentScalar().min_exponent().has_value());
}

TEST_CASE("Laurent product and derivative") {
  const auto p = LaurentScalar::monomial(-1, 1) + LaurentScalar::monomial(1, 1);  // t^-1 + t
  const auto sq = p * p;                                                           // t^-2 + 2 + t^2
  CHECK(*sq.find(0) == 2);
  CHECK(*sq.find(-2) == 1);
  CHECK(*sq.find(2) == 1);
  const auto d = p.derivative();  // -t^-2 + 1
  CHECK(*d.find(-2) == -1);
  CHECK(*d.find(0) == 1);
  CHECK(LaurentScalar::constant(5).derivative().is_zero());
  CHECK(sq.truncated_below(0) == LaurentScalar::constant(2) + LaurentScalar::monomial(2, 1));
}

TEST_CASE("RationalArc validates its window and drops zero vectors") {
  const RationalArc xi(2, {{-1, {Rational(1, 2), 0}}, {0, {0, 0}}, {1, {0, -1}}}, {-6, 3});
  CHECK(xi.coeffs().size() == 2);
  CHECK(xi.coeffs().count(0) == 0);
  CHECK_THROWS_AS(RationalArc(2, {{4, {1, 0}}}, {-6, 3}), std::out_of_range);
  CHECK_THROWS_AS(RationalArc(2, {{1, {1, 0, 0}}}, {-6, 3}), std::invalid_argument);
  CHECK_NOTHROW(RationalArc(2, {{4, {0, 0}}}, {-6, 3}));
}

TEST_CASE("RationalArc components round-trip") {
  const RationalArc xi(2, {{-1, {Rational(1, 2), 0}}, {1, {0, -1}}}, {-6, 3});
  const auto comps = xi.components();
  CHECK(comps[0] == LaurentScalar::monomial(-1, Rational(1, 2)));
  CHECK(comps[1] == LaurentScalar::monomial(1, -1));
  const auto back = RationalArc::from_components(comps, {-6, 3});
  CHECK(back.coeffs() == xi.coeffs());
}

TEST_CASE("reparametrization scales a_k by lambda^k") {
  const RationalArc xi(2, {{-2, {1, 0}}, {3, {0, 1}}}, {-6, 3});
  const auto r = xi.reparametrized(Rational(-1, 2));
  CHECK(r.coeffs().at(-2)[0] == 4);
  CHECK(r.coeffs().at(3)[1] == Rational(-1, 8));
  CHECK_THROWS_AS((void)xi.reparametrized(0), std::invalid_argument);
}
