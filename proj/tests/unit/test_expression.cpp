#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hysim/expression.hpp"
#include "hysim/observables.hpp"
#include "oracles.hpp"

using namespace hysim;
using namespace hysim::testing;

TEST_CASE("simple products and powers parse") {
  const Dims d{2, 2};
  const auto poly = parse_polynomial("x1*p1", d);
  CHECK(poly.total_degree() == 2);
  CHECK(poly == Polynomial<Rational>::variable(d, cl_x(d, 0)) *
                    Polynomial<Rational>::variable(d, cl_p(d, 0)));

  const auto cube = parse_polynomial("(x1 + 1)^3", d);
  const auto x1 = Polynomial<Rational>::variable(d, cl_x(d, 0));
  const auto one = Polynomial<Rational>::constant(d, 1);
  CHECK(cube == (x1 + one) * (x1 + one) * (x1 + one));
}

TEST_CASE("the sigma_z quadratic form parses with rational halves") {
  const Dims d{0, 2};
  const auto poly = parse_polynomial("(X1^2+P1^2)/2 - (X2^2+P2^2)/2", d);
  const auto expected_double = quadratic_form(HermitianOperator::pauli_z());
  CHECK((to_double(poly) - expected_double).pruned(1e-15).is_zero());
  CHECK(classify(poly).phase_class == PhaseClass::QmQuadratic);
}

TEST_CASE("rational literals stay exact") {
  const Dims d{1, 0};
  const auto poly = parse_polynomial("2/3 * x1 - 1/6*x1", d);
  REQUIRE(poly.term_count() == 1);
  CHECK(poly.terms().begin()->second == rational(1, 2));
}

TEST_CASE("unary signs and nested parentheses") {
  const Dims d{1, 1};
  CHECK(parse_polynomial("-(x1 - X1)", d) ==
        parse_polynomial("X1 - x1", d));
  CHECK(parse_polynomial("--x1", d) == parse_polynomial("x1", d));
  CHECK(parse_polynomial("+x1", d) == parse_polynomial("x1", d));
  CHECK(parse_polynomial("2^3", d) == Polynomial<Rational>::constant(d, 8));
}

TEST_CASE("parse errors carry positions and name the offender") {
  const Dims d{1, 1};
  CHECK_THROWS_WITH_AS(parse_polynomial("X1^2 + Y", d),
                       doctest::Contains("unknown variable 'Y'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("x2", d), doctest::Contains("out of range"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("X9^2", d), doctest::Contains("out of range"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("x1 / X1", d),
                       doctest::Contains("division is only defined by a constant"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("x1 / 0", d), doctest::Contains("division by zero"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("x1 +", d), doctest::Contains("unexpected end"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("(x1", d), doctest::Contains("expected ')'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_polynomial("x1^p1", d), doctest::Contains("integer exponent"),
                       ConfigError);
  CHECK_THROWS_AS(parse_polynomial("x1 x1", d), ConfigError);
}

TEST_CASE("print then parse is the identity on random polynomials") {
  Prng rng(1234);
  for (int rep = 0; rep < 80; ++rep) {
    const Dims d{1 + static_cast<int>(rng.next_u64() % 2),
                 1 + static_cast<int>(rng.next_u64() % 3)};
    const auto poly = random_rational_poly(rng, d, 5, 7);
    const std::string text = print_polynomial(poly);
    const auto back = parse_polynomial(text, d);
    CHECK(back == poly);
    // printing is canonical: a second round trip produces the same text
    CHECK(print_polynomial(back) == text);
  }
}

TEST_CASE("zero polynomial prints as 0") {
  const Dims d{1, 1};
  CHECK(print_polynomial(Polynomial<Rational>(d)) == "0");
  CHECK(parse_polynomial("0", d).is_zero());
}
