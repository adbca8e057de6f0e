#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cartan/chart.hpp"
#include "cartan/error.hpp"
#include "cartan/expression.hpp"
#include "cartan/random.hpp"

using namespace cartan;

TEST(Parser, AcceptsGrammarExercise) {
  const Chart chart(2);
  const Expression e = parse_expression("x1*x2 + sin(x1)", chart);
  const double pt[] = {0.3, 0.8};
  EXPECT_NEAR(e.evaluate(pt), 0.3 * 0.8 + std::sin(0.3), 1e-15);
}

TEST(Parser, UnknownVariable) {
  try {
    parse_expression("x3", 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownVariable);
  }
  EXPECT_THROW(parse_expression("x0 + 1", 2), Error);
}

TEST(Parser, DanglingCaretReportsOffset) {
  try {
    parse_expression("2^", 1);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 2u);
    EXPECT_EQ(e.expected(), "integer");
  }
}

TEST(Parser, MalformedInputs) {
  for (const char* bad : {"", "(x1", "x1 +", "sin x1", "foo(1)", "1 2", "2^-1", "1e", "x"}) {
    EXPECT_THROW(parse_expression(bad, 1), SyntaxError) << bad;
  }
}

TEST(Parser, UnaryMinusBindsToAtom) {
  const double pt[] = {0.5};
  EXPECT_DOUBLE_EQ(parse_expression("-x1^2", 1).evaluate(pt), 0.25);
  EXPECT_DOUBLE_EQ(parse_expression("-(x1^2)", 1).evaluate(pt), -0.25);
  EXPECT_DOUBLE_EQ(parse_expression("1 - -x1", 1).evaluate(pt), 1.5);
}

TEST(Parser, PrecedenceAndAssociativity) {
  const double pt[] = {2.0, 3.0};
  EXPECT_DOUBLE_EQ(parse_expression("1 + 2 * x1 ^ 2", 2).evaluate(pt), 9.0);
  EXPECT_DOUBLE_EQ(parse_expression("x2 - x1 - 1", 2).evaluate(pt), 0.0);
  EXPECT_DOUBLE_EQ(parse_expression("x2 / x1 / 3", 2).evaluate(pt), 0.5);
  EXPECT_DOUBLE_EQ(parse_expression("2.5e-1 * 4", 2).evaluate(pt), 1.0);
  EXPECT_NEAR(parse_expression("exp(x1 - 2) + cos(0)", 2).evaluate(pt), 2.0, 1e-15);
}

TEST(Parser, DivisionByZeroSurfacesAtEvaluation) {
  const Expression e = parse_expression("1 / (x1 - 0.5)", 1);
  const double pt[] = {0.5};
  try {
    e.evaluate(pt);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::EvaluationError);
  }
}

TEST(Parser, RandpolyIsReproducible) {
  const Expression a = parse_expression("randpoly(3, 42)", 2);
  const Expression b = parse_expression("randpoly(3,42)", 2);
  const double pt[] = {0.2, 0.9};
  EXPECT_EQ(a.evaluate(pt), b.evaluate(pt));
  // Direct evaluation from the documented coefficient order.
  const auto coeffs = randpoly_coefficients(2, 3, 42);
  const auto monos = monomials_up_to(2, 3);
  ASSERT_EQ(coeffs.size(), 10u);
  double expected = 0.0;
  for (std::size_t t = 0; t < monos.size(); ++t) {
    expected += coeffs[t] * std::pow(pt[0], monos[t][0]) * std::pow(pt[1], monos[t][1]);
    EXPECT_LE(std::abs(coeffs[t]), 1.0);
  }
  EXPECT_NEAR(a.evaluate(pt), expected, 1e-14);
}

namespace {

// Random expression generator over the full grammar.
std::string random_source(Rng& rng, int nvars, int depth) {
  const int pick = depth <= 0 ? rng.integer(0, 1) : rng.integer(0, 9);
  switch (pick) {
    case 0: return std::to_string(rng.integer(0, 9)) + "." + std::to_string(rng.integer(0, 99));
    case 1: return "x" + std::to_string(rng.integer(1, nvars));
    case 2: return random_source(rng, nvars, depth - 1) + " + " + random_source(rng, nvars, depth - 1);
    case 3: return random_source(rng, nvars, depth - 1) + " - " + random_source(rng, nvars, depth - 1);
    case 4: return random_source(rng, nvars, depth - 1) + " * " + random_source(rng, nvars, depth - 1);
    case 5: return "(" + random_source(rng, nvars, depth - 1) + ")^" + std::to_string(rng.integer(0, 3));
    case 6: return "-" + random_source(rng, nvars, 0);
    case 7: return "sin(" + random_source(rng, nvars, depth - 1) + ")";
    case 8: return "exp(" + random_source(rng, nvars, depth - 1) + ")";
    default: return "randpoly(" + std::to_string(rng.integer(0, 3)) + "," + std::to_string(rng.integer(0, 1000)) + ")";
  }
}

}  // namespace

TEST(ParserProperty, PrintParseRoundTrip) {
  Rng rng(314159);
  for (int trial = 0; trial < 300; ++trial) {
    const int nvars = rng.integer(1, 4);
    const std::string src = random_source(rng, nvars, 4);
    const Expression first = parse_expression(src, nvars);
    const std::string printed = to_string(first);
    const Expression second = parse_expression(printed, nvars);
    EXPECT_TRUE(first == second) << src << " -> " << printed;
    EXPECT_EQ(printed, to_string(second));
  }
}

TEST(ParserProperty, RoundTripPreservesExoticNumbers) {
  for (const char* src : {"1e-300", "0.1", "123456789.125", "5e+20", "0.000001"}) {
    const Expression e = parse_expression(src, 1);
    EXPECT_TRUE(parse_expression(to_string(e), 1) == e) << src;
  }
}
