#include <gtest/gtest.h>

#include <cmath>

#include "cartan/error.hpp"
#include "cartan/jet.hpp"
#include "cartan/random.hpp"

using namespace cartan;

namespace {

Jet random_jet(Rng& rng, int nvars, int order) {
  Jet j = Jet::constant(nvars, order, rng.uniform(0.5, 1.5));
  auto c = j.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = rng.uniform(-1.0, 1.0);
  return j;
}

double max_gap(const Jet& a, const Jet& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.coeff(i) - b.coeff(i)));
  return worst;
}

}  // namespace

TEST(Jet, SizesFollowBinomialCounts) {
  EXPECT_EQ(jet_size(1, 3), 4u);
  EXPECT_EQ(jet_size(2, 2), 6u);
  EXPECT_EQ(jet_size(3, 3), 20u);
  EXPECT_EQ(jet_size(6, 8), 3003u);
}

TEST(Jet, LowerOrdersArePrefixes) {
  for (std::size_t i = 0; i < jet_size(3, 2); ++i) {
    const auto lo = jet_monomial(3, i);
    int degree = 0;
    for (auto e : lo) degree += e;
    EXPECT_LE(degree, 2);
  }
}

TEST(Jet, PolynomialDerivatives) {
  // f = x^2 y + 3 at (0.3, 0.5): f_x = 2xy, f_xy = 2x, f_xx = 2y
  const Jet x = Jet::variable(2, 3, 0, 0.3);
  const Jet y = Jet::variable(2, 3, 1, 0.5);
  const Jet f = x * x * y + Jet::constant(2, 3, 3.0);
  EXPECT_DOUBLE_EQ(f.value(), 0.09 * 0.5 + 3.0);
  EXPECT_NEAR(f.derivative(0).value(), 2 * 0.3 * 0.5, 1e-15);
  EXPECT_NEAR(f.derivative(0).derivative(1).value(), 0.6, 1e-15);
  EXPECT_NEAR(f.derivative(0).derivative(0).value(), 1.0, 1e-15);
  EXPECT_NEAR(f.derivative(0).derivative(0).derivative(1).value(), 2.0, 1e-15);
}

TEST(Jet, ElementaryFunctions) {
  const double a = 0.7;
  const Jet x = Jet::variable(1, 4, 0, a);
  Jet s = sin(x);
  Jet c = cos(x);
  Jet e = exp(x);
  const double sin_derivs[] = {std::sin(a), std::cos(a), -std::sin(a), -std::cos(a), std::sin(a)};
  const double cos_derivs[] = {std::cos(a), -std::sin(a), -std::cos(a), std::sin(a), std::cos(a)};
  for (int k = 0; k <= 4; ++k) {
    EXPECT_NEAR(s.value(), sin_derivs[k], 1e-13) << k;
    EXPECT_NEAR(c.value(), cos_derivs[k], 1e-13) << k;
    EXPECT_NEAR(e.value(), std::exp(a), 1e-13) << k;
    if (k < 4) {
      s = s.derivative(0);
      c = c.derivative(0);
      e = e.derivative(0);
    }
  }
}

TEST(Jet, Reciprocal) {
  // d^3/dx^3 1/(1+x) = -6/(1+x)^4
  const Jet x = Jet::variable(1, 3, 0, 0.25);
  const Jet r = reciprocal(Jet::constant(1, 3, 1.0) + x);
  EXPECT_NEAR(r.derivative(0).derivative(0).derivative(0).value(), -6.0 / std::pow(1.25, 4), 1e-12);
}

TEST(Jet, DivisionByZeroIsAnError) {
  const Jet x = Jet::variable(2, 1, 0, 0.0);
  try {
    (void)(Jet::constant(2, 1, 1.0) / x);
    FAIL() << "expected an evaluation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EvaluationError);
  }
  const Jet zero = Jet::constant(1, 0, 0.0);
  EXPECT_THROW((void)(Jet::constant(1, 0, 1.0) / zero), Error);
}

TEST(Jet, IntegerPowerMatchesRepeatedProduct) {
  Rng rng(7);
  const Jet a = random_jet(rng, 3, 4);
  EXPECT_LT(max_gap(pow(a, 5), a * a * a * a * a), 1e-12);
  EXPECT_EQ(max_gap(pow(a, 0), Jet::constant(3, 4, 1.0)), 0.0);
}

TEST(JetProperty, RingAxiomsAndDivision) {
  Rng rng(20240611);
  for (int trial = 0; trial < 50; ++trial) {
    const int nvars = rng.integer(1, 4);
    const int order = rng.integer(0, 5);
    const Jet a = random_jet(rng, nvars, order);
    const Jet b = random_jet(rng, nvars, order);
    const Jet c = random_jet(rng, nvars, order);
    EXPECT_LT(max_gap((a * b) * c, a * (b * c)), 1e-12);
    EXPECT_LT(max_gap(a * (b + c), a * b + a * c), 1e-12);
    EXPECT_LT(max_gap(a * b, b * a), 1e-14);
    EXPECT_LT(max_gap((a / b) * b, a), 1e-10);
  }
}

TEST(JetProperty, ProductRuleAndMixedPartialsCommute) {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const Jet a = random_jet(rng, 3, 4);
    const Jet b = random_jet(rng, 3, 4);
    const int u = rng.integer(0, 2);
    const int v = rng.integer(0, 2);
    const Jet lhs = (a * b).derivative(u);
    const Jet rhs = a.derivative(u) * b.truncated(3) + a.truncated(3) * b.derivative(u);
    EXPECT_LT(max_gap(lhs, rhs), 1e-12);
    EXPECT_LT(max_gap(a.derivative(u).derivative(v), a.derivative(v).derivative(u)), 1e-12);
  }
}

TEST(JetProperty, ChainRuleForExp) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Jet a = random_jet(rng, 2, 5);
    const Jet lhs = exp(a).derivative(1);
    const Jet rhs = exp(a.truncated(4)) * a.derivative(1);
    EXPECT_LT(max_gap(lhs, rhs), 1e-11);
    const Jet pyth = sin(a) * sin(a) + cos(a) * cos(a);
    EXPECT_LT(max_gap(pyth, Jet::constant(2, 5, 1.0)), 1e-12);
  }
}
