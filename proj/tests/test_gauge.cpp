#include <gtest/gtest.h>

#include "cartan/error.hpp"
#include "cartan/gauge.hpp"

using namespace cartan;

namespace {

AlgebraField field(const ChartPtr& chart, ValueSpace space, const std::vector<std::string>& src) {
  return AlgebraField(parse_field(chart, src), space);
}

FormComponents components(const ChartPtr& chart, ValueSpace space,
                          const std::vector<std::vector<std::string>>& src) {
  FormComponents out;
  for (const auto& s : src) out.push_back(field(chart, space, s));
  return out;
}

struct Se2 : ::testing::Test {
  Model model = builtin_model("euclidean2");
  LiePair pair = model.pair;
  ChartPtr chart = make_chart(2);
  std::vector<std::vector<double>> pts{{0.25, 0.5}, {0.8, 0.3}, {0.6, 0.9}};

  LocalConnection h_form(const std::vector<std::vector<std::string>>& src) {
    return make_local_connection(pair, Side::P, components(chart, ValueSpace::H, src));
  }
  CartanConnection identity_tetrad() {
    return make_cartan_connection(pair, components(chart, ValueSpace::G, {{"0", "1", "0"}, {"0", "0", "1"}}),
                                  model.split);
  }
  Section P(const std::vector<std::string>& X, const std::vector<std::string>& gamma) {
    return make_section(pair, Side::P, parse_field(chart, X), field(chart, ValueSpace::H, gamma));
  }
  double diff(const FormComponents& a, const std::vector<std::vector<std::vector<std::string>>>& expected,
              ValueSpace space) {
    FormComponents e;
    for (const auto& c : expected) e.push_back(field(chart, space, c[0]));
    return components_difference(a, e, pts);
  }
};

}  // namespace

TEST_F(Se2, EhresmannExamples) {
  EXPECT_LT(diff(lie_derivative_ehresmann(P({"0", "0"}, {"2"}), h_form({{"0"}, {"0"}})), {{{"0"}}, {{"0"}}},
                 ValueSpace::H),
            1e-15);
  EXPECT_LT(diff(lie_derivative_ehresmann(P({"1", "0"}, {"0"}), h_form({{"0"}, {"x1"}})), {{{"0"}}, {{"-1"}}},
                 ValueSpace::H),
            1e-14);
  const auto A = h_form({{"x2"}, {"x1*x2"}});
  const Section kv = kernel_inject(pair, field(chart, ValueSpace::H, {"x1^2"}), Side::P);
  EXPECT_LT(max_abs(lie_derivative(P({"x2", "x1"}, {"x1"}), omega_lie(A))({kv}), pts), 1e-8);
}

TEST_F(Se2, CartanExamples) {
  // [J, P1] = P2 and [J, P2] = -P1, so d i(J) + [Abar, i(J)] = -dx1 P2 + dx2 P1.
  const auto c = identity_tetrad();
  FormComponents expected = components(chart, ValueSpace::G, {{"0", "0", "-1"}, {"0", "1", "0"}});
  EXPECT_LT(components_difference(lie_derivative_cartan(P({"0", "0"}, {"1"}), c), expected, pts), 1e-14);
  FormComponents zero = components(chart, ValueSpace::G, {{"0", "0", "0"}, {"0", "0", "0"}});
  EXPECT_LT(components_difference(lie_derivative_cartan(P({"1", "0"}, {"0"}), c), zero, pts), 1e-15);
  EXPECT_LT(components_difference(lie_derivative_cartan(P({"x2", "x1"}, {"x1 * x2"}), c),
                                  trivialize(lie_derivative(P({"x2", "x1"}, {"x1 * x2"}), varpi_lie(c)), chart), pts),
            1e-5);
  const auto nosplit = make_cartan_connection(pair, c.components, std::nullopt);
  try {
    lie_derivative_cartan_split(P({"1", "0"}, {"0"}), nosplit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSplit);
  }
}

TEST_F(Se2, BackgroundDecomposition) {
  const auto c = make_cartan_connection(
      pair, components(chart, ValueSpace::G, {{"x2", "1 + x1", "0"}, {"x1^2", "x2", "1"}}), model.split);
  const Field X = parse_field(chart, {"x2", "1 - x1"});
  const AlgebraField gamma = field(chart, ValueSpace::H, {"x1 * x2"});
  // Zero background reduces to the split formula.
  const auto none = h_form({{"0"}, {"0"}});
  EXPECT_LT(state_difference(background_decompose(X, gamma, none, c),
                             lie_derivative_cartan_split(make_section(pair, Side::P, X, gamma), c), pts),
            1e-12);
  // Background equal to the connection's own h-part.
  const LocalConnection own = c.ehresmann_part();
  EXPECT_LT(state_difference(background_decompose(X, gamma, own, c),
                             lie_derivative_cartan_split(to_section(pair, {X, gamma, own}), c), pts),
            1e-8);
}

TEST_F(Se2, WActionExamples) {
  const GaugeState st = split_state(identity_tetrad());
  const auto none = h_form({{"0"}, {"0"}});
  const GaugeState r = w_action(model.split, WGenerator::gauge(field(chart, ValueSpace::H, {"1"})), none, st);
  EXPECT_LT(diff(r.A, {{{"0"}}, {{"0"}}}, ValueSpace::H), 1e-15);
  FormComponents eB = components(chart, ValueSpace::P, {{"0", "-1"}, {"1", "0"}});
  EXPECT_LT(components_difference(r.B, eB, pts), 1e-14);

  // No background: W(xi) is the pure Lie derivative.
  const GaugeState s2{components(chart, ValueSpace::H, {{"x2"}, {"x1^2"}}),
                      components(chart, ValueSpace::P, {{"x1", "1"}, {"0", "x2"}})};
  const Field xi = parse_field(chart, {"x2", "x1 * x2"});
  const GaugeState d = w_action(model.split, WGenerator::diffeo(xi), none, s2);
  const GaugeState neg{lie_derivative_components(xi, s2.A), lie_derivative_components(xi, s2.B)};
  EXPECT_LT(state_difference(d + neg, GaugeState{components(chart, ValueSpace::H, {{"0"}, {"0"}}),
                                                 components(chart, ValueSpace::P, {{"0", "0"}, {"0", "0"}})},
                             pts),
            1e-14);
}

TEST_F(Se2, CommutatorExamples) {
  const GaugeState st{components(chart, ValueSpace::H, {{"x1 * x2"}, {"x2^2"}}),
                      components(chart, ValueSpace::P, {{"1 + x2", "x1"}, {"x1 * x2", "1"}})};
  const Field d1 = coordinate_vector(chart, 0);
  const Field d2 = coordinate_vector(chart, 1);
  const AlgebraField om = field(chart, ValueSpace::H, {"0.7"});
  const AlgebraField om2 = field(chart, ValueSpace::H, {"-1.3"});

  const auto flat = h_form({{"0"}, {"0"}});
  const VariationReport trivial = commutator_check(model.split, d1, d2, om, om2, flat, st, pts);
  EXPECT_LT(trivial.checks[0].residual, 1e-15);
  EXPECT_TRUE(trivial.pass());

  const auto twisted = h_form({{"0"}, {"x1"}});
  EXPECT_LT(max_difference(background_curvature(twisted, d1, d2), field(chart, ValueSpace::H, {"1"}), pts), 1e-14);
  const AlgebraField wom = field(chart, ValueSpace::H, {"x1 * x2"});
  const AlgebraField wom2 = field(chart, ValueSpace::H, {"x2 - x1^2"});
  const VariationReport r = commutator_check(model.split, d1, d2, wom, wom2, twisted, st, pts);
  for (const auto& c : r.checks) EXPECT_LT(c.residual, 1e-6) << c.name;
  // The curvature term is what distinguishes the two sign conventions here.
  EXPECT_GT(r.opposite_sign[2].residual, 1e-3);
}

TEST(GaugeProperty, RandomizedIdentities) {
  for (const char* name : {"euclidean2", "sphere2", "hyperbolic2", "sphere3"}) {
    const Model m = builtin_model(name);
    const VariationReport r = gauge_checks(m, make_chart(m.n), 3, 11);
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << name << ": " << c.name << " " << c.residual;
  }
}

TEST(GaugeProperty, NonabelianCommutators) {
  const Model m = builtin_model("sphere3");
  auto chart = make_chart(3);
  SampleGenerator gen(chart, 5);
  FormComponents bg, a, b;
  for (int mu = 0; mu < 3; ++mu) {
    bg.push_back(gen.algebra_field(m.pair, ValueSpace::H, 2));
    a.push_back(gen.algebra_field(m.pair, ValueSpace::H, 2));
    b.push_back(AlgebraField(gen.polynomial(m.split.dim_p(), 2), ValueSpace::P));
  }
  const auto background = make_local_connection(m.pair, Side::P, bg);
  const GaugeState st{a, b};
  const auto pts = gen.points(4);
  const VariationReport r = commutator_check(m.split, gen.polynomial(3, 2), gen.polynomial(3, 2),
                                             gen.algebra_field(m.pair, ValueSpace::H, 2),
                                             gen.algebra_field(m.pair, ValueSpace::H, 2), background, st, pts);
  for (const auto& c : r.checks) EXPECT_LT(c.residual, 1e-6) << c.name;
  for (const auto& c : r.opposite_sign) EXPECT_GT(c.residual, 1e-6) << c.name;
}
