#include <gtest/gtest.h>

#include "cartan/error.hpp"
#include "cartan/forms.hpp"

using namespace cartan;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ConfigError;
}

AlgebraField gconst(const LiePair& pair, const ChartPtr& chart, std::vector<double> v) {
  return make_algebra_field(pair, ValueSpace::G, constant_field(chart, std::move(v)));
}

AlgebraField hconst(const LiePair& pair, const ChartPtr& chart, std::vector<double> v) {
  return make_algebra_field(pair, ValueSpace::H, constant_field(chart, std::move(v)));
}

// (X + gamma) -> i(gamma) - sum_mu X^mu abar_mu, written out independently of the library.
AlgebroidForm cartan_one_form(const LiePair& pair, const std::vector<Field>& abar) {
  return AlgebroidForm(pair, 1, ValueSpace::G, [pair, abar](const std::vector<Section>& s) {
    const Field v = linear_map(pair.inclusion(), s[0].gamma) - contract(s[0].X, abar);
    return AlgebraField(v, ValueSpace::G);
  });
}

// Random mixed degree-1 bigraded form with polynomial coefficients.
BigradedForm random_one_form(const LiePair& pair, SampleGenerator& gen, ValueSpace module, int degree) {
  BigradedForm w(pair, gen.chart(), module, 1);
  for (int mu = 0; mu < gen.chart()->n(); ++mu) w.set({mu}, {}, gen.algebra_field(pair, module, degree));
  for (int a = 0; a < pair.dim_h(); ++a) w.set({}, {a}, gen.algebra_field(pair, module, degree));
  return w;
}

struct FormsFixture : ::testing::Test {
  Model model = builtin_model("euclidean2");
  LiePair pair = model.pair;
  ChartPtr chart = make_chart(2);
  std::vector<std::vector<double>> pts{{0.25, 0.5}, {0.8, 0.3}, {0.6, 0.9}};

  Section P(const std::vector<std::string>& X, const std::vector<std::string>& gamma) {
    return make_section(pair, Side::P, parse_field(chart, X),
                        make_algebra_field(pair, ValueSpace::H, parse_field(chart, gamma)));
  }
};

}  // namespace

TEST_F(FormsFixture, DifferentialOfConstantZeroForm) {
  const AlgebroidForm w = function_form(pair, gconst(pair, chart, {0, 1, 0}));
  const AlgebraField v = koszul_differential(w)({P({"0", "0"}, {"1"})});
  EXPECT_LT(max_difference(v, gconst(pair, chart, {0, 0, 1}), pts), 1e-15);
}

TEST_F(FormsFixture, FlatCartanConnectionHasNoCurvature) {
  const std::vector<Field> abar = {constant_field(chart, {0, 1, 0}), constant_field(chart, {0, 0, 1})};
  const AlgebroidForm varpi = cartan_one_form(pair, abar);
  const AlgebroidForm curv = koszul_differential(varpi) - 0.5 * graded_bracket(varpi, varpi);
  const AlgebraField v = curv({P({"1", "0"}, {"0"}), P({"0", "1"}, {"0"})});
  EXPECT_LT(max_abs(v, pts), 1e-14);
  const AlgebraField u = curv({P({"x2", "x1^2"}, {"0"}), P({"1", "x1*x2"}, {"0"})});
  EXPECT_LT(max_abs(u, pts), 1e-12);
}

TEST_F(FormsFixture, ContractionExamples) {
  const std::vector<Field> abar = {constant_field(chart, {0, 1, 0}), constant_field(chart, {0, 0, 1})};
  const AlgebroidForm varpi = cartan_one_form(pair, abar);
  const Section s = P({"x1", "1"}, {"x2"});
  EXPECT_LT(max_difference(contract(s, varpi)({}), varpi({s}), pts), 1e-15);
  const AlgebroidForm two = graded_bracket(varpi, varpi) + koszul_differential(varpi);
  EXPECT_LT(max_abs(contract(s, contract(s, two))({}), pts), 1e-13);
  EXPECT_LT(max_abs(contract(zero_section(pair, Side::P, chart), varpi)({}), pts), 1e-15);
  EXPECT_EQ(code_of([&] { contract(s, function_form(pair, gconst(pair, chart, {1, 0, 0}))); }),
            ErrorCode::DegreeUnderflow);
}

TEST_F(FormsFixture, DegreeLimits) {
  const AlgebroidForm three = zero_form(pair, 3, ValueSpace::G, chart);
  EXPECT_EQ(code_of([&] { koszul_differential(three); }), ErrorCode::DegreeOverflow);
  EXPECT_EQ(code_of([&] { zero_form(pair, 4, ValueSpace::G, chart); }), ErrorCode::DegreeOverflow);
  EXPECT_EQ(code_of([&] { three({}); }), ErrorCode::DimensionMismatch);
  BigradedForm two(pair, chart, ValueSpace::G, 2);
  EXPECT_EQ(code_of([&] { bigraded_differential(two); }), ErrorCode::DegreeOverflow);
}

TEST_F(FormsFixture, LieDerivativeOfZeroFormIsTheAction) {
  const AlgebraField w = make_algebra_field(pair, ValueSpace::G, parse_field(chart, {"x1*x2", "sin(x1)", "x2^2"}));
  const Section s = P({"x2", "1 - x1"}, {"x1"});
  EXPECT_LT(max_difference(lie_derivative(s, function_form(pair, w))({}), rep_action(s, w), pts), 1e-14);
}

TEST_F(FormsFixture, BigradedConstantMatchesKoszul) {
  BigradedForm w(pair, chart, ValueSpace::G, 0);
  w.set({}, {}, gconst(pair, chart, {0, 1, 0}));
  const BigradedForm d = bigraded_differential(w);
  // s' part at gamma = J
  EXPECT_LT(max_difference(d.coefficient({}, {0}), gconst(pair, chart, {0, 0, 1}), pts), 1e-15);
  const Section s = P({"0", "0"}, {"1"});
  EXPECT_LT(max_difference(to_functional(d)({s}), koszul_differential(to_functional(w))({s}), pts), 1e-15);
}

TEST_F(FormsFixture, PureDeRhamPart) {
  // c = x1 dx2: d c = dx1 ^ dx2
  BigradedForm w(pair, chart, ValueSpace::G, 1);
  w.set({1}, {}, make_algebra_field(pair, ValueSpace::G, parse_field(chart, {"x1", "0", "0"})));
  const BigradedForm d = de_rham_part(w);
  EXPECT_LT(max_difference(d.coefficient({0, 1}, {}), gconst(pair, chart, {1, 0, 0}), pts), 1e-15);
  EXPECT_LT(max_difference(d.coefficient({1, 0}, {}), gconst(pair, chart, {-1, 0, 0}), pts), 1e-15);
  EXPECT_LT(d.antisymmetry_residual(pts), 1e-15);
}

TEST_F(FormsFixture, MixedComponentSign) {
  // omega = C_mu dx^mu + B_a theta^a; the (1,1) part is d_mu B_a - [E_a, C_mu].
  BigradedForm w(pair, chart, ValueSpace::G, 1);
  w.set({0}, {}, gconst(pair, chart, {0, 1, 0}));
  w.set({}, {0}, make_algebra_field(pair, ValueSpace::G, parse_field(chart, {"0", "0", "x1"})));
  const BigradedForm d = bigraded_differential(w);
  // d_1 B = P2, [J, P1] = P2, so the (dx1, J) entry vanishes.
  EXPECT_LT(max_abs(d.coefficient({0}, {0}), pts), 1e-15);
  EXPECT_LT(max_abs(d.coefficient({1}, {0}), pts), 1e-15);
}

TEST(BigradedStorage, AntisymmetricImages) {
  const Model m = builtin_model("sphere3");
  auto chart = make_chart(3);
  BigradedForm w(m.pair, chart, ValueSpace::H, 2);
  const AlgebraField c = make_algebra_field(m.pair, ValueSpace::H, parse_field(chart, {"x1", "1", "x3"}));
  w.set({2, 0}, {}, c);
  const std::vector<std::vector<double>> pts{{0.3, 0.4, 0.5}};
  EXPECT_LT(max_difference(w.coefficient({0, 2}, {}), -1.0 * c, pts), 1e-15);
  EXPECT_LT(max_abs(w.coefficient({0, 1}, {}), pts), 1e-15);
  w.set({}, {2, 1}, c);
  EXPECT_LT(max_difference(w.coefficient({}, {1, 2}), -1.0 * c, pts), 1e-15);
  EXPECT_LT(w.antisymmetry_residual(pts), 1e-15);
  EXPECT_EQ(code_of([&] { w.set({1, 1}, {}, c); }), ErrorCode::DimensionMismatch);
}

class FormsProperty : public ::testing::TestWithParam<const char*> {};

TEST_P(FormsProperty, DifferentialSquaresToZero) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 101);
  for (int trial = 0; trial < 5; ++trial) {
    const AlgebroidForm f = function_form(m.pair, gen.algebra_field(m.pair, ValueSpace::G, 3));
    const AlgebroidForm w = to_functional(random_one_form(m.pair, gen, ValueSpace::H, 2));
    const auto pt = gen.points(2);
    const Section a = gen.section(m.pair, Side::P, 2);
    const Section b = gen.section(m.pair, Side::P, 2);
    const Section c = gen.section(m.pair, Side::P, 2);
    EXPECT_LT(max_abs(koszul_differential(koszul_differential(f))({a, b}), pt), 1e-5);
    EXPECT_LT(max_abs(koszul_differential(koszul_differential(w))({a, b, c}), pt), 1e-5);
  }
}

TEST_P(FormsProperty, DifferentialIsMultilinearAndAlternating) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 102);
  for (int trial = 0; trial < 5; ++trial) {
    const AlgebroidForm dw = koszul_differential(to_functional(random_one_form(m.pair, gen, ValueSpace::G, 2)));
    const Field f = gen.polynomial(1, 2);
    const Section a = gen.section(m.pair, Side::P, 2);
    const Section b = gen.section(m.pair, Side::P, 2);
    const auto pt = gen.points(2);
    EXPECT_LT(max_difference(dw({f * a, b}), f * dw({a, b}), pt), 1e-8);
    EXPECT_LT(max_difference(dw({a, f * b}), f * dw({a, b}), pt), 1e-8);
    EXPECT_LT(max_abs(dw({a, a}), pt), 1e-8);
  }
}

TEST_P(FormsProperty, BigradedDifferentialIntertwinesKoszul) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 103);
  for (ValueSpace module : {ValueSpace::H, ValueSpace::G}) {
    for (int trial = 0; trial < 5; ++trial) {
      BigradedForm zero(m.pair, gen.chart(), module, 0);
      zero.set({}, {}, gen.algebra_field(m.pair, module, 3));
      const BigradedForm one = random_one_form(m.pair, gen, module, 2);
      const Section a = gen.section(m.pair, Side::P, 2);
      const Section b = gen.section(m.pair, Side::P, 2);
      const auto pt = gen.points(2);
      EXPECT_LT(max_difference(to_functional(bigraded_differential(zero))({a}),
                               koszul_differential(to_functional(zero))({a}), pt),
                1e-5);
      EXPECT_LT(max_difference(to_functional(bigraded_differential(one))({a, b}),
                               koszul_differential(to_functional(one))({a, b}), pt),
                1e-5);
      EXPECT_LT(bigraded_differential(one).antisymmetry_residual(pt), 1e-12);
    }
  }
}

TEST_P(FormsProperty, GradedLeibniz) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 104);
  for (int trial = 0; trial < 4; ++trial) {
    const AlgebroidForm w = to_functional(random_one_form(m.pair, gen, ValueSpace::G, 2));
    const AlgebroidForm v = to_functional(random_one_form(m.pair, gen, ValueSpace::G, 2));
    const AlgebroidForm lhs = koszul_differential(graded_bracket(w, v));
    const AlgebroidForm rhs = graded_bracket(koszul_differential(w), v) - graded_bracket(w, koszul_differential(v));
    const std::vector<Section> s{gen.section(m.pair, Side::P, 2), gen.section(m.pair, Side::P, 2),
                                 gen.section(m.pair, Side::P, 2)};
    EXPECT_LT(max_difference(lhs(s), rhs(s), gen.points(2)), 1e-4);
  }
}

TEST_P(FormsProperty, LieDerivativeRepresentsTheBracket) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 105);
  for (int trial = 0; trial < 3; ++trial) {
    const AlgebroidForm w = to_functional(random_one_form(m.pair, gen, ValueSpace::G, 2));
    const Section x = gen.section(m.pair, Side::P, 2);
    const Section y = gen.section(m.pair, Side::P, 2);
    const Section z = gen.section(m.pair, Side::P, 2);
    const AlgebroidForm lhs = lie_derivative(bracket_sections(x, y), w);
    const AlgebroidForm rhs = lie_derivative(x, lie_derivative(y, w)) - lie_derivative(y, lie_derivative(x, w));
    EXPECT_LT(max_difference(lhs({z}), rhs({z}), gen.points(2)), 1e-4);
  }
}

INSTANTIATE_TEST_SUITE_P(Models, FormsProperty, ::testing::Values("euclidean2", "sphere2"));
