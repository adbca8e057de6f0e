#include <gtest/gtest.h>

#include "cartan/algebroid.hpp"
#include "cartan/error.hpp"

using namespace cartan;

namespace {

struct Se2Fixture : ::testing::Test {
  Model model = builtin_model("euclidean", 2);
  LiePair pair = model.pair;
  ChartPtr chart = make_chart(2);
  std::vector<std::vector<double>> pts{{0.2, 0.7}, {0.9, 0.1}, {0.5, 0.5}};

  AlgebraField h(const std::vector<std::string>& src) {
    return make_algebra_field(pair, ValueSpace::H, parse_field(chart, src));
  }
  AlgebraField g(const std::vector<std::string>& src) {
    return make_algebra_field(pair, ValueSpace::G, parse_field(chart, src));
  }
  Field vec(const std::vector<std::string>& src) { return parse_field(chart, src); }
  Section P(const std::vector<std::string>& X, const std::vector<std::string>& gamma) {
    return make_section(pair, Side::P, vec(X), h(gamma));
  }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_F(Se2Fixture, AnchorExamples) {
  EXPECT_LT(max_difference(anchor(P({"1", "0"}, {"1"})), vec({"1", "0"}), pts), 1e-15);
  EXPECT_LT(max_abs(anchor(P({"0", "0"}, {"x1"})), pts), 1e-15);
  EXPECT_LT(max_difference(anchor(P({"0", "x1"}, {"0"})), vec({"0", "x1"}), pts), 1e-15);
}

TEST_F(Se2Fixture, KernelInjection) {
  const Section s = kernel_inject(pair, h({"1"}), Side::P);
  EXPECT_LT(max_abs(s.X, pts), 1e-15);
  EXPECT_LT(max_difference(s.gamma, h({"1"}), pts), 1e-15);
  EXPECT_LT(section_difference(kernel_inject(pair, h({"0"}), Side::P), zero_section(pair, Side::P, chart), pts), 1e-15);
  EXPECT_EQ(code_of([&] { kernel_inject(pair, g({"0", "1", "0"}), Side::P); }), ErrorCode::ValueSpaceMismatch);
}

TEST_F(Se2Fixture, BracketExamples) {
  // (d1 + 0), (0 + x1 J) -> 0 + J
  const Section a = bracket_sections(P({"1", "0"}, {"0"}), P({"0", "0"}, {"x1"}));
  EXPECT_LT(section_difference(a, P({"0", "0"}, {"1"}), pts), 1e-14);
  const Section s = P({"x2^2", "sin(x1)"}, {"x1*x2"});
  EXPECT_LT(section_difference(bracket_sections(s, s), zero_section(pair, Side::P, chart), pts), 1e-14);
  const Section b = bracket_sections(P({"1", "0"}, {"0"}), P({"0", "x1"}, {"0"}));
  EXPECT_LT(section_difference(b, P({"0", "1"}, {"0"}), pts), 1e-14);
  const Section q = map_J(s);
  EXPECT_EQ(code_of([&] { bracket_sections(s, q); }), ErrorCode::SideMismatch);
}

TEST_F(Se2Fixture, RepresentationExamples) {
  // (0 + J) . P1 = [J, P1] = P2
  EXPECT_LT(max_difference(rep_action(P({"0", "0"}, {"1"}), g({"0", "1", "0"})), g({"0", "0", "1"}), pts), 1e-15);
  EXPECT_LT(max_difference(rep_action(P({"1", "0"}, {"0"}), g({"0", "x1", "0"})), g({"0", "1", "0"}), pts), 1e-15);
  EXPECT_LT(max_abs(rep_action(P({"0", "0"}, {"0"}), g({"x1", "x2^3", "exp(x1)"})), pts), 1e-15);
  EXPECT_EQ(code_of([&] {
              rep_action(P({"0", "0"}, {"0"}),
                         AlgebraField(parse_field(chart, {"1", "0"}), ValueSpace::Quotient));
            }),
            ErrorCode::ValueSpaceMismatch);
}

TEST_F(Se2Fixture, DiagramMapExamples) {
  const Section q = map_J(P({"1", "0"}, {"1"}));
  EXPECT_EQ(q.side, Side::Q);
  EXPECT_LT(max_difference(q.gamma, g({"1", "0", "0"}), pts), 1e-15);
  // R(d1 + (J + P1)) = (1, 0)
  const Section s = make_section(pair, Side::Q, vec({"1", "0"}), g({"1", "1", "0"}));
  EXPECT_LT(max_difference(map_R(s), parse_field(chart, {"1", "0"}), pts), 1e-15);
  EXPECT_LT(max_abs(map_r(pair, map_i(pair, h({"x1*x2"}))), pts), 1e-15);
  EXPECT_EQ(code_of([&] { map_R(P({"1", "0"}, {"1"})); }), ErrorCode::SideMismatch);
  EXPECT_EQ(code_of([&] { map_r(pair, h({"1"})); }), ErrorCode::ValueSpaceMismatch);
}

TEST_F(Se2Fixture, ZeroSectionsSatisfyEveryIdentityExactly) {
  const Section z = zero_section(pair, Side::P, chart);
  EXPECT_EQ(max_abs(map_R(map_J(z)), pts), 0.0);
  EXPECT_EQ(max_abs(bracket_sections(z, z).gamma, pts), 0.0);
  EXPECT_EQ(max_abs(map_J(z).X, pts), 0.0);
}

TEST(Diagram, EuclideanAndSphere) {
  for (const char* name : {"euclidean2", "sphere2"}) {
    const Model m = builtin_model(name);
    const DiagramReport report = check_diagram(m.pair, make_chart(2), 50, 17, 1e-12);
    EXPECT_TRUE(report.pass()) << name;
    EXPECT_EQ(report.samples, 50);
    for (const auto& c : report.checks) {
      EXPECT_GE(c.residual, 0.0);
      EXPECT_LT(c.residual, 1e-12) << name << ": " << c.name;
    }
  }
}

TEST(Diagram, PoincareSmoke) {
  const Model m = builtin_model("poincare");
  EXPECT_TRUE(check_diagram(m.pair, make_chart(4), 5, 3).pass());
}

class AlgebroidProperty : public ::testing::TestWithParam<const char*> {};

TEST_P(AlgebroidProperty, BracketJacobi) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 41);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Section a = gen.section(m.pair, Side::P, 2);
    const Section b = gen.section(m.pair, Side::P, 2);
    const Section c = gen.section(m.pair, Side::P, 2);
    const Section jac = bracket_sections(a, bracket_sections(b, c)) +
                        bracket_sections(b, bracket_sections(c, a)) +
                        bracket_sections(c, bracket_sections(a, b));
    worst = std::max(worst, section_difference(jac, zero_section(m.pair, Side::P, gen.chart()), {gen.point()}));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST_P(AlgebroidProperty, KernelBracketIsTheAction) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 42);
  for (int trial = 0; trial < 30; ++trial) {
    const Section s = gen.section(m.pair, Side::P, 2);
    const AlgebraField v = gen.algebra_field(m.pair, ValueSpace::H, 2);
    const Section lhs = bracket_sections(s, kernel_inject(m.pair, v, Side::P));
    const auto pt = gen.points(2);
    EXPECT_LT(max_abs(lhs.X, pt), 1e-8);
    EXPECT_LT(max_difference(lhs.gamma, rep_action(s, v), pt), 1e-8);
  }
}

TEST_P(AlgebroidProperty, AnchorIsABracketHomomorphism) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 43);
  for (int trial = 0; trial < 30; ++trial) {
    const Section a = gen.section(m.pair, Side::P, 3);
    const Section b = gen.section(m.pair, Side::P, 3);
    EXPECT_LT(max_difference(anchor(bracket_sections(a, b)), vf_bracket(anchor(a), anchor(b)), gen.points(2)), 1e-8);
  }
}

TEST_P(AlgebroidProperty, DiagramMapsAreModuleLinear) {
  const Model m = builtin_model(GetParam());
  SampleGenerator gen(make_chart(2), 44);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = gen.polynomial(1, 2);
    const Section s = gen.section(m.pair, Side::P, 2);
    const AlgebraField h = gen.algebra_field(m.pair, ValueSpace::H, 2);
    const AlgebraField g = gen.algebra_field(m.pair, ValueSpace::G, 2);
    const auto pt = gen.points(2);
    EXPECT_LT(section_difference(map_J(f * s), f * map_J(s), pt), 1e-14);
    EXPECT_LT(max_difference(map_R(map_J(f * s)), f * map_R(map_J(s)), pt), 1e-14);
    EXPECT_LT(max_difference(map_i(m.pair, AlgebraField(f * h, ValueSpace::H)), f * map_i(m.pair, h), pt), 1e-14);
    EXPECT_LT(max_difference(map_r(m.pair, AlgebraField(f * g, ValueSpace::G)), f * map_r(m.pair, g), pt), 1e-14);
    EXPECT_LT(section_difference(map_iota(m.pair, AlgebraField(f * g, ValueSpace::G)), f * map_iota(m.pair, g), pt), 1e-14);
  }
}

INSTANTIATE_TEST_SUITE_P(Models, AlgebroidProperty, ::testing::Values("euclidean2", "sphere2", "hyperbolic2"));
