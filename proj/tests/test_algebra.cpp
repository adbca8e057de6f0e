#include <gtest/gtest.h>

#include "cartan/algebra.hpp"
#include "cartan/error.hpp"
#include "cartan/random.hpp"

using namespace cartan;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd mat3(std::initializer_list<double> entries) {
  MatrixXd m(3, 3);
  auto it = entries.begin();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = *it++;
  return m;
}

const MatrixXd kJ = mat3({0, -1, 0, 1, 0, 0, 0, 0, 0});
const MatrixXd kP1 = mat3({0, 0, 1, 0, 0, 0, 0, 0, 0});
const MatrixXd kP2 = mat3({0, 0, 0, 0, 0, 1, 0, 0, 0});

MatrixLieAlgebra se2() { return MatrixLieAlgebra({kJ, kP1, kP2}); }

// so(3) with [L1, L2] = L3 and cyclic.
MatrixLieAlgebra so3() {
  return MatrixLieAlgebra({mat3({0, 0, 0, 0, 0, -1, 0, 1, 0}), mat3({0, 0, 1, 0, 0, 0, -1, 0, 0}),
                           mat3({0, -1, 0, 1, 0, 0, 0, 0, 0})});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ConfigError;
}

VectorXd unit(int m, int i) { return VectorXd::Unit(m, i); }

// Oracle: recompute the bracket through matrix commutators.
VectorXd commutator_oracle(const MatrixLieAlgebra& g, const VectorXd& a, const VectorXd& b) {
  const MatrixXd A = g.to_matrix(a);
  const MatrixXd B = g.to_matrix(b);
  return g.coordinates(A * B - B * A);
}

}  // namespace

TEST(Algebra, Se2StructureConstants) {
  const auto g = se2();
  EXPECT_EQ(g.dim(), 3);
  EXPECT_TRUE(g.bracket(unit(3, 0), unit(3, 1)).isApprox(unit(3, 2)));
  EXPECT_TRUE(g.bracket(unit(3, 0), unit(3, 2)).isApprox(-unit(3, 1)));
  EXPECT_LT(g.bracket(unit(3, 1), unit(3, 2)).norm(), 1e-15);
}

TEST(Algebra, DegenerateBases) {
  EXPECT_EQ(code_of([] { MatrixLieAlgebra({MatrixXd::Zero(3, 3)}); }), ErrorCode::DependentBasis);
  EXPECT_EQ(code_of([] { MatrixLieAlgebra({kP1, 2.0 * kP1}); }), ErrorCode::DependentBasis);
  // span{J, P1} is not closed: [J, P1] = P2.
  EXPECT_EQ(code_of([] { MatrixLieAlgebra({kJ, kP1}); }), ErrorCode::NotClosed);
}

TEST(Algebra, AbelianLine) {
  const MatrixLieAlgebra line({kJ});
  EXPECT_EQ(line.dim(), 1);
  EXPECT_TRUE(line.bracket_terms().empty());
  EXPECT_EQ(line.structure_constant(0, 0, 0), 0.0);
}

TEST(Algebra, ElementBracket) {
  const auto g = se2();
  const AlgebraElement J(g, unit(3, 0));
  const AlgebraElement P1(g, unit(3, 1));
  EXPECT_TRUE(bracket(J, P1).coeffs().isApprox(unit(3, 2)));
  EXPECT_LT(bracket(P1, P1).coeffs().norm(), 1e-15);
  const MatrixLieAlgebra so2({kJ});
  const AlgebraElement a(so2, VectorXd::Constant(1, 2.0));
  EXPECT_EQ(bracket(a, AlgebraElement(so2, VectorXd::Constant(1, -1.0))).coeffs()[0], 0.0);
  EXPECT_EQ(code_of([&] { bracket(J, a); }), ErrorCode::AlgebraMismatch);
  EXPECT_EQ(code_of([&] { g.bracket(unit(2, 0), unit(3, 0)); }), ErrorCode::AlgebraMismatch);
}

TEST(Algebra, Pairs) {
  const auto g = se2();
  const LiePair pair(g, {0});
  EXPECT_EQ(pair.q_indices(), (std::vector<int>{1, 2}));
  const LiePair line(g, {1});
  EXPECT_EQ(line.q_indices(), (std::vector<int>{0, 2}));
  EXPECT_EQ(code_of([] { LiePair(so3(), {0, 1}); }), ErrorCode::NotSubalgebra);
}

TEST(Algebra, QuotientProjection) {
  const LiePair pair(se2(), {0});
  VectorXd x(3);
  x << 2, 3, 0;
  EXPECT_TRUE(pair.quotient_project(x).isApprox(Eigen::Vector2d(3, 0)));
  EXPECT_LT(pair.quotient_project(5.0 * unit(3, 0)).norm(), 1e-15);
  EXPECT_TRUE(pair.quotient_project(unit(3, 1) + unit(3, 2)).isApprox(Eigen::Vector2d(1, 1)));
}

TEST(Algebra, ReductiveSplits) {
  const LiePair se(se2(), {0});
  const ReductiveSplit split(se, {1, 2});
  EXPECT_TRUE((split.pi_h() * split.i_h()).isIdentity());
  EXPECT_TRUE((split.pi_p() * split.i_p()).isIdentity());
  EXPECT_TRUE((split.i_h() * split.pi_h() + split.i_p() * split.pi_p()).isIdentity());

  const LiePair so(so3(), {2});
  EXPECT_NO_THROW(ReductiveSplit(so, {0, 1}));

  // sl(2): h = span{E}, p = span{H, F}; [E, F] = H has no h part, but [E, H] = -2E lies in h.
  MatrixXd E(2, 2), H(2, 2), F(2, 2);
  E << 0, 1, 0, 0;
  H << 1, 0, 0, -1;
  F << 0, 0, 1, 0;
  const LiePair sl(MatrixLieAlgebra({E, H, F}), {0});
  EXPECT_EQ(code_of([&] { ReductiveSplit(sl, {1, 2}); }), ErrorCode::NotHModule);
}

TEST(Algebra, BuiltinModels) {
  const Model e2 = builtin_model("euclidean", 2);
  EXPECT_EQ(e2.pair.dim_q(), 2);
  EXPECT_TRUE(e2.pair.g().basis()[0].isApprox(kJ));
  EXPECT_TRUE(e2.pair.g().basis()[1].isApprox(kP1));

  const Model s2 = builtin_model("sphere2");
  // [P1, P2] lands in h and is nonzero.
  const VectorXd c = s2.pair.g().bracket(unit(3, 1), unit(3, 2));
  EXPECT_TRUE(c.isApprox(unit(3, 0)));

  const Model p = builtin_model("poincare(1,3)");
  EXPECT_EQ(p.pair.dim_g(), 10);
  EXPECT_EQ(p.pair.dim_h(), 6);
  EXPECT_EQ(p.pair.dim_q(), 4);

  EXPECT_EQ(builtin_model("hyperbolic3").pair.dim_g(), 6);
  EXPECT_EQ(code_of([] { builtin_model("torus2"); }), ErrorCode::UnknownModel);
  EXPECT_EQ(code_of([] { builtin_model("poincare", 3); }), ErrorCode::UnknownModel);
}

TEST(Algebra, InvariantForms) {
  const auto so = so3();
  const InvariantForm tr = InvariantForm::trace(so);
  EXPECT_TRUE(tr.is_ad_invariant(so));
  EXPECT_NEAR(tr(unit(3, 0), unit(3, 0)), -2.0, 1e-15);
  // The identity is not ad-invariant on se(2).
  EXPECT_FALSE(InvariantForm::identity(3).is_ad_invariant(se2()));
  EXPECT_EQ(code_of([] { InvariantForm::trace(se2()); }), ErrorCode::Degenerate);
  MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  EXPECT_EQ(code_of([&] { InvariantForm{asym}; }), ErrorCode::NotSymmetric);
  const Model p = builtin_model("poincare", 4);
  const InvariantForm lorentz = InvariantForm::trace(p.pair.h_basis());
  EXPECT_LT(lorentz.ad_invariance_residual(p.pair.h_terms()), 1e-12);
}

TEST(AlgebraProperty, JacobiAndCommutatorAgreement) {
  Rng rng(2718);
  for (const char* name : {"euclidean3", "sphere3", "hyperbolic3", "poincare"}) {
    const Model m = builtin_model(name);
    const auto& g = m.pair.g();
    for (int trial = 0; trial < 20; ++trial) {
      VectorXd x(g.dim()), y(g.dim()), z(g.dim());
      for (int k = 0; k < g.dim(); ++k) {
        x[k] = rng.uniform(-1, 1);
        y[k] = rng.uniform(-1, 1);
        z[k] = rng.uniform(-1, 1);
      }
      const VectorXd jac = g.bracket(g.bracket(x, y), z) + g.bracket(g.bracket(y, z), x) +
                           g.bracket(g.bracket(z, x), y);
      EXPECT_LT(jac.norm(), 1e-10) << name;
      EXPECT_LT((g.bracket(x, y) - commutator_oracle(g, x, y)).norm(), 1e-12) << name;
      EXPECT_LT((g.bracket(x, y) + g.bracket(y, x)).norm(), 1e-15) << name;
    }
  }
}

TEST(AlgebraProperty, QuotientProjectionIsLinearWithKernelH) {
  Rng rng(11);
  const Model m = builtin_model("poincare");
  const auto& pair = m.pair;
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd x = VectorXd::Zero(pair.dim_g()), y = VectorXd::Zero(pair.dim_g());
    for (int k = 0; k < pair.dim_g(); ++k) {
      x[k] = rng.uniform(-1, 1);
      y[k] = rng.uniform(-1, 1);
    }
    const double a = rng.uniform(-2, 2);
    EXPECT_LT((pair.quotient_project(a * x + y) - a * pair.quotient_project(x) - pair.quotient_project(y)).norm(), 1e-14);
    VectorXd u(pair.dim_q());
    for (int k = 0; k < pair.dim_q(); ++k) u[k] = rng.uniform(-1, 1);
    // Surjective: zero-padded lift maps back onto u.
    EXPECT_LT((pair.quotient_project(pair.quotient().transpose() * u) - u).norm(), 1e-15);
    VectorXd hv(pair.dim_h());
    for (int k = 0; k < pair.dim_h(); ++k) hv[k] = rng.uniform(-1, 1);
    EXPECT_LT(pair.quotient_project(pair.inclusion() * hv).norm(), 1e-15);
  }
}
