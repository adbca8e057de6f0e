#pragma once

// Local sections X + gamma of the two Atiyah algebroids over a chart, their
// bracket and anchor, and the coordinate forms of the maps relating the
// P-side (h-valued) and Q-side (g-valued) descriptions.

#include <cstdint>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/field.hpp"
#include "cartan/random.hpp"

namespace cartan {

enum class Side { P, Q };

struct Section {
  LiePair pair;
  Side side = Side::P;
  VectorField X;
  AlgebraField gamma;  // h-valued on side P, g-valued on side Q

  const ChartPtr& chart() const { return X.chart(); }
};

/// Validates value spaces, component counts and chart consistency.
Section make_section(const LiePair& pair, Side side, VectorField X, AlgebraField gamma);
Section zero_section(const LiePair& pair, Side side, const ChartPtr& chart);

Section operator+(const Section& a, const Section& b);
Section operator-(const Section& a, const Section& b);
Section operator*(double s, const Section& a);
/// Module multiplication by a scalar field.
Section operator*(const ScalarField& f, const Section& a);

AlgebraField make_algebra_field(const LiePair& pair, ValueSpace space, Field f);
int value_dim(const LiePair& pair, ValueSpace space);

/// Pointwise Lie bracket. h x h -> h, g x g -> g, mixed arguments are embedded into g first.
AlgebraField field_bracket(const LiePair& pair, const AlgebraField& a, const AlgebraField& b);

VectorField anchor(const Section& s);
Section kernel_inject(const LiePair& pair, const AlgebraField& gamma, Side side);
Section bracket_sections(const Section& a, const Section& b);
/// X.w + [gamma, w], with gamma embedded through i_h when w is g-valued.
AlgebraField rep_action(const Section& s, const AlgebraField& w);

// Coordinate forms of the diagram maps.
AlgebraField map_i(const LiePair& pair, const AlgebraField& gamma);     // h -> g on side P
AlgebraField map_j(const LiePair& pair, const AlgebraField& gamma);     // h (P) -> g (Q)
AlgebraField map_ihat(const LiePair& pair, const AlgebraField& gamma);  // g (P) -> g (Q)
AlgebraField map_ihat_inverse(const LiePair& pair, const AlgebraField& gamma);
AlgebraField map_r(const LiePair& pair, const AlgebraField& gamma);     // g (P) -> g/h
AlgebraField map_rhat(const LiePair& pair, const AlgebraField& gamma);  // g (Q) -> g/h
Section map_iota(const LiePair& pair, const AlgebraField& gamma);       // g (P) -> Q sections
Section map_J(const Section& s);                                        // P sections -> Q sections
AlgebraField map_R(const Section& s);                                   // Q sections -> g/h

/// Max residual of one identity over the sample set.
struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

CheckResult make_check(std::string name, double residual, double tolerance);

struct DiagramReport {
  std::vector<CheckResult> checks;
  int samples = 0;
  std::uint64_t seed = 0;
  bool pass() const;
};

DiagramReport check_diagram(const LiePair& pair, const ChartPtr& chart, int samples,
                            std::uint64_t seed, double tol = 1e-12);

/// Random polynomial data used by the probes.
class SampleGenerator {
 public:
  SampleGenerator(ChartPtr chart, std::uint64_t seed) : chart_(std::move(chart)), rng_(seed) {}

  Field polynomial(int components, int degree);
  AlgebraField algebra_field(const LiePair& pair, ValueSpace space, int degree);
  Section section(const LiePair& pair, Side side, int degree);
  std::vector<double> point();
  std::vector<std::vector<double>> points(int count);
  Rng& rng() { return rng_; }
  const ChartPtr& chart() const { return chart_; }

 private:
  ChartPtr chart_;
  Rng rng_;
};

/// Component-wise max difference of two sections over points (vector and algebra parts).
double section_difference(const Section& a, const Section& b,
                          const std::vector<std::vector<double>>& pts);

}  // namespace cartan
