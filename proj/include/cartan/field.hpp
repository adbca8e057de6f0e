#pragma once

// Fields on a chart are closures from a base point to Taylor jets of their
// components. Derived fields (derivatives, brackets, products) compose these
// closures, so nothing is sampled onto a grid until a value is requested.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"
#include "cartan/chart.hpp"
#include "cartan/expression.hpp"
#include "cartan/jet.hpp"

namespace cartan {

using Point = std::span<const double>;

class Field {
 public:
  /// Returns the jets of every component at `pt`, all of the requested order.
  using Evaluator = std::function<std::vector<Jet>(Point pt, int order)>;

  Field() = default;
  Field(ChartPtr chart, int components, Evaluator eval);

  const ChartPtr& chart() const { return chart_; }
  int components() const { return components_; }
  bool valid() const { return static_cast<bool>(eval_); }

  /// No bounds check; used internally where finite-difference stencils leave the box.
  std::vector<Jet> jets(Point pt, int order) const;
  /// Component values at a point of the chart; throws OutOfChart outside it.
  std::vector<double> values(Point pt) const;
  Eigen::VectorXd vector(Point pt) const;

 private:
  ChartPtr chart_;
  int components_ = 0;
  Evaluator eval_;
};

using ScalarField = Field;
using VectorField = Field;

/// Where the coefficients of an algebra-valued field live.
enum class ValueSpace { H, G, Quotient, P };

std::string to_string(ValueSpace space);

class AlgebraField : public Field {
 public:
  AlgebraField() = default;
  AlgebraField(Field field, ValueSpace space) : Field(std::move(field)), space_(space) {}

  ValueSpace space() const { return space_; }

 private:
  ValueSpace space_ = ValueSpace::G;
};

void require_same_chart(const Field& a, const Field& b);

Field constant_field(ChartPtr chart, std::vector<double> values);
Field zero_field(ChartPtr chart, int components);
/// The coordinate function x_{index+1}.
Field coordinate_field(ChartPtr chart, int index);
/// The coordinate vector field d/dx_{index+1}.
Field coordinate_vector(ChartPtr chart, int index);
Field expression_field(ChartPtr chart, std::vector<Expression> exprs);
Field parse_field(ChartPtr chart, const std::vector<std::string>& sources);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator-(const Field& a);
Field operator*(double s, const Field& f);
/// Pointwise product of a scalar field with every component of f.
Field operator*(const Field& scalar, const Field& f);

Field component(const Field& f, int index);
Field select(const Field& f, const std::vector<int>& indices);
/// Places the components of f into slots `indices` of a zero field with `total` components.
Field embed(const Field& f, const std::vector<int>& indices, int total);
Field concat(const std::vector<Field>& parts);
/// Constant linear map on components: (M f)_r = sum_c M(r, c) f_c.
Field linear_map(const Eigen::MatrixXd& m, const Field& f);
/// out_k = sum over terms c a_i b_j.
Field bilinear(const Field& a, const Field& b, const std::vector<BracketTerm>& terms, int out_dim);
/// Sum over mu of X^mu times f_mu, with fs.size() == X.components().
Field contract(const Field& X, const std::vector<Field>& fs);

/// Partial derivative along coordinate mu, taken with the chart's backend.
Field partial(const Field& f, int mu);
/// Componentwise X^mu d_mu f.
Field directional_derivative(const Field& X, const Field& f);
double directional_derivative(const Field& X, const Field& f, Point pt);
/// [X, Y]^k = X^j d_j Y^k - Y^j d_j X^k
Field vf_bracket(const Field& X, const Field& Y);

/// Tensor-product composite Simpson over the chart box.
double integrate(const Field& scalar);
double integrate(const Chart& chart, const std::function<double(Point)>& f);

/// Maximum component-wise absolute difference of two fields over the given points.
double max_difference(const Field& a, const Field& b, const std::vector<std::vector<double>>& pts);
double max_abs(const Field& a, const std::vector<std::vector<double>>& pts);

}  // namespace cartan
