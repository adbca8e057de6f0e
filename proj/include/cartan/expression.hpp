#pragma once

// Field expressions over chart coordinates x1..xn.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := number | 'x' index | 'sin(' expr ')' | 'cos(' expr ')' | 'exp(' expr ')'
//           | 'randpoly(' integer ',' integer ')' | '(' expr ')' | '-' atom
//
// A leading minus binds to the atom only, so "-x1^2" means (-x1)^2.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cartan/jet.hpp"

namespace cartan {

class Chart;

enum class NodeKind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, RandPoly };

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;          // Number
  int index = 0;                // Variable (0-based), Pow exponent, RandPoly degree
  std::uint64_t seed = 0;       // RandPoly
  std::vector<double> coeffs;   // RandPoly coefficients
  std::vector<std::shared_ptr<const ExprNode>> args;
};

class Expression {
 public:
  Expression() = default;
  Expression(std::shared_ptr<const ExprNode> root, int nvars);

  static Expression constant(double value, int nvars);
  static Expression variable(int index, int nvars);
  static Expression randpoly(int degree, std::uint64_t seed, int nvars);

  const ExprNode& root() const { return *root_; }
  int nvars() const { return nvars_; }

  Jet evaluate(std::span<const Jet> vars) const;
  double evaluate(std::span<const double> pt) const;

  bool operator==(const Expression& other) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  int nvars_ = 0;
};

Expression parse_expression(std::string_view source, int nvars);
Expression parse_expression(std::string_view source, const Chart& chart);

/// Canonical text; parsing it back yields an equal tree.
std::string to_string(const Expression& expr);

}  // namespace cartan
