#include "cartan/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "cartan/chart.hpp"
#include "cartan/error.hpp"
#include "cartan/random.hpp"

namespace cartan {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(NodeKind kind, std::vector<NodePtr> args = {}) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->args = std::move(args);
  return node;
}

NodePtr number_node(double value) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Number;
  node->number = value;
  return node;
}

NodePtr randpoly_node(int degree, std::uint64_t seed, int nvars) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::RandPoly;
  node->index = degree;
  node->seed = seed;
  node->coeffs = randpoly_coefficients(nvars, degree, seed);
  return node;
}

class Parser {
 public:
  Parser(std::string_view src, int nvars) : src_(src), nvars_(nvars) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == src_.size()) throw SyntaxError(pos_, "expression");
    NodePtr e = expr();
    skip_space();
    if (pos_ != src_.size()) throw SyntaxError(pos_, "operator or end of input");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(pos_, std::string("'") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(NodeKind::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make_node(NodeKind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(NodeKind::Mul, {lhs, factor()});
      } else if (accept('/')) {
        lhs = make_node(NodeKind::Div, {lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (accept('^')) {
      auto node = std::make_shared<ExprNode>();
      node->kind = NodeKind::Pow;
      node->index = integer();
      node->args = {base};
      return node;
    }
    return base;
  }

  int integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == start) throw SyntaxError(start, "integer");
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc()) throw SyntaxError(start, "integer that fits in int");
    return value;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw SyntaxError(start, "digit");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError(pos_, "exponent digits");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw SyntaxError(start, "number");
    return number_node(value);
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "number, variable, function or '('");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return make_node(NodeKind::Neg, {atom()});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw SyntaxError(pos_, "number, variable, function or '('");
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    if (src_[pos_] == 'x' && pos_ + 1 < src_.size() &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      const int index = integer();
      if (index < 1 || index > nvars_) {
        throw Error(ErrorCode::UnknownVariable,
                    "x" + std::to_string(index) + " at offset " + std::to_string(start) +
                        " on a chart of dimension " + std::to_string(nvars_));
      }
      auto node = std::make_shared<ExprNode>();
      node->kind = NodeKind::Variable;
      node->index = index - 1;
      return node;
    }
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    NodeKind kind;
    if (name == "sin") {
      kind = NodeKind::Sin;
    } else if (name == "cos") {
      kind = NodeKind::Cos;
    } else if (name == "exp") {
      kind = NodeKind::Exp;
    } else if (name == "randpoly") {
      expect('(');
      const int degree = integer();
      expect(',');
      const int seed = integer();
      expect(')');
      return randpoly_node(degree, static_cast<std::uint64_t>(seed), nvars_);
    } else if (name == "x") {
      throw SyntaxError(pos_, "variable index");
    } else {
      throw SyntaxError(start, "number, variable, function or '('");
    }
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return make_node(kind, {arg});
  }

  std::string_view src_;
  int nvars_;
  std::size_t pos_ = 0;
};

Jet eval_randpoly(const ExprNode& node, std::span<const Jet> vars) {
  const int nvars = static_cast<int>(vars.size());
  const auto monomials = monomials_up_to(nvars, node.index);
  // powers[v][k] = x_v^k
  std::vector<std::vector<Jet>> powers(nvars);
  for (int v = 0; v < nvars; ++v) {
    powers[v].push_back(Jet::constant(vars[v].nvars(), vars[v].order(), 1.0));
    for (int k = 1; k <= node.index; ++k) powers[v].push_back(powers[v].back() * vars[v]);
  }
  Jet sum = Jet::constant(vars[0].nvars(), vars[0].order(), 0.0);
  for (std::size_t t = 0; t < monomials.size(); ++t) {
    Jet term = Jet::constant(sum.nvars(), sum.order(), node.coeffs[t]);
    for (int v = 0; v < nvars; ++v) {
      if (monomials[t][v] > 0) term *= powers[v][monomials[t][v]];
    }
    sum += term;
  }
  return sum;
}

Jet eval_node(const ExprNode& node, std::span<const Jet> vars) {
  const Jet& ref = vars[0];
  switch (node.kind) {
    case NodeKind::Number:
      return Jet::constant(ref.nvars(), ref.order(), node.number);
    case NodeKind::Variable:
      return vars[node.index];
    case NodeKind::Add:
      return eval_node(*node.args[0], vars) + eval_node(*node.args[1], vars);
    case NodeKind::Sub:
      return eval_node(*node.args[0], vars) - eval_node(*node.args[1], vars);
    case NodeKind::Mul:
      return eval_node(*node.args[0], vars) * eval_node(*node.args[1], vars);
    case NodeKind::Div:
      return eval_node(*node.args[0], vars) / eval_node(*node.args[1], vars);
    case NodeKind::Pow:
      return pow(eval_node(*node.args[0], vars), static_cast<unsigned>(node.index));
    case NodeKind::Neg:
      return -eval_node(*node.args[0], vars);
    case NodeKind::Sin:
      return sin(eval_node(*node.args[0], vars));
    case NodeKind::Cos:
      return cos(eval_node(*node.args[0], vars));
    case NodeKind::Exp:
      return exp(eval_node(*node.args[0], vars));
    case NodeKind::RandPoly:
      return eval_randpoly(node, vars);
  }
  throw Error(ErrorCode::EvaluationError, "unknown expression node");
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case NodeKind::Number:
      if (a.number != b.number) return false;
      break;
    case NodeKind::Variable:
    case NodeKind::Pow:
      if (a.index != b.index) return false;
      break;
    case NodeKind::RandPoly:
      if (a.index != b.index || a.seed != b.seed) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal_nodes(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void print(const ExprNode& node, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*node.args[0], out);
    out += op;
    print(*node.args[1], out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    print(*node.args[0], out);
    out += ')';
  };
  switch (node.kind) {
    case NodeKind::Number:
      if (node.number < 0.0 || std::signbit(node.number)) {
        out += "-" + format_number(-node.number);
      } else {
        out += format_number(node.number);
      }
      break;
    case NodeKind::Variable:
      out += "x" + std::to_string(node.index + 1);
      break;
    case NodeKind::Add: binary(" + "); break;
    case NodeKind::Sub: binary(" - "); break;
    case NodeKind::Mul: binary(" * "); break;
    case NodeKind::Div: binary(" / "); break;
    case NodeKind::Pow:
      out += '(';
      print(*node.args[0], out);
      out += "^" + std::to_string(node.index) + ")";
      break;
    case NodeKind::Neg:
      out += '-';
      print(*node.args[0], out);
      break;
    case NodeKind::Sin: call("sin"); break;
    case NodeKind::Cos: call("cos"); break;
    case NodeKind::Exp: call("exp"); break;
    case NodeKind::RandPoly:
      out += "randpoly(" + std::to_string(node.index) + "," + std::to_string(node.seed) + ")";
      break;
  }
}

}  // namespace

Expression::Expression(std::shared_ptr<const ExprNode> root, int nvars)
    : root_(std::move(root)), nvars_(nvars) {}

Expression Expression::constant(double value, int nvars) {
  return Expression(number_node(value), nvars);
}

Expression Expression::variable(int index, int nvars) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Variable;
  node->index = index;
  return Expression(node, nvars);
}

Expression Expression::randpoly(int degree, std::uint64_t seed, int nvars) {
  return Expression(randpoly_node(degree, seed, nvars), nvars);
}

Jet Expression::evaluate(std::span<const Jet> vars) const {
  if (static_cast<int>(vars.size()) != nvars_) {
    throw Error(ErrorCode::DimensionMismatch, "expression evaluated with wrong variable count");
  }
  return eval_node(*root_, vars);
}

double Expression::evaluate(std::span<const double> pt) const {
  std::vector<Jet> vars;
  vars.reserve(pt.size());
  for (std::size_t v = 0; v < pt.size(); ++v) {
    vars.push_back(Jet::variable(nvars_, 0, static_cast<int>(v), pt[v]));
  }
  return evaluate(vars).value();
}

bool Expression::operator==(const Expression& other) const {
  return nvars_ == other.nvars_ && equal_nodes(*root_, *other.root_);
}

Expression parse_expression(std::string_view source, int nvars) {
  return Expression(Parser(source, nvars).parse(), nvars);
}

Expression parse_expression(std::string_view source, const Chart& chart) {
  return parse_expression(source, chart.n());
}

std::string to_string(const Expression& expr) {
  std::string out;
  print(expr.root(), out);
  return out;
}

}  // namespace cartan
