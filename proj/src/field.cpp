#include "cartan/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cartan/error.hpp"

namespace cartan {

namespace {

Jet zero_jet(int nvars, int order) { return Jet::constant(nvars, order, 0.0); }

// d_mu of every component of f at pt, one vector per mu.
std::vector<std::vector<Jet>> gradient_jets(const Field& f, Point pt, int order) {
  const Chart& chart = *f.chart();
  const int n = chart.n();
  std::vector<std::vector<Jet>> grad(n);
  if (chart.backend() == Backend::Dual) {
    const auto up = f.jets(pt, order + 1);
    for (int mu = 0; mu < n; ++mu) {
      grad[mu].reserve(up.size());
      for (const auto& j : up) grad[mu].push_back(j.derivative(mu));
    }
    return grad;
  }
  const double h = chart.fd_step();
  std::vector<double> shifted(pt.begin(), pt.end());
  for (int mu = 0; mu < n; ++mu) {
    shifted[mu] = pt[mu] + h;
    auto plus = f.jets(shifted, order);
    shifted[mu] = pt[mu] - h;
    const auto minus = f.jets(shifted, order);
    shifted[mu] = pt[mu];
    for (std::size_t c = 0; c < plus.size(); ++c) {
      plus[c] -= minus[c];
      plus[c] *= 1.0 / (2.0 * h);
    }
    grad[mu] = std::move(plus);
  }
  return grad;
}

}  // namespace

Field::Field(ChartPtr chart, int components, Evaluator eval)
    : chart_(std::move(chart)), components_(components), eval_(std::move(eval)) {
  if (!chart_) throw std::invalid_argument("field requires a chart");
}

std::vector<Jet> Field::jets(Point pt, int order) const {
  auto out = eval_(pt, order);
  if (static_cast<int>(out.size()) != components_) {
    throw std::logic_error("field evaluator returned the wrong number of components");
  }
  return out;
}

std::vector<double> Field::values(Point pt) const {
  if (!chart_->contains(pt)) throw Error(ErrorCode::OutOfChart, "point outside the chart box");
  const auto js = jets(pt, 0);
  std::vector<double> out(js.size());
  for (std::size_t i = 0; i < js.size(); ++i) {
    out[i] = js[i].value();
    if (!std::isfinite(out[i])) throw Error(ErrorCode::EvaluationError, "non-finite field value");
  }
  return out;
}

Eigen::VectorXd Field::vector(Point pt) const {
  const auto v = values(pt);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string to_string(ValueSpace space) {
  switch (space) {
    case ValueSpace::H: return "h";
    case ValueSpace::G: return "g";
    case ValueSpace::Quotient: return "g/h";
    case ValueSpace::P: return "p";
  }
  return "?";
}

void require_same_chart(const Field& a, const Field& b) {
  if (a.chart() != b.chart() && !(*a.chart() == *b.chart())) {
    throw Error(ErrorCode::ChartMismatch, "fields live on different charts");
  }
}

Field constant_field(ChartPtr chart, std::vector<double> values) {
  const int n = chart->n();
  const int m = static_cast<int>(values.size());
  return Field(std::move(chart), m, [values = std::move(values), n](Point, int order) {
    std::vector<Jet> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(Jet::constant(n, order, v));
    return out;
  });
}

Field zero_field(ChartPtr chart, int components) {
  return constant_field(std::move(chart), std::vector<double>(components, 0.0));
}

Field coordinate_field(ChartPtr chart, int index) {
  const int n = chart->n();
  if (index < 0 || index >= n) throw Error(ErrorCode::UnknownVariable, "coordinate index");
  return Field(std::move(chart), 1, [n, index](Point pt, int order) {
    return std::vector<Jet>{Jet::variable(n, order, index, pt[index])};
  });
}

Field coordinate_vector(ChartPtr chart, int index) {
  const int n = chart->n();
  if (index < 0 || index >= n) throw Error(ErrorCode::UnknownVariable, "coordinate index");
  std::vector<double> v(n, 0.0);
  v[index] = 1.0;
  return constant_field(std::move(chart), std::move(v));
}

Field expression_field(ChartPtr chart, std::vector<Expression> exprs) {
  const int n = chart->n();
  for (const auto& e : exprs) {
    if (e.nvars() != n) throw Error(ErrorCode::ChartMismatch, "expression variable count");
  }
  const int m = static_cast<int>(exprs.size());
  return Field(std::move(chart), m, [exprs = std::move(exprs), n](Point pt, int order) {
    std::vector<Jet> vars;
    vars.reserve(n);
    for (int v = 0; v < n; ++v) vars.push_back(Jet::variable(n, order, v, pt[v]));
    std::vector<Jet> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.evaluate(vars));
    return out;
  });
}

Field parse_field(ChartPtr chart, const std::vector<std::string>& sources) {
  std::vector<Expression> exprs;
  exprs.reserve(sources.size());
  for (const auto& s : sources) exprs.push_back(parse_expression(s, *chart));
  return expression_field(std::move(chart), std::move(exprs));
}

Field operator+(const Field& a, const Field& b) {
  require_same_chart(a, b);
  if (a.components() != b.components()) {
    throw Error(ErrorCode::DimensionMismatch, "adding fields of different sizes");
  }
  return Field(a.chart(), a.components(), [a, b](Point pt, int order) {
    auto x = a.jets(pt, order);
    const auto y = b.jets(pt, order);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
  });
}

Field operator-(const Field& a, const Field& b) {
  require_same_chart(a, b);
  if (a.components() != b.components()) {
    throw Error(ErrorCode::DimensionMismatch, "subtracting fields of different sizes");
  }
  return Field(a.chart(), a.components(), [a, b](Point pt, int order) {
    auto x = a.jets(pt, order);
    const auto y = b.jets(pt, order);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
  });
}

Field operator-(const Field& a) { return -1.0 * a; }

Field operator*(double s, const Field& f) {
  return Field(f.chart(), f.components(), [s, f](Point pt, int order) {
    auto x = f.jets(pt, order);
    for (auto& j : x) j *= s;
    return x;
  });
}

Field operator*(const Field& scalar, const Field& f) {
  require_same_chart(scalar, f);
  if (scalar.components() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a scalar");
  return Field(f.chart(), f.components(), [scalar, f](Point pt, int order) {
    const Jet s = scalar.jets(pt, order)[0];
    auto x = f.jets(pt, order);
    for (auto& j : x) j *= s;
    return x;
  });
}

Field component(const Field& f, int index) { return select(f, {index}); }

Field select(const Field& f, const std::vector<int>& indices) {
  for (int i : indices) {
    if (i < 0 || i >= f.components()) throw Error(ErrorCode::DimensionMismatch, "component index");
  }
  return Field(f.chart(), static_cast<int>(indices.size()), [f, indices](Point pt, int order) {
    const auto x = f.jets(pt, order);
    std::vector<Jet> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(x[i]);
    return out;
  });
}

Field embed(const Field& f, const std::vector<int>& indices, int total) {
  if (static_cast<int>(indices.size()) != f.components()) {
    throw Error(ErrorCode::DimensionMismatch, "embedding needs one slot per component");
  }
  const int n = f.chart()->n();
  return Field(f.chart(), total, [f, indices, total, n](Point pt, int order) {
    const auto x = f.jets(pt, order);
    std::vector<Jet> out(total, zero_jet(n, order));
    for (std::size_t c = 0; c < indices.size(); ++c) out[indices[c]] = x[c];
    return out;
  });
}

Field concat(const std::vector<Field>& parts) {
  if (parts.empty()) throw Error(ErrorCode::DimensionMismatch, "nothing to concatenate");
  int total = 0;
  for (const auto& p : parts) {
    require_same_chart(parts.front(), p);
    total += p.components();
  }
  return Field(parts.front().chart(), total, [parts](Point pt, int order) {
    std::vector<Jet> out;
    for (const auto& p : parts) {
      auto x = p.jets(pt, order);
      std::move(x.begin(), x.end(), std::back_inserter(out));
    }
    return out;
  });
}

Field linear_map(const Eigen::MatrixXd& m, const Field& f) {
  if (m.cols() != f.components()) {
    throw Error(ErrorCode::DimensionMismatch, "linear map does not match field size");
  }
  const int n = f.chart()->n();
  return Field(f.chart(), static_cast<int>(m.rows()), [m, f, n](Point pt, int order) {
    const auto x = f.jets(pt, order);
    std::vector<Jet> out(m.rows(), zero_jet(n, order));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (m(r, c) != 0.0) out[r].add_scaled(x[c], m(r, c));
      }
    }
    return out;
  });
}

Field bilinear(const Field& a, const Field& b, const std::vector<BracketTerm>& terms, int out_dim) {
  require_same_chart(a, b);
  const int n = a.chart()->n();
  return Field(a.chart(), out_dim, [a, b, terms, out_dim, n](Point pt, int order) {
    const auto x = a.jets(pt, order);
    const auto y = b.jets(pt, order);
    std::vector<Jet> out(out_dim, zero_jet(n, order));
    for (const auto& t : terms) {
      if (t.c == 1.0) {
        out[t.k].add_product(x[t.i], y[t.j]);
      } else {
        out[t.k].add_scaled(x[t.i] * y[t.j], t.c);
      }
    }
    return out;
  });
}

Field contract(const Field& X, const std::vector<Field>& fs) {
  if (static_cast<int>(fs.size()) != X.components() || fs.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "contraction needs one component per coordinate");
  }
  for (const auto& f : fs) {
    require_same_chart(X, f);
    if (f.components() != fs.front().components()) {
      throw Error(ErrorCode::DimensionMismatch, "contracted fields differ in size");
    }
  }
  const int n = X.chart()->n();
  const int m = fs.front().components();
  return Field(X.chart(), m, [X, fs, n, m](Point pt, int order) {
    const auto x = X.jets(pt, order);
    std::vector<Jet> out(m, zero_jet(n, order));
    for (std::size_t mu = 0; mu < fs.size(); ++mu) {
      const auto f = fs[mu].jets(pt, order);
      for (int k = 0; k < m; ++k) out[k].add_product(x[mu], f[k]);
    }
    return out;
  });
}

Field partial(const Field& f, int mu) {
  const Chart& chart = *f.chart();
  if (mu < 0 || mu >= chart.n()) throw Error(ErrorCode::UnknownVariable, "derivative index");
  if (chart.backend() == Backend::Dual) {
    return Field(f.chart(), f.components(), [f, mu](Point pt, int order) {
      auto up = f.jets(pt, order + 1);
      std::vector<Jet> out;
      out.reserve(up.size());
      for (const auto& j : up) out.push_back(j.derivative(mu));
      return out;
    });
  }
  const double h = chart.fd_step();
  return Field(f.chart(), f.components(), [f, mu, h](Point pt, int order) {
    std::vector<double> shifted(pt.begin(), pt.end());
    shifted[mu] += h;
    auto plus = f.jets(shifted, order);
    shifted[mu] = pt[mu] - h;
    const auto minus = f.jets(shifted, order);
    for (std::size_t c = 0; c < plus.size(); ++c) {
      plus[c] -= minus[c];
      plus[c] *= 1.0 / (2.0 * h);
    }
    return plus;
  });
}

Field directional_derivative(const Field& X, const Field& f) {
  require_same_chart(X, f);
  if (X.components() != X.chart()->n()) {
    throw Error(ErrorCode::DimensionMismatch, "expected a vector field");
  }
  const int n = X.chart()->n();
  return Field(f.chart(), f.components(), [X, f, n](Point pt, int order) {
    const auto x = X.jets(pt, order);
    const auto grad = gradient_jets(f, pt, order);
    std::vector<Jet> out(f.components(), zero_jet(n, order));
    for (int mu = 0; mu < n; ++mu) {
      for (int k = 0; k < f.components(); ++k) out[k].add_product(x[mu], grad[mu][k]);
    }
    return out;
  });
}

double directional_derivative(const Field& X, const Field& f, Point pt) {
  if (f.components() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a scalar field");
  return directional_derivative(X, f).values(pt)[0];
}

Field vf_bracket(const Field& X, const Field& Y) {
  require_same_chart(X, Y);
  return directional_derivative(X, Y) - directional_derivative(Y, X);
}

double integrate(const Field& scalar) {
  if (scalar.components() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a scalar");
  return integrate(*scalar.chart(), [&](Point pt) { return scalar.jets(pt, 0)[0].value(); });
}

double integrate(const Chart& chart, const std::function<double(Point)>& f) {
  const auto& rule = chart.quadrature();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.point(i));
  return sum;
}

double max_difference(const Field& a, const Field& b, const std::vector<std::vector<double>>& pts) {
  if (a.components() != b.components()) {
    throw Error(ErrorCode::DimensionMismatch, "comparing fields of different sizes");
  }
  double worst = 0.0;
  for (const auto& p : pts) {
    const auto x = a.values(p);
    const auto y = b.values(p);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

double max_abs(const Field& a, const std::vector<std::vector<double>>& pts) {
  double worst = 0.0;
  for (const auto& p : pts) {
    for (double v : a.values(p)) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace cartan
