#include "cartan/algebroid.hpp"

#include <algorithm>
#include <cmath>

#include "cartan/error.hpp"

namespace cartan {

namespace {

void require_space(const AlgebraField& f, ValueSpace space, const char* what) {
  if (f.space() != space) {
    throw Error(ErrorCode::ValueSpaceMismatch, std::string(what) + " expects a " +
                                                   to_string(space) + "-valued field, got " +
                                                   to_string(f.space()));
  }
}

void require_compatible(const Section& a, const Section& b) {
  if (a.side != b.side) throw Error(ErrorCode::SideMismatch, "sections live on different sides");
  if (!a.pair.same_as(b.pair)) throw Error(ErrorCode::AlgebraMismatch, "sections use different pairs");
  require_same_chart(a.X, b.X);
}

ValueSpace gamma_space(Side side) { return side == Side::P ? ValueSpace::H : ValueSpace::G; }

std::vector<BracketTerm> swapped(const std::vector<BracketTerm>& terms) {
  std::vector<BracketTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({t.j, t.i, t.k, -t.c});
  return out;
}

}  // namespace

int value_dim(const LiePair& pair, ValueSpace space) {
  switch (space) {
    case ValueSpace::H: return pair.dim_h();
    case ValueSpace::G: return pair.dim_g();
    case ValueSpace::Quotient:
    case ValueSpace::P: return pair.dim_q();
  }
  return 0;
}

AlgebraField make_algebra_field(const LiePair& pair, ValueSpace space, Field f) {
  if (f.components() != value_dim(pair, space)) {
    throw Error(ErrorCode::DimensionMismatch,
                "a " + to_string(space) + "-valued field needs " +
                    std::to_string(value_dim(pair, space)) + " components, got " +
                    std::to_string(f.components()));
  }
  return AlgebraField(std::move(f), space);
}

Section make_section(const LiePair& pair, Side side, VectorField X, AlgebraField gamma) {
  if (X.components() != X.chart()->n()) {
    throw Error(ErrorCode::DimensionMismatch, "vector part needs one component per coordinate");
  }
  require_space(gamma, gamma_space(side), "section");
  if (gamma.components() != value_dim(pair, gamma.space())) {
    throw Error(ErrorCode::DimensionMismatch, "algebra part has the wrong number of components");
  }
  require_same_chart(X, gamma);
  return Section{pair, side, std::move(X), std::move(gamma)};
}

Section zero_section(const LiePair& pair, Side side, const ChartPtr& chart) {
  const ValueSpace space = gamma_space(side);
  return make_section(pair, side, zero_field(chart, chart->n()),
                      AlgebraField(zero_field(chart, value_dim(pair, space)), space));
}

Section operator+(const Section& a, const Section& b) {
  require_compatible(a, b);
  return Section{a.pair, a.side, a.X + b.X, AlgebraField(a.gamma + b.gamma, a.gamma.space())};
}

Section operator-(const Section& a, const Section& b) {
  require_compatible(a, b);
  return Section{a.pair, a.side, a.X - b.X, AlgebraField(a.gamma - b.gamma, a.gamma.space())};
}

Section operator*(double s, const Section& a) {
  return Section{a.pair, a.side, s * a.X, AlgebraField(s * a.gamma, a.gamma.space())};
}

Section operator*(const ScalarField& f, const Section& a) {
  return Section{a.pair, a.side, f * a.X, AlgebraField(f * a.gamma, a.gamma.space())};
}

AlgebraField field_bracket(const LiePair& pair, const AlgebraField& a, const AlgebraField& b) {
  const ValueSpace sa = a.space();
  const ValueSpace sb = b.space();
  if (sa == ValueSpace::H && sb == ValueSpace::H) {
    return AlgebraField(bilinear(a, b, pair.h_terms(), pair.dim_h()), ValueSpace::H);
  }
  if (sa == ValueSpace::G && sb == ValueSpace::G) {
    return AlgebraField(bilinear(a, b, pair.g().bracket_terms(), pair.dim_g()), ValueSpace::G);
  }
  if (sa == ValueSpace::H && sb == ValueSpace::G) {
    return AlgebraField(bilinear(a, b, pair.hg_terms(), pair.dim_g()), ValueSpace::G);
  }
  if (sa == ValueSpace::G && sb == ValueSpace::H) {
    return AlgebraField(bilinear(a, b, swapped(pair.hg_terms()), pair.dim_g()), ValueSpace::G);
  }
  throw Error(ErrorCode::ValueSpaceMismatch, "bracket of " + to_string(sa) + " and " +
                                                 to_string(sb) + " values is undefined");
}

VectorField anchor(const Section& s) { return s.X; }

Section kernel_inject(const LiePair& pair, const AlgebraField& gamma, Side side) {
  require_space(gamma, gamma_space(side), "kernel injection");
  return make_section(pair, side, zero_field(gamma.chart(), gamma.chart()->n()), gamma);
}

Section bracket_sections(const Section& a, const Section& b) {
  require_compatible(a, b);
  const Field alg = directional_derivative(a.X, b.gamma) - directional_derivative(b.X, a.gamma) +
                    field_bracket(a.pair, a.gamma, b.gamma);
  return Section{a.pair, a.side, vf_bracket(a.X, b.X), AlgebraField(alg, a.gamma.space())};
}

AlgebraField rep_action(const Section& s, const AlgebraField& w) {
  if (w.space() != ValueSpace::H && w.space() != ValueSpace::G) {
    throw Error(ErrorCode::ValueSpaceMismatch, "the action is defined on h- or g-valued fields");
  }
  if (s.side == Side::Q && w.space() != ValueSpace::G) {
    throw Error(ErrorCode::ValueSpaceMismatch, "Q-side sections act on g-valued fields");
  }
  require_same_chart(s.X, w);
  return AlgebraField(directional_derivative(s.X, w) + field_bracket(s.pair, s.gamma, w), w.space());
}

AlgebraField map_i(const LiePair& pair, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::H, "i");
  return AlgebraField(linear_map(pair.inclusion(), gamma), ValueSpace::G);
}

AlgebraField map_j(const LiePair& pair, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::H, "j");
  return AlgebraField(linear_map(pair.inclusion(), gamma), ValueSpace::G);
}

AlgebraField map_ihat(const LiePair&, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::G, "ihat");
  return gamma;
}

AlgebraField map_ihat_inverse(const LiePair&, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::G, "ihat inverse");
  return gamma;
}

AlgebraField map_r(const LiePair& pair, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::G, "r");
  return AlgebraField(linear_map(pair.quotient(), gamma), ValueSpace::Quotient);
}

AlgebraField map_rhat(const LiePair& pair, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::G, "rhat");
  return AlgebraField(linear_map(pair.quotient(), gamma), ValueSpace::Quotient);
}

Section map_iota(const LiePair& pair, const AlgebraField& gamma) {
  require_space(gamma, ValueSpace::G, "iota");
  return kernel_inject(pair, gamma, Side::Q);
}

Section map_J(const Section& s) {
  if (s.side != Side::P) throw Error(ErrorCode::SideMismatch, "J acts on P-side sections");
  return Section{s.pair, Side::Q, s.X, map_i(s.pair, s.gamma)};
}

AlgebraField map_R(const Section& s) {
  if (s.side != Side::Q) throw Error(ErrorCode::SideMismatch, "R acts on Q-side sections");
  return map_rhat(s.pair, s.gamma);
}

CheckResult make_check(std::string name, double residual, double tolerance) {
  // NaN residuals fail.
  return CheckResult{std::move(name), residual, tolerance, residual <= tolerance};
}

bool DiagramReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Field SampleGenerator::polynomial(int components, int degree) {
  std::vector<Expression> exprs;
  exprs.reserve(components);
  for (int c = 0; c < components; ++c) {
    exprs.push_back(Expression::randpoly(degree, rng_.next() >> 33, chart_->n()));
  }
  if (components == 0) return zero_field(chart_, 0);
  return expression_field(chart_, std::move(exprs));
}

AlgebraField SampleGenerator::algebra_field(const LiePair& pair, ValueSpace space, int degree) {
  return AlgebraField(polynomial(value_dim(pair, space), degree), space);
}

Section SampleGenerator::section(const LiePair& pair, Side side, int degree) {
  return make_section(pair, side, polynomial(chart_->n(), degree),
                      algebra_field(pair, gamma_space(side), degree));
}

std::vector<double> SampleGenerator::point() {
  std::vector<double> p(chart_->n());
  for (int a = 0; a < chart_->n(); ++a) {
    p[a] = rng_.uniform(chart_->bounds()[a].lo, chart_->bounds()[a].hi);
  }
  return p;
}

std::vector<std::vector<double>> SampleGenerator::points(int count) {
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(point());
  return out;
}

double section_difference(const Section& a, const Section& b,
                          const std::vector<std::vector<double>>& pts) {
  if (a.side != b.side) throw Error(ErrorCode::SideMismatch, "comparing sections across sides");
  return std::max(max_difference(a.X, b.X, pts), max_difference(a.gamma, b.gamma, pts));
}

DiagramReport check_diagram(const LiePair& pair, const ChartPtr& chart, int samples,
                            std::uint64_t seed, double tol) {
  if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be at least 1");
  SampleGenerator gen(chart, seed);
  const std::vector<std::string> names = {
      "j = ihat o i",          "iota = iota_Q o ihat", "J o iota_P = iota_Q o j",
      "rho_Q o J = rho_P",     "R o J = 0",            "rhat o j = 0",
      "r o i = 0",             "R o iota = r",         "rhat = r o ihat^-1",
      "rho_P o iota_P = 0",    "rho_Q o iota_Q = 0",   "r surjective (zero-padded lift)",
      "J preserves brackets",
  };
  std::vector<double> worst(names.size(), 0.0);
  auto record = [&](std::size_t k, double r) {
    worst[k] = std::isnan(r) ? r : std::max(worst[k], r);
  };
  const Eigen::MatrixXd lift = pair.quotient().transpose();

  for (int s = 0; s < samples; ++s) {
    const std::vector<std::vector<double>> pt{gen.point()};
    const AlgebraField h = gen.algebra_field(pair, ValueSpace::H, 2);
    const AlgebraField g = gen.algebra_field(pair, ValueSpace::G, 2);
    const AlgebraField u = gen.algebra_field(pair, ValueSpace::Quotient, 2);
    const Section sp = gen.section(pair, Side::P, 2);
    const Section sp2 = gen.section(pair, Side::P, 2);

    record(0, max_difference(map_j(pair, h), map_ihat(pair, map_i(pair, h)), pt));
    record(1, section_difference(map_iota(pair, g),
                                 kernel_inject(pair, map_ihat(pair, g), Side::Q), pt));
    record(2, section_difference(map_J(kernel_inject(pair, h, Side::P)),
                                 kernel_inject(pair, map_j(pair, h), Side::Q), pt));
    record(3, max_difference(anchor(map_J(sp)), anchor(sp), pt));
    record(4, max_abs(map_R(map_J(sp)), pt));
    record(5, max_abs(map_rhat(pair, map_j(pair, h)), pt));
    record(6, max_abs(map_r(pair, map_i(pair, h)), pt));
    record(7, max_difference(map_R(map_iota(pair, g)), map_r(pair, g), pt));
    record(8, max_difference(map_rhat(pair, g), map_r(pair, map_ihat_inverse(pair, g)), pt));
    record(9, max_abs(anchor(kernel_inject(pair, h, Side::P)), pt));
    record(10, max_abs(anchor(kernel_inject(pair, g, Side::Q)), pt));
    record(11, max_difference(map_r(pair, AlgebraField(linear_map(lift, u), ValueSpace::G)), u, pt));
    record(12, section_difference(map_J(bracket_sections(sp, sp2)),
                                  bracket_sections(map_J(sp), map_J(sp2)), pt));
  }

  DiagramReport report;
  report.samples = samples;
  report.seed = seed;
  for (std::size_t k = 0; k < names.size(); ++k) report.checks.push_back(make_check(names[k], worst[k], tol));
  return report;
}

}  // namespace cartan
