#include "cartan/gauge.hpp"

#include <algorithm>

#include "cartan/error.hpp"

namespace cartan {

namespace {

AlgebraField plus(const AlgebraField& a, const AlgebraField& b) {
  return AlgebraField(static_cast<const Field&>(a) + b, a.space());
}

AlgebraField times(double s, const AlgebraField& a) { return AlgebraField(s * a, a.space()); }

FormComponents zip(const FormComponents& a, const FormComponents& b, double sb) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "1-forms differ in length");
  FormComponents out;
  for (std::size_t mu = 0; mu < a.size(); ++mu) out.push_back(plus(a[mu], times(sb, b[mu])));
  return out;
}

FormComponents scale(double s, const FormComponents& a) {
  FormComponents out;
  for (const auto& c : a) out.push_back(times(s, c));
  return out;
}

FormComponents project(const Eigen::MatrixXd& m, const FormComponents& a, ValueSpace to) {
  FormComponents out;
  for (const auto& c : a) out.emplace_back(linear_map(m, c), to);
  return out;
}

const ReductiveSplit& require_split(const CartanConnection& cartan) {
  if (!cartan.split) throw Error(ErrorCode::NoSplit, "Cartan connection has no reductive split");
  return *cartan.split;
}

FormComponents zeros_like(const FormComponents& a) {
  FormComponents out;
  for (const auto& c : a) out.emplace_back(zero_field(c.chart(), c.components()), c.space());
  return out;
}

}  // namespace

FormComponents lie_derivative_components(const VectorField& X, const FormComponents& a) {
  const int n = static_cast<int>(a.size());
  if (X.components() != n) throw Error(ErrorCode::DimensionMismatch, "vector field and 1-form differ in dimension");
  FormComponents out;
  for (int mu = 0; mu < n; ++mu) {
    Field f = directional_derivative(X, a[mu]);
    for (int nu = 0; nu < n; ++nu) f = f + partial(component(X, nu), mu) * a[nu];
    out.emplace_back(std::move(f), a[mu].space());
  }
  return out;
}

FormComponents covariant_derivative(const LiePair& pair, const FormComponents& a, const AlgebraField& f) {
  FormComponents out;
  for (std::size_t mu = 0; mu < a.size(); ++mu) {
    out.push_back(plus(AlgebraField(partial(f, static_cast<int>(mu)), f.space()), field_bracket(pair, a[mu], f)));
  }
  return out;
}

FormComponents trivialize(const AlgebroidForm& w, const ChartPtr& chart) {
  if (w.degree() != 1) throw Error(ErrorCode::DimensionMismatch, "trivialize expects a 1-form");
  const ValueSpace gs = w.side() == Side::P ? ValueSpace::H : ValueSpace::G;
  FormComponents out;
  for (int mu = 0; mu < chart->n(); ++mu) {
    const Section d = make_section(w.pair(), w.side(), coordinate_vector(chart, mu),
                                   AlgebraField(zero_field(chart, value_dim(w.pair(), gs)), gs));
    out.push_back(w({d}));
  }
  return out;
}

Section to_section(const LiePair& pair, const GaugeParameter& param) {
  AlgebraField gamma = param.gamma;
  if (param.background) gamma = plus((*param.background)(param.X), gamma);
  return make_section(pair, Side::P, param.X, gamma);
}

FormComponents lie_derivative_ehresmann(const Section& s, const LocalConnection& A) {
  if (s.side != Side::P || A.side != Side::P) throw Error(ErrorCode::SideMismatch, "expected P-side data");
  return zip(covariant_derivative(A.pair, A.components, s.gamma), lie_derivative_components(s.X, A.components), -1.0);
}

FormComponents lie_derivative_cartan(const Section& s, const CartanConnection& cartan) {
  if (s.side != Side::P) throw Error(ErrorCode::SideMismatch, "expected a P-side section");
  return zip(covariant_derivative(cartan.pair, cartan.components, map_i(cartan.pair, s.gamma)),
             lie_derivative_components(s.X, cartan.components), -1.0);
}

GaugeState operator+(const GaugeState& a, const GaugeState& b) { return {zip(a.A, b.A, 1.0), zip(a.B, b.B, 1.0)}; }
GaugeState operator-(const GaugeState& a, const GaugeState& b) { return {zip(a.A, b.A, -1.0), zip(a.B, b.B, -1.0)}; }
GaugeState operator*(double s, const GaugeState& a) { return {scale(s, a.A), scale(s, a.B)}; }

double state_difference(const GaugeState& a, const GaugeState& b, const std::vector<std::vector<double>>& pts) {
  return std::max(components_difference(a.A, b.A, pts), components_difference(a.B, b.B, pts));
}

GaugeState split_state(const CartanConnection& cartan) {
  return {cartan.ehresmann_part().components, cartan.tetrad()};
}

FormComponents act_on_p(const ReductiveSplit& split, const AlgebraField& gamma, const FormComponents& B) {
  FormComponents out;
  for (const auto& b : B) {
    const AlgebraField g(linear_map(split.i_p(), b), ValueSpace::G);
    out.emplace_back(linear_map(split.pi_p(), field_bracket(split.pair(), gamma, g)), ValueSpace::P);
  }
  return out;
}

GaugeState lie_derivative_cartan_split(const Section& s, const CartanConnection& cartan) {
  const ReductiveSplit& split = require_split(cartan);
  const GaugeState st = split_state(cartan);
  FormComponents dA = zip(covariant_derivative(cartan.pair, st.A, s.gamma), lie_derivative_components(s.X, st.A), -1.0);
  FormComponents dB = zip(scale(-1.0, lie_derivative_components(s.X, st.B)), act_on_p(split, s.gamma, st.B), -1.0);
  return {std::move(dA), std::move(dB)};
}

GaugeState background_decompose(const VectorField& X, const AlgebraField& gamma, const LocalConnection& background,
                                const CartanConnection& cartan) {
  const ReductiveSplit& split = require_split(cartan);
  const GaugeState st = split_state(cartan);
  const AlgebraField ax = background(X);
  // -L_X A + D_A(Abg(X)) + delta_gamma A
  FormComponents dA = zip(covariant_derivative(cartan.pair, st.A, ax), lie_derivative_components(X, st.A), -1.0);
  dA = zip(dA, covariant_derivative(cartan.pair, st.A, gamma), 1.0);
  // -L_X B - [Abg(X), B] - delta_gamma B
  FormComponents dB = zip(scale(-1.0, lie_derivative_components(X, st.B)), act_on_p(split, ax, st.B), -1.0);
  dB = zip(dB, act_on_p(split, gamma, st.B), -1.0);
  return {std::move(dA), std::move(dB)};
}

GaugeState w_action(const ReductiveSplit& split, const WGenerator& w, const LocalConnection& background,
                    const GaugeState& state) {
  const LiePair& pair = split.pair();
  if (w.kind == WGenerator::Kind::Gauge) {
    if (w.omega.space() != ValueSpace::H) throw Error(ErrorCode::ValueSpaceMismatch, "gauge generator must be h-valued");
    return {covariant_derivative(pair, state.A, w.omega), scale(-1.0, act_on_p(split, w.omega, state.B))};
  }
  const AlgebraField s = background(w.xi);
  FormComponents dA = zip(covariant_derivative(pair, state.A, s), lie_derivative_components(w.xi, state.A), -1.0);
  FormComponents dB = zip(scale(-1.0, lie_derivative_components(w.xi, state.B)), act_on_p(split, s, state.B), -1.0);
  return {std::move(dA), std::move(dB)};
}

GaugeState w_commutator(const ReductiveSplit& split, const WGenerator& a, const WGenerator& b,
                        const LocalConnection& background, const GaugeState& state) {
  const GaugeState zero{zeros_like(state.A), zeros_like(state.B)};
  const GaugeState wa0 = w_action(split, a, background, zero);
  const GaugeState wb0 = w_action(split, b, background, zero);
  const GaugeState ab = w_action(split, a, background, w_action(split, b, background, state)) - wa0;
  const GaugeState ba = w_action(split, b, background, w_action(split, a, background, state)) - wb0;
  return ab - ba;
}

AlgebraField background_curvature(const LocalConnection& background, const VectorField& X, const VectorField& Y) {
  const TwoFormComponents f = curvature_local(background);
  const int n = static_cast<int>(f.size());
  AlgebraField out(zero_field(background.chart(), f[0][0].components()), f[0][0].space());
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      if (mu == nu) continue;
      out = plus(out, AlgebraField((component(X, mu) * component(Y, nu)) * f[mu][nu], out.space()));
    }
  }
  return out;
}

bool VariationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VariationReport commutator_check(const ReductiveSplit& split, const VectorField& xi, const VectorField& xi2,
                                 const AlgebraField& omega, const AlgebraField& omega2,
                                 const LocalConnection& background, const GaugeState& state,
                                 const std::vector<std::vector<double>>& pts, double tol) {
  const LiePair& pair = split.pair();
  auto W = [&](const WGenerator& g) { return w_action(split, g, background, state); };
  const WGenerator Wxi = WGenerator::diffeo(xi);
  const WGenerator Wxi2 = WGenerator::diffeo(xi2);
  const WGenerator Wom = WGenerator::gauge(omega);
  const WGenerator Wom2 = WGenerator::gauge(omega2);

  const GaugeState c1 = w_commutator(split, Wom, Wom2, background, state);
  const GaugeState r1 = W(WGenerator::gauge(field_bracket(pair, omega, omega2)));

  const AlgebraField mixed = contract_components(xi, covariant_derivative(pair, background.components, omega));
  const GaugeState c2 = w_commutator(split, Wxi, Wom, background, state);
  const GaugeState r2 = W(WGenerator::gauge(mixed));

  const GaugeState c3 = w_commutator(split, Wxi, Wxi2, background, state);
  const GaugeState r3 = W(WGenerator::diffeo(vf_bracket(xi, xi2))) -
                        W(WGenerator::gauge(background_curvature(background, xi2, xi)));

  const GaugeState zero{zeros_like(state.A), zeros_like(state.B)};
  VariationReport report;
  report.checks = {
      make_check("[W(Omega), W(Omega')] = -W([Omega, Omega'])", state_difference(c1 + r1, zero, pts), tol),
      make_check("[W(xi), W(Omega)] = -W(i_xi(dOmega + [Abg, Omega]))", state_difference(c2 + r2, zero, pts), tol),
      make_check("[W(xi), W(xi')] = -W([xi, xi']) + W(i_xi i_xi' Rbg)", state_difference(c3 + r3, zero, pts), tol),
  };
  report.opposite_sign = {
      make_check("[W(Omega), W(Omega')] = +W([Omega, Omega'])", state_difference(c1 - r1, zero, pts), tol),
      make_check("[W(xi), W(Omega)] = +W(i_xi(dOmega + [Abg, Omega]))", state_difference(c2 - r2, zero, pts), tol),
      make_check("[W(xi), W(xi')] = +W([xi, xi']) - W(i_xi i_xi' Rbg)", state_difference(c3 - r3, zero, pts), tol),
  };
  return report;
}

VariationReport gauge_checks(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed) {
  const LiePair& pair = model.pair;
  const int n = chart->n();
  if (n != pair.dim_q()) throw Error(ErrorCode::DimensionMismatch, "chart dimension differs from dim g/h");
  SampleGenerator gen(chart, seed);
  auto h_form = [&](int degree) {
    FormComponents c;
    for (int mu = 0; mu < n; ++mu) c.push_back(gen.algebra_field(pair, ValueSpace::H, degree));
    return make_local_connection(pair, Side::P, std::move(c));
  };
  auto g_form = [&](int degree) {
    FormComponents c;
    for (int mu = 0; mu < n; ++mu) c.push_back(gen.algebra_field(pair, ValueSpace::G, degree));
    return make_cartan_connection(pair, std::move(c), model.split);
  };

  double ehr = 0, car = 0, ker_w = 0, ker_v = 0, split_r = 0, bg = 0, dict = 0, gauge_v = 0;
  for (int s = 0; s < samples; ++s) {
    const auto pt = gen.points(1);
    const LocalConnection A = h_form(2);
    const CartanConnection cartan = g_form(2);
    const Section sec = gen.section(pair, Side::P, 2);
    const Section kv = kernel_inject(pair, gen.algebra_field(pair, ValueSpace::H, 2), Side::P);

    const AlgebroidForm Lw = lie_derivative(sec, omega_lie(A));
    const AlgebroidForm Lv = lie_derivative(sec, varpi_lie(cartan));
    ehr = std::max(ehr, components_difference(lie_derivative_ehresmann(sec, A), trivialize(Lw, chart), pt));
    const FormComponents closed = lie_derivative_cartan(sec, cartan);
    car = std::max(car, components_difference(closed, trivialize(Lv, chart), pt));
    ker_w = std::max(ker_w, max_abs(Lw({kv}), pt));
    ker_v = std::max(ker_v, max_abs(Lv({kv}), pt));

    const GaugeState sp = lie_derivative_cartan_split(sec, cartan);
    split_r = std::max({split_r, components_difference(sp.A, project(model.split.pi_h(), closed, ValueSpace::H), pt),
                        components_difference(sp.B, project(model.split.pi_p(), closed, ValueSpace::P), pt)});

    const LocalConnection background = h_form(2);
    const Field X = gen.polynomial(n, 2);
    const AlgebraField gamma = gen.algebra_field(pair, ValueSpace::H, 2);
    const GaugeState direct = lie_derivative_cartan_split(to_section(pair, {X, gamma, background}), cartan);
    bg = std::max(bg, state_difference(background_decompose(X, gamma, background, cartan), direct, pt));

    // W(xi) + W(Omega) against L along xi + (Abg(xi) + Omega), taken through the forms module.
    const GaugeState st = split_state(cartan);
    const GaugeState w = w_action(model.split, WGenerator::diffeo(X), background, st) +
                         w_action(model.split, WGenerator::gauge(gamma), background, st);
    const FormComponents lv = trivialize(lie_derivative(to_section(pair, {X, gamma, background}), varpi_lie(cartan)), chart);
    dict = std::max({dict, components_difference(w.A, project(model.split.pi_h(), lv, ValueSpace::H), pt),
                     components_difference(w.B, project(model.split.pi_p(), lv, ValueSpace::P), pt)});

    // delta_v varpi = hd v + [v, varpi] against X = 0.
    const AlgebraField v = gen.algebra_field(pair, ValueSpace::H, 2);
    const AlgebroidForm fv = function_form(pair, map_i(pair, v));
    const AlgebroidForm dv = koszul_differential(fv) + graded_bracket(fv, varpi_lie(cartan));
    const Section vs = kernel_inject(pair, v, Side::P);
    gauge_v = std::max(gauge_v, components_difference(trivialize(dv, chart), lie_derivative_cartan(vs, cartan), pt));
  }

  VariationReport report;
  report.checks = {
      make_check("L omega_lie closed form = i hd + hd i", ehr, 1e-5),
      make_check("L varpi_lie closed form = i hd + hd i", car, 1e-5),
      make_check("L omega_lie vanishes on kernel sections", ker_w, 1e-8),
      make_check("L varpi_lie vanishes on kernel sections", ker_v, 1e-8),
      make_check("split variation = projected Cartan variation", split_r, 1e-8),
      make_check("background decomposition = direct section", bg, 1e-8),
      make_check("W dictionary = -L(-varpi_lie) trivialized", dict, 1e-6),
      make_check("delta_v varpi_lie = hd v + [v, varpi_lie]", gauge_v, 1e-8),
  };

  // Commutator algebra on the fixed background Abg = x1 dx2 (x) e_h0.
  FormComponents abg;
  for (int mu = 0; mu < n; ++mu) {
    std::vector<std::string> src(pair.dim_h(), "0");
    if (mu == 1) src[0] = "x1";
    abg.emplace_back(parse_field(chart, src), ValueSpace::H);
  }
  const LocalConnection background = make_local_connection(pair, Side::P, std::move(abg));
  const GaugeState state = split_state(g_form(2));
  const AlgebraField om = gen.algebra_field(pair, ValueSpace::H, 2);
  const AlgebraField om2 = gen.algebra_field(pair, ValueSpace::H, 2);
  const auto grid = gen.points(std::max(samples, 1));
  const VariationReport fixed = commutator_check(model.split, coordinate_vector(chart, 0), coordinate_vector(chart, 1),
                                                 om, om2, background, state, grid);
  const VariationReport random = commutator_check(model.split, gen.polynomial(n, 2), gen.polynomial(n, 2), om, om2,
                                                  h_form(2), state, grid);
  for (const auto* r : {&fixed, &random}) {
    const std::string tag = r == &fixed ? " (coordinate xi, x1 dx2 background)" : " (random xi and background)";
    for (auto c : r->checks) {
      c.name += tag;
      report.checks.push_back(c);
    }
    for (auto c : r->opposite_sign) {
      c.name += tag;
      report.opposite_sign.push_back(c);
    }
  }
  return report;
}

}  // namespace cartan
