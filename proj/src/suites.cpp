#include "cartan/suites.hpp"

#include <algorithm>
#include <cmath>

#include "cartan/error.hpp"

namespace cartan {

namespace {

using Points = std::vector<std::vector<double>>;

BigradedForm random_one_form(const LiePair& pair, SampleGenerator& gen, ValueSpace module, int degree) {
  BigradedForm w(pair, gen.chart(), module, 1);
  for (int mu = 0; mu < gen.chart()->n(); ++mu) w.set({mu}, {}, gen.algebra_field(pair, module, degree));
  for (int a = 0; a < pair.dim_h(); ++a) w.set({}, {a}, gen.algebra_field(pair, module, degree));
  return w;
}

FormComponents random_h_form(const Model& model, SampleGenerator& gen, int degree) {
  FormComponents out;
  for (int mu = 0; mu < gen.chart()->n(); ++mu) out.push_back(gen.algebra_field(model.pair, ValueSpace::H, degree));
  return out;
}

AlgebraField zero_h(const Model& model, const ChartPtr& chart) {
  return AlgebraField(zero_field(chart, model.pair.dim_h()), ValueSpace::H);
}

std::vector<double> unit_g(const Model& model, int mu, double value = 1.0) {
  std::vector<double> e(model.pair.dim_g(), 0.0);
  e[model.split.p_indices()[mu]] = value;
  return e;
}

void prefix(std::vector<CheckResult>& checks, const std::string& tag) {
  for (auto& c : checks) c.name = tag + c.name;
}

void append(std::vector<CheckResult>& out, std::vector<CheckResult> more, const std::string& tag = "") {
  prefix(more, tag);
  out.insert(out.end(), more.begin(), more.end());
}

// Rank of X -> [A(X)] at every point of the grid.
bool tetrad_invertible(const LocalConnection& aq, const Points& grid, double cond_max) {
  const LiePair& pair = aq.pair;
  const int n = static_cast<int>(aq.components.size());
  if (n != pair.dim_q()) return false;
  for (const auto& p : grid) {
    Eigen::MatrixXd m(n, n);
    for (int mu = 0; mu < n; ++mu) m.col(mu) = pair.quotient() * aq.components[mu].vector(p);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(n - 1) * cond_max < s(0)) return false;
  }
  return true;
}

}  // namespace

CartanConnection sample_cartan(const Model& model, SampleGenerator& gen, double size) {
  const ChartPtr& chart = gen.chart();
  FormComponents abar;
  for (int mu = 0; mu < chart->n(); ++mu) {
    abar.emplace_back(constant_field(chart, unit_g(model, mu)) + size * gen.polynomial(model.pair.dim_g(), 2),
                      ValueSpace::G);
  }
  return make_cartan_connection(model.pair, std::move(abar), model.split);
}

LocalConnection twisted_connection(const Model& model, const ChartPtr& chart) {
  if (chart->n() < 2) throw Error(ErrorCode::DimensionMismatch, "the twisted connection needs two coordinates");
  FormComponents a;
  for (int mu = 0; mu < chart->n(); ++mu) {
    std::vector<std::string> src(model.pair.dim_h(), "0");
    if (mu == 1) src[0] = "x1";
    a.emplace_back(parse_field(chart, src), ValueSpace::H);
  }
  return make_local_connection(model.pair, Side::P, std::move(a));
}

std::vector<CheckResult> diagram_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed) {
  return check_diagram(model.pair, chart, samples, seed).checks;
}

std::vector<CheckResult> bracket_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed) {
  const LiePair& pair = model.pair;
  SampleGenerator gen(chart, seed);
  double jacobi = 0, kernel_x = 0, kernel_g = 0, anchor_hom = 0;
  for (int s = 0; s < samples; ++s) {
    const Section a = gen.section(pair, Side::P, 2);
    const Section b = gen.section(pair, Side::P, 2);
    const Section c = gen.section(pair, Side::P, 2);
    const Points pt{gen.point()};
    const Section jac = bracket_sections(a, bracket_sections(b, c)) + bracket_sections(b, bracket_sections(c, a)) +
                        bracket_sections(c, bracket_sections(a, b));
    jacobi = std::max(jacobi, section_difference(jac, zero_section(pair, Side::P, chart), pt));

    const AlgebraField v = gen.algebra_field(pair, ValueSpace::H, 2);
    const Section k = bracket_sections(a, kernel_inject(pair, v, Side::P));
    kernel_x = std::max(kernel_x, max_abs(k.X, pt));
    kernel_g = std::max(kernel_g, max_difference(k.gamma, rep_action(a, v), pt));
    anchor_hom = std::max(anchor_hom, max_difference(anchor(bracket_sections(a, b)), vf_bracket(anchor(a), anchor(b)), pt));
  }
  return {make_check("bracket Jacobi identity", jacobi, 1e-6),
          make_check("[s, iota v] has no vector part", kernel_x, 1e-8),
          make_check("[s, iota v] = iota(s.v)", kernel_g, 1e-8),
          make_check("anchor preserves brackets", anchor_hom, 1e-8)};
}

std::vector<CheckResult> calculus_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed) {
  const LiePair& pair = model.pair;
  SampleGenerator gen(chart, seed);
  double d2_zero = 0, d2_one = 0, bi_zero = 0, bi_one = 0, antisym = 0;
  for (int s = 0; s < samples; ++s) {
    const ValueSpace module = s % 2 == 0 ? ValueSpace::H : ValueSpace::G;
    const Points pt{gen.point()};
    const Section a = gen.section(pair, Side::P, 2);
    const Section b = gen.section(pair, Side::P, 2);
    const Section c = gen.section(pair, Side::P, 2);

    BigradedForm zero(pair, chart, module, 0);
    zero.set({}, {}, gen.algebra_field(pair, module, 3));
    const BigradedForm one = random_one_form(pair, gen, module, 2);
    const AlgebroidForm f = to_functional(zero);
    const AlgebroidForm w = to_functional(one);

    d2_zero = std::max(d2_zero, max_abs(koszul_differential(koszul_differential(f))({a, b}), pt));
    d2_one = std::max(d2_one, max_abs(koszul_differential(koszul_differential(w))({a, b, c}), pt));
    bi_zero = std::max(bi_zero, max_difference(to_functional(bigraded_differential(zero))({a}),
                                               koszul_differential(f)({a}), pt));
    const BigradedForm dw = bigraded_differential(one);
    bi_one = std::max(bi_one, max_difference(to_functional(dw)({a, b}), koszul_differential(w)({a, b}), pt));
    antisym = std::max(antisym, dw.antisymmetry_residual(pt));
  }
  return {make_check("hd^2 = 0 on 0-forms", d2_zero, 1e-5),
          make_check("hd^2 = 0 on 1-forms", d2_one, 1e-5),
          make_check("Koszul = bigraded d + s' on 0-forms", bi_zero, 1e-5),
          make_check("Koszul = bigraded d + s' on 1-forms", bi_one, 1e-5),
          make_check("bigraded differential stays antisymmetric", antisym, 1e-10)};
}

std::vector<CheckResult> ehresmann_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed,
                                         const std::optional<LocalConnection>& fixed) {
  SampleGenerator gen(chart, seed);
  const Points grid = quadrature_points(*chart);
  const int n = chart->n();
  std::vector<LocalConnection> conns;
  if (fixed) conns.push_back(*fixed);
  if (n >= 2) conns.push_back(twisted_connection(model, chart));
  for (int s = 0; s < samples; ++s) conns.push_back(make_local_connection(model.pair, Side::P, random_h_form(model, gen, 2)));

  double routes = 0, lift_norm = 0;
  std::vector<CheckResult> transport;
  for (std::size_t k = 0; k < conns.size(); ++k) {
    const LocalConnection& a = conns[k];
    const TwoFormComponents f = curvature_local(a);
    for (int mu = 0; mu < n; ++mu) {
      const Field dmu = coordinate_vector(chart, mu);
      lift_norm = std::max(lift_norm, max_abs(omega_lie(a)({horizontal_lift(a, dmu)}), {gen.point()}));
      for (int nu = mu + 1; nu < n; ++nu) {
        routes = std::max(routes, max_difference(curvature_via_lift(a, dmu, coordinate_vector(chart, nu)), f[mu][nu], grid));
      }
    }
    const auto t = transport_checks(a, 2, seed + k);
    if (transport.empty()) {
      transport = t;
    } else {
      for (std::size_t i = 0; i < t.size(); ++i) {
        transport[i] = make_check(t[i].name, std::max(transport[i].residual, t[i].residual), t[i].tolerance);
      }
    }
  }
  std::vector<CheckResult> out{make_check("curvature_local = curvature_via_lift on the quadrature grid", routes, 1e-6),
                               make_check("omega_lie vanishes on horizontal lifts", lift_norm, 1e-12)};
  append(out, transport);
  return out;
}

std::vector<CheckResult> cartan_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed,
                                      const std::optional<CartanConnection>& fixed) {
  const LiePair& pair = model.pair;
  const int n = chart->n();
  SampleGenerator gen(chart, seed);
  const auto none = make_local_connection(pair, Side::P, FormComponents(n, zero_h(model, chart)));

  double normalization = 0, round_w = 0, round_s = 0, kernel = 0, lifts = 0;
  int non_cartan = 0;
  std::vector<CheckResult> reductive;
  for (int s = 0; s < std::max(samples, 1); ++s) {
    const CartanConnection c = s == 0 && fixed ? *fixed : sample_cartan(model, gen, 0.1);
    if (!check_cartan(c).is_cartan) {
      ++non_cartan;
      continue;
    }
    const AlgebroidForm v = varpi_lie(c);
    const Points pt = gen.points(2);
    const AlgebraField h = gen.algebra_field(pair, ValueSpace::H, 3);
    normalization = std::max(normalization, max_difference(v({kernel_inject(pair, h, Side::P)}), map_i(pair, h), pt));

    const AlgebraField w = gen.algebra_field(pair, ValueSpace::G, 2);
    round_w = std::max(round_w, max_difference(v({varpi_inverse(c, w)}), w, pt));
    const Section sec = gen.section(pair, Side::P, 2);
    round_s = std::max(round_s, section_difference(varpi_inverse(c, v({sec})), sec, pt));

    const CartanCurvature k = cartan_curvature(c);
    const Section kv = kernel_inject(pair, gen.algebra_field(pair, ValueSpace::H, 2), Side::P);
    kernel = std::max(kernel, max_abs(k.functional({sec, kv}), pt));
    const Field X = gen.polynomial(n, 2);
    const Field Y = gen.polynomial(n, 2);
    Field expected = zero_field(chart, pair.dim_g());
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        if (mu != nu) expected = expected + (component(X, mu) * component(Y, nu)) * k.local[mu][nu];
      }
    }
    lifts = std::max(lifts, max_difference(k.functional({horizontal_lift(none, X), horizontal_lift(none, Y)}), expected, pt));

    auto r = reductive_checks(c, 2, seed + s);
    if (reductive.empty()) {
      reductive = r;
    } else {
      for (std::size_t i = 0; i < r.size(); ++i) {
        reductive[i] = make_check(r[i].name, std::max(reductive[i].residual, r[i].residual), r[i].tolerance);
      }
    }
  }

  // Identity tetrad: Fbar_{mu nu} = [P_mu, P_nu], from the structure constants alone.
  FormComponents id;
  for (int mu = 0; mu < n; ++mu) id.emplace_back(constant_field(chart, unit_g(model, mu)), ValueSpace::G);
  const CartanConnection identity = make_cartan_connection(pair, id, model.split);
  const CartanCurvature ki = cartan_curvature(identity);
  const Points grid = quadrature_points(*chart);
  double id_curv = 0;
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      if (mu == nu) continue;
      const Eigen::VectorXd br = pair.g().bracket(model.split.i_p().col(mu), model.split.i_p().col(nu));
      const Field bracket = constant_field(chart, std::vector<double>(br.data(), br.data() + br.size()));
      id_curv = std::max(id_curv, max_difference(ki.local[mu][nu], -1.0 * bracket, grid));
    }
  }

  std::vector<CheckResult> out{
      make_check("varpi_lie o iota = i", normalization, 0.0),
      make_check("varpi_lie(varpi_inverse(w)) = w", round_w, 1e-9),
      make_check("varpi_inverse(varpi_lie(s)) = s", round_s, 1e-9),
      make_check("Cartan curvature vanishes on kernel arguments", kernel, 1e-6),
      make_check("Cartan curvature on lifts = -(dAbar + [Abar, Abar]/2)", lifts, 1e-5),
      make_check("sampled connections pass check_cartan", non_cartan, 0.0),
      make_check("identity tetrad curvature = [P_mu, P_nu]", id_curv, 1e-12),
  };
  if (model.name == "euclidean") {
    double flat = 0;
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) flat = std::max(flat, max_abs(ki.local[mu][nu], grid));
    }
    out.push_back(make_check("flat model curvature vanishes", flat, 1e-10));
  }
  if (model.name == "sphere" && n == 2) {
    const AlgebraField omega(linear_map(model.split.pi_h(), -1.0 * ki.local[0][1]), ValueSpace::H);
    const double dev = max_difference(omega, AlgebraField(constant_field(chart, {1.0}), ValueSpace::H), grid);
    out.push_back(make_check("sphere h-curvature component = 1", dev, 1e-8));
  }
  append(out, reductive);
  return out;
}

std::vector<CheckResult> q_criterion_suite(const Model& model, const ChartPtr& chart, std::uint64_t seed) {
  const LiePair& pair = model.pair;
  const int n = chart->n();
  SampleGenerator gen(chart, seed);
  const Points grid = quadrature_points(*chart);
  auto leg = [&](int mu, double scale) {
    return AlgebraField(constant_field(chart, unit_g(model, mu, scale)), ValueSpace::G);
  };
  auto hpart = [&](double size) {
    return AlgebraField(size * linear_map(pair.inclusion(), gen.polynomial(pair.dim_h(), 2)), ValueSpace::G);
  };
  auto add = [](const AlgebraField& a, const AlgebraField& b) {
    return AlgebraField(static_cast<const Field&>(a) + b, ValueSpace::G);
  };

  std::vector<std::pair<FormComponents, bool>> cases;
  for (int k = 0; k < 5; ++k) {
    FormComponents c;
    for (int mu = 0; mu < n; ++mu) {
      c.push_back(add(add(leg(mu, 1.0 + 0.2 * k), hpart(0.5)),
                      AlgebraField(0.05 * gen.polynomial(pair.dim_g(), 1), ValueSpace::G)));
    }
    cases.emplace_back(std::move(c), true);
  }
  for (int k = 0; k < 5; ++k) {
    FormComponents c;
    for (int mu = 0; mu < n; ++mu) c.push_back(add(leg(mu, 1.0), hpart(0.3)));
    switch (k) {
      case 0: c[n - 1] = hpart(1.0); break;                                  // vertical last leg
      case 1: c[n - 1] = add(leg(0, 2.0), hpart(0.5)); break;                // parallel to the first
      case 2: for (auto& x : c) x = hpart(1.0); break;                       // fully vertical
      case 3: c[0] = AlgebraField(zero_field(chart, pair.dim_g()), ValueSpace::G); break;
      default: {
        AlgebraField sum = hpart(0.2);
        for (int mu = 0; mu + 1 < n; ++mu) sum = add(sum, leg(mu, 1.0));
        c[n - 1] = sum;                                                       // dependent legs
      }
    }
    cases.emplace_back(std::move(c), false);
  }

  double rank_mismatch = 0, construction_mismatch = 0, probe_mismatch = 0;
  for (const auto& [comps, expected] : cases) {
    const LocalConnection aq = make_local_connection(pair, Side::Q, comps);
    const QConnectionVerdict v = cartan_from_Q_connection(aq, seed);
    if (v.verdict.is_cartan != tetrad_invertible(aq, grid, kDefaultCondMax)) rank_mismatch += 1;
    if (v.verdict.is_cartan != expected) construction_mismatch += 1;
    if (v.ker_im_trivial != v.verdict.is_cartan) probe_mismatch += 1;
  }
  return {make_check("Q-criterion verdict = rank of X -> [A(X)] on the probe grid", rank_mismatch, 0.0),
          make_check("Q-criterion verdict = constructed ground truth", construction_mismatch, 0.0),
          make_check("ker/im probe consistent with the verdict", probe_mismatch, 0.0)};
}

std::vector<CheckResult> metrics_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed,
                                       const std::optional<Eigen::MatrixXd>& hhat) {
  SampleGenerator gen(chart, seed);
  const CartanConnection c1 = sample_cartan(model, gen, 0.1);
  const CartanConnection c2 = sample_cartan(model, gen, 0.2);
  const int dg = model.pair.dim_g();
  Eigen::MatrixXd a(dg, dg);
  for (int r = 0; r < dg; ++r) {
    for (int c = 0; c < dg; ++c) a(r, c) = gen.rng().uniform(-1.0, 1.0);
  }
  const Eigen::MatrixXd spd = a * a.transpose() + Eigen::MatrixXd::Identity(dg, dg);

  std::vector<CheckResult> out;
  append(out, metric_checks(c1, c2, kernel_metric(model.pair, spd), samples, seed), "generic hhat: ");
  append(out, metric_checks(c1, c2, kernel_metric(model.pair, "euclidean"), samples, seed + 1), "euclidean hhat: ");
  if (hhat) append(out, metric_checks(c1, c2, kernel_metric(model.pair, *hhat), samples, seed + 2), "configured hhat: ");
  return out;
}

std::vector<CheckResult> gauge_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed) {
  return gauge_checks(model, chart, samples, seed).checks;
}

PalatiniSummary palatini_suite(const PalatiniConfig& cfg, const std::vector<AlgebraField>& gauge_v, double eps,
                               std::optional<double> expected_action, double action_tol) {
  PalatiniSummary out;
  out.S = action(cfg);
  out.torsion_max = torsion_max(cfg);
  out.checks.push_back(make_check("action is finite", std::isfinite(out.S) ? 0.0 : 1.0, 0.0));
  if (expected_action) {
    out.checks.push_back(make_check("action = expected value", std::abs(out.S - *expected_action), action_tol));
  }
  for (std::size_t k = 0; k < gauge_v.size(); ++k) {
    const GaugeVariation r = gauge_variation(cfg, gauge_v[k], eps);
    const double hi = std::max(r.ratio, r.ratio_half);
    const double mismatch = hi == 0.0 || r.agree(0.0) ? 0.0 : std::abs(r.ratio - r.ratio_half) / hi;
    out.gauge_ratio = std::max(out.gauge_ratio, mismatch);
    out.variations.push_back(r);
    out.checks.push_back(make_check("second-order gauge ratios agree (v" + std::to_string(k + 1) + ")", mismatch, 0.1));
  }
  return out;
}

}  // namespace cartan
