#include "cartan/connections.hpp"

#include <cmath>

#include "cartan/error.hpp"

namespace cartan {

namespace {

ValueSpace gamma_space(Side side) { return side == Side::P ? ValueSpace::H : ValueSpace::G; }

AlgebraField sum(const AlgebraField& a, const AlgebraField& b) {
  return AlgebraField(static_cast<const Field&>(a) + b, a.space());
}

AlgebraField diff(const AlgebraField& a, const AlgebraField& b) {
  return AlgebraField(static_cast<const Field&>(a) - b, a.space());
}

AlgebraField neg(const AlgebraField& a) { return AlgebraField(-static_cast<const Field&>(a), a.space()); }

AlgebraField mapped(const Eigen::MatrixXd& m, const AlgebraField& a, ValueSpace to) {
  return AlgebraField(linear_map(m, a), to);
}

void require_components(const FormComponents& c, int n, ValueSpace space, int dim) {
  if (static_cast<int>(c.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "a connection needs one component per coordinate");
  }
  for (const auto& a : c) {
    if (a.space() != space) {
      throw Error(ErrorCode::ValueSpaceMismatch,
                  "connection component is " + to_string(a.space()) + "-valued, expected " + to_string(space));
    }
    if (a.components() != dim) throw Error(ErrorCode::DimensionMismatch, "connection component size");
    require_same_chart(a, c.front());
  }
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double lo = s[s.size() - 1];
  return lo > 0.0 ? s[0] / lo : std::numeric_limits<double>::infinity();
}

// Gaussian elimination with partial pivoting on jet entries.
std::vector<Jet> solve_jets(std::vector<std::vector<Jet>> m, std::vector<Jet> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col].value()) > std::abs(m[piv][col].value())) piv = r;
    }
    std::swap(m[col], m[piv]);
    std::swap(b[col], b[piv]);
    const Jet inv = reciprocal(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Jet f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Jet> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Jet acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= m[i][c] * x[c];
    x[i] = acc * reciprocal(m[i][i]);
  }
  return x;
}

struct InverseSolve {
  std::vector<Jet> X;
  std::vector<Jet> abar_x;  // Abar(X), g-coordinates
};

InverseSolve solve_inverse(const CartanConnection& cartan, const AlgebraField& w, Point pt, int order,
                           double cond_max) {
  const LiePair& pair = cartan.pair;
  const int n = cartan.chart()->n();
  const int dg = pair.dim_g();
  const Eigen::MatrixXd& q = pair.quotient();
  std::vector<std::vector<Jet>> abar;
  for (const auto& c : cartan.components) abar.push_back(c.jets(pt, order));
  const auto wj = w.jets(pt, order);
  const Jet zero = Jet::constant(n, order, 0.0);
  std::vector<std::vector<Jet>> m(n, std::vector<Jet>(n, zero));
  Eigen::MatrixXd values(n, n);
  std::vector<Jet> rhs(n, zero);
  for (int a = 0; a < n; ++a) {
    for (int k = 0; k < dg; ++k) {
      if (q(a, k) == 0.0) continue;
      for (int mu = 0; mu < n; ++mu) m[a][mu].add_scaled(abar[mu][k], q(a, k));
      rhs[a].add_scaled(wj[k], -q(a, k));
    }
    for (int mu = 0; mu < n; ++mu) values(a, mu) = m[a][mu].value();
  }
  if (!(condition_number(values) <= cond_max)) {
    throw Error(ErrorCode::SingularTetrad, "tetrad is not invertible at the evaluation point");
  }
  InverseSolve out;
  out.X = solve_jets(std::move(m), std::move(rhs));
  out.abar_x.assign(dg, zero);
  for (int mu = 0; mu < n; ++mu) {
    for (int k = 0; k < dg; ++k) out.abar_x[k].add_product(out.X[mu], abar[mu][k]);
  }
  return out;
}

}  // namespace

AlgebraField contract_components(const VectorField& X, const FormComponents& a) {
  std::vector<Field> fs(a.begin(), a.end());
  return AlgebraField(contract(X, fs), a.front().space());
}

TwoFormComponents field_strength(const LiePair& pair, const FormComponents& a) {
  const std::size_t n = a.size();
  TwoFormComponents f(n, std::vector<AlgebraField>(n));
  const AlgebraField zero(zero_field(a.front().chart(), a.front().components()), a.front().space());
  for (std::size_t mu = 0; mu < n; ++mu) {
    f[mu][mu] = zero;
    for (std::size_t nu = mu + 1; nu < n; ++nu) {
      const Field d = partial(a[nu], static_cast<int>(mu)) - partial(a[mu], static_cast<int>(nu));
      f[mu][nu] = sum(AlgebraField(d, a[mu].space()), field_bracket(pair, a[mu], a[nu]));
      f[nu][mu] = neg(f[mu][nu]);
    }
  }
  return f;
}

double components_difference(const FormComponents& a, const FormComponents& b,
                             const std::vector<std::vector<double>>& pts) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "1-forms differ in size");
  double worst = 0.0;
  for (std::size_t mu = 0; mu < a.size(); ++mu) worst = std::max(worst, max_difference(a[mu], b[mu], pts));
  return worst;
}

LocalConnection make_local_connection(const LiePair& pair, Side side, FormComponents components) {
  if (components.empty()) throw Error(ErrorCode::DimensionMismatch, "connection without components");
  const ValueSpace space = gamma_space(side);
  require_components(components, components.front().chart()->n(), space, value_dim(pair, space));
  return LocalConnection{pair, side, std::move(components)};
}

CartanConnection make_cartan_connection(const LiePair& pair, FormComponents components,
                                        std::optional<ReductiveSplit> split, bool normalized) {
  if (components.empty()) throw Error(ErrorCode::DimensionMismatch, "connection without components");
  require_components(components, components.front().chart()->n(), ValueSpace::G, pair.dim_g());
  if (split && !split->pair().same_as(pair)) throw Error(ErrorCode::AlgebraMismatch, "split of another pair");
  return CartanConnection{pair, std::move(components), std::move(split), normalized};
}

CartanConnection assemble_cartan(const ReductiveSplit& split, const FormComponents& A,
                                 const FormComponents& B) {
  if (A.size() != B.size()) throw Error(ErrorCode::DimensionMismatch, "A and B differ in length");
  FormComponents abar;
  for (std::size_t mu = 0; mu < A.size(); ++mu) {
    if (A[mu].space() != ValueSpace::H || B[mu].space() != ValueSpace::P) {
      throw Error(ErrorCode::ValueSpaceMismatch, "A must be h-valued and B p-valued");
    }
    abar.emplace_back(linear_map(split.i_h(), A[mu]) + linear_map(split.i_p(), B[mu]), ValueSpace::G);
  }
  return make_cartan_connection(split.pair(), std::move(abar), split);
}

LocalConnection CartanConnection::ehresmann_part() const {
  if (!split) throw Error(ErrorCode::NoSplit, "Cartan connection has no reductive split");
  FormComponents a;
  for (const auto& c : components) a.push_back(mapped(split->pi_h(), c, ValueSpace::H));
  return LocalConnection{pair, Side::P, std::move(a)};
}

FormComponents CartanConnection::tetrad() const {
  if (!split) throw Error(ErrorCode::NoSplit, "Cartan connection has no reductive split");
  FormComponents b;
  for (const auto& c : components) b.push_back(mapped(split->pi_p(), c, ValueSpace::P));
  return b;
}

AlgebroidForm omega_lie(const LocalConnection& conn) {
  const ValueSpace space = gamma_space(conn.side);
  return AlgebroidForm(
      conn.pair, 1, space,
      [conn](const std::vector<Section>& s) { return diff(s[0].gamma, conn(s[0].X)); },
      Provenance::ClosedForm, conn.side);
}

Section horizontal_lift(const LocalConnection& conn, const VectorField& X) {
  return make_section(conn.pair, conn.side, X, conn(X));
}

TwoFormComponents curvature_local(const LocalConnection& conn) {
  return field_strength(conn.pair, conn.components);
}

AlgebraField curvature_via_lift(const LocalConnection& conn, const VectorField& X, const VectorField& Y) {
  const Section b = bracket_sections(horizontal_lift(conn, X), horizontal_lift(conn, Y));
  return diff(b.gamma, horizontal_lift(conn, vf_bracket(X, Y)).gamma);
}

LocalConnection transport_to_Q(const LocalConnection& conn) {
  if (conn.side != Side::P) throw Error(ErrorCode::SideMismatch, "transport starts from a P-side connection");
  FormComponents a;
  for (const auto& c : conn.components) a.push_back(map_i(conn.pair, c));
  return LocalConnection{conn.pair, Side::Q, std::move(a)};
}

std::vector<CheckResult> transport_checks(const LocalConnection& conn, int samples, std::uint64_t seed,
                                          double tol) {
  const LocalConnection q = transport_to_Q(conn);
  const AlgebroidForm wp = omega_lie(conn);
  const AlgebroidForm wq = omega_lie(q);
  SampleGenerator gen(conn.chart(), seed);
  double r1 = 0.0, r2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto pt = gen.points(1);
    const Section sp = gen.section(conn.pair, Side::P, 2);
    const Section sq = gen.section(conn.pair, Side::Q, 2);
    r1 = std::max(r1, max_difference(wq({map_J(sp)}), map_j(conn.pair, wp({sp})), pt));
    r2 = std::max(r2, max_difference(map_R(sq), map_rhat(conn.pair, wq({sq})), pt));
  }
  return {make_check("omega_Q o J = j o omega_P", r1, tol), make_check("R = rhat o omega_Q", r2, tol)};
}

AlgebroidForm varpi_lie(const CartanConnection& cartan) {
  return AlgebroidForm(
      cartan.pair, 1, ValueSpace::G,
      [cartan](const std::vector<Section>& s) { return diff(map_i(cartan.pair, s[0].gamma), cartan(s[0].X)); },
      Provenance::ClosedForm);
}

Eigen::MatrixXd tetrad_matrix(const CartanConnection& cartan, Point pt) {
  const int n = static_cast<int>(cartan.components.size());
  Eigen::MatrixXd m(cartan.pair.dim_q(), n);
  for (int mu = 0; mu < n; ++mu) m.col(mu) = cartan.pair.quotient() * cartan.components[mu].vector(pt);
  return m;
}

std::vector<std::vector<double>> quadrature_points(const Chart& chart) {
  const QuadratureRule& rule = chart.quadrature();
  std::vector<std::vector<double>> pts;
  pts.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto p = rule.point(i);
    pts.emplace_back(p.begin(), p.end());
  }
  return pts;
}

CartanVerdict check_cartan(const CartanConnection& cartan, const std::vector<std::vector<double>>& probes,
                           double cond_max) {
  if (probes.empty()) throw Error(ErrorCode::ConfigError, "check_cartan needs at least one probe point");
  const LiePair& pair = cartan.pair;
  const int n = static_cast<int>(cartan.components.size());
  CartanVerdict v;
  v.dimension_ok = n == pair.dim_q();
  const bool full_square = n + pair.dim_h() == pair.dim_g();
  bool rank_ok = v.dimension_ok;
  bool iso_ok = full_square;
  double worst = 0.0;
  for (const auto& p : probes) {
    const Eigen::MatrixXd m = tetrad_matrix(cartan, p);
    const double c = condition_number(m);
    worst = std::max(worst, c);
    if (!(c <= cond_max)) {
      if (rank_ok && !v.failure) v.failure = p;
      rank_ok = false;
    }
    if (full_square) {
      Eigen::MatrixXd full(pair.dim_g(), pair.dim_g());
      for (int mu = 0; mu < n; ++mu) full.col(mu) = -cartan.components[mu].vector(p);
      full.rightCols(pair.dim_h()) = pair.inclusion();
      if (!(condition_number(full) <= cond_max)) iso_ok = false;
    }
  }
  v.worst_condition = worst;
  v.is_generalized_iso = iso_ok;
  v.is_cartan = cartan.normalized && rank_ok;
  if (!v.dimension_ok) v.failure.reset();
  return v;
}

CartanVerdict check_cartan(const CartanConnection& cartan, double cond_max) {
  return check_cartan(cartan, quadrature_points(*cartan.chart()), cond_max);
}

Section varpi_inverse(const CartanConnection& cartan, const AlgebraField& w) {
  if (w.space() != ValueSpace::G) throw Error(ErrorCode::ValueSpaceMismatch, "varpi inverse takes g-valued input");
  const ChartPtr chart = cartan.chart();
  const int n = chart->n();
  if (n != cartan.pair.dim_q()) {
    throw Error(ErrorCode::DimensionMismatch, "chart dimension differs from dim g/h");
  }
  const Eigen::MatrixXd hp = cartan.pair.h_part();
  Field X(chart, n, [cartan, w](Point pt, int order) {
    return solve_inverse(cartan, w, pt, order, kDefaultCondMax).X;
  });
  Field gamma(chart, cartan.pair.dim_h(), [cartan, w, hp, n](Point pt, int order) {
    const InverseSolve s = solve_inverse(cartan, w, pt, order, kDefaultCondMax);
    const auto wj = w.jets(pt, order);
    std::vector<Jet> out(hp.rows(), Jet::constant(n, order, 0.0));
    for (Eigen::Index r = 0; r < hp.rows(); ++r) {
      for (Eigen::Index k = 0; k < hp.cols(); ++k) {
        if (hp(r, k) == 0.0) continue;
        out[r].add_scaled(wj[k] + s.abar_x[k], hp(r, k));
      }
    }
    return out;
  });
  return make_section(cartan.pair, Side::P, std::move(X), AlgebraField(std::move(gamma), ValueSpace::H));
}

AlgebraField tvarpi(const CartanConnection& cartan, const VectorField& X) {
  return neg(map_r(cartan.pair, cartan(X)));
}

CartanCurvature cartan_curvature(const CartanConnection& cartan) {
  const AlgebroidForm varpi = varpi_lie(cartan);
  const AlgebroidForm functional = koszul_differential(varpi) - 0.5 * graded_bracket(varpi, varpi);
  TwoFormComponents local = field_strength(cartan.pair, cartan.components);
  for (auto& row : local) {
    for (auto& f : row) f = neg(f);
  }
  return CartanCurvature{functional, std::move(local)};
}

ReductiveComponents reductive_components(const CartanConnection& cartan) {
  const LocalConnection a = cartan.ehresmann_part();
  const FormComponents b = cartan.tetrad();
  AlgebroidForm beta(
      cartan.pair, 1, ValueSpace::P,
      [b](const std::vector<Section>& s) { return neg(contract_components(s[0].X, b)); },
      Provenance::ClosedForm);
  return ReductiveComponents{omega_lie(a), std::move(beta)};
}

std::vector<CheckResult> reductive_checks(const CartanConnection& cartan, int samples, std::uint64_t seed,
                                          double tol) {
  const ReductiveComponents rc = reductive_components(cartan);
  const LocalConnection a = cartan.ehresmann_part();
  const Eigen::MatrixXd p_to_q = cartan.pair.quotient() * cartan.split->i_p();
  SampleGenerator gen(cartan.chart(), seed);
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto pt = gen.points(1);
    const AlgebraField v = gen.algebra_field(cartan.pair, ValueSpace::H, 2);
    const Section k = kernel_inject(cartan.pair, v, Side::P);
    const Field X = gen.polynomial(cartan.chart()->n(), 2);
    r1 = std::max(r1, max_difference(rc.omega({k}), v, pt));
    r2 = std::max(r2, max_abs(rc.beta({k}), pt));
    r3 = std::max(r3, max_difference(tvarpi(cartan, X), linear_map(p_to_q, rc.beta({horizontal_lift(a, X)})), pt));
  }
  return {make_check("omega_lie o iota = Id", r1, tol), make_check("beta_lie o iota = 0", r2, tol),
          make_check("tvarpi = beta_lie o lift", r3, tol)};
}

QConnectionVerdict cartan_from_Q_connection(const LocalConnection& aq, std::uint64_t seed, double cond_max) {
  if (aq.side != Side::Q) throw Error(ErrorCode::SideMismatch, "expected a Q-side connection");
  QConnectionVerdict out{make_cartan_connection(aq.pair, aq.components), {}, true};
  out.verdict = check_cartan(out.candidate, cond_max);
  Rng rng(seed);
  const int n = aq.chart()->n();
  for (const auto& p : quadrature_points(*aq.chart())) {
    const Eigen::MatrixXd m = tetrad_matrix(out.candidate, p);
    std::vector<Eigen::VectorXd> candidates;
    for (int t = 0; t < 3; ++t) {
      Eigen::VectorXd x(n);
      for (int mu = 0; mu < n; ++mu) x[mu] = rng.uniform(-1.0, 1.0);
      candidates.push_back(x);
    }
    // The least singular direction is where a kernel vector would sit.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    candidates.push_back(svd.matrixV().col(n - 1));
    const double floor = std::max(m.norm() / cond_max, 1e-14);
    for (const auto& x : candidates) {
      if ((m * x).norm() <= floor * x.norm()) out.ker_im_trivial = false;
    }
  }
  return out;
}

}  // namespace cartan
