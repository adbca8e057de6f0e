#include "cartan/metrics.hpp"

#include <cmath>

#include "cartan/error.hpp"

namespace cartan {

namespace {

// W = [-Abar | i] : R^n + h -> g at a point.
Eigen::MatrixXd varpi_matrix(const CartanConnection& cartan, Point pt) {
  const LiePair& pair = cartan.pair;
  const int n = static_cast<int>(cartan.components.size());
  if (n + pair.dim_h() != pair.dim_g()) {
    throw Error(ErrorCode::DimensionMismatch, "varpi is not square: chart dimension differs from dim g/h");
  }
  Eigen::MatrixXd w(pair.dim_g(), pair.dim_g());
  for (int mu = 0; mu < n; ++mu) w.col(mu) = -cartan.components[mu].vector(pt);
  w.rightCols(pair.dim_h()) = pair.inclusion();
  return w;
}

Eigen::MatrixXd varpi_matrix_inverse(const CartanConnection& cartan, Point pt) {
  const Eigen::MatrixXd w = varpi_matrix(cartan, pt);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s[s.size() - 1] * kDefaultCondMax >= s[0])) {
    throw Error(ErrorCode::SingularTetrad, "varpi is not invertible at a probe point");
  }
  return svd.solve(Eigen::MatrixXd::Identity(w.rows(), w.cols()));
}

// Omega = [-K Abar | I] : R^n + h -> h at a point.
Eigen::MatrixXd omega_matrix(const CartanConnection& cartan, const Eigen::MatrixXd& K, Point pt) {
  const int n = static_cast<int>(cartan.components.size());
  const int dh = cartan.pair.dim_h();
  Eigen::MatrixXd o(dh, n + dh);
  for (int mu = 0; mu < n; ++mu) o.col(mu) = -K * cartan.components[mu].vector(pt);
  o.rightCols(dh) = Eigen::MatrixXd::Identity(dh, dh);
  return o;
}

double max_abs_entry(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Eigen::VectorXd random_vector(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

KernelMetric kernel_metric(const LiePair& pair, const Eigen::MatrixXd& m) {
  if (m.rows() != pair.dim_g() || m.cols() != pair.dim_g()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel metric must be dim g x dim g");
  }
  return KernelMetric{pair, InvariantForm(m)};
}

KernelMetric kernel_metric(const LiePair& pair, const std::string& name) {
  if (name == "trace") return KernelMetric{pair, InvariantForm::trace(pair.g())};
  if (name == "euclidean") return KernelMetric{pair, InvariantForm::identity(pair.dim_g())};
  throw Error(ErrorCode::ConfigError, "unknown kernel metric '" + name + "'");
}

ScalarField pullback_metric(const CartanConnection& cartan, const KernelMetric& hhat, const Section& s1,
                            const Section& s2) {
  const AlgebroidForm v = varpi_lie(cartan);
  std::vector<BracketTerm> terms;
  const Eigen::MatrixXd& m = hhat.matrix();
  for (int k = 0; k < m.rows(); ++k) {
    for (int l = 0; l < m.cols(); ++l) {
      if (m(k, l) != 0.0) terms.push_back({k, l, 0, m(k, l)});
    }
  }
  return bilinear(v({s1}), v({s2}), terms, 1);
}

Eigen::MatrixXd connection_map(const KernelMetric& hhat) {
  const Eigen::MatrixXd& i = hhat.pair.inclusion();
  const Eigen::MatrixXd hh = i.transpose() * hhat.matrix() * i;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(hh, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s[s.size() - 1] > kNondegeneracyTol * std::max(1.0, s[0]))) {
    throw Error(ErrorCode::DegenerateInnerMetric, "kernel metric restricted to h is degenerate");
  }
  return svd.solve(i.transpose() * hhat.matrix());
}

MetricPack extract_triple(const CartanConnection& cartan, const KernelMetric& hhat) {
  if (!hhat.pair.same_as(cartan.pair)) throw Error(ErrorCode::AlgebraMismatch, "metric of another pair");
  const Eigen::MatrixXd K = connection_map(hhat);
  const Eigen::MatrixXd& i = cartan.pair.inclusion();
  const InvariantForm h(i.transpose() * hhat.matrix() * i);
  FormComponents a;
  for (const auto& c : cartan.components) a.emplace_back(linear_map(K, c), ValueSpace::H);
  LocalConnection conn = make_local_connection(cartan.pair, Side::P, std::move(a));
  const std::size_t n = cartan.components.size();
  std::vector<Section> lifts;
  for (std::size_t mu = 0; mu < n; ++mu) {
    lifts.push_back(horizontal_lift(conn, coordinate_vector(cartan.chart(), static_cast<int>(mu))));
  }
  MatrixField g(n, std::vector<ScalarField>(n));
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t nu = mu; nu < n; ++nu) {
      g[mu][nu] = pullback_metric(cartan, hhat, lifts[mu], lifts[nu]);
      g[nu][mu] = g[mu][nu];
    }
  }
  return MetricPack{std::move(g), h, std::move(conn)};
}

Eigen::MatrixXd theta(const CartanConnection& cartan, const KernelMetric& hhat, Point pt) {
  const Eigen::MatrixXd K = connection_map(hhat);
  return omega_matrix(cartan, K, pt) * varpi_matrix_inverse(cartan, pt);
}

Eigen::MatrixXd projector_ph(const CartanConnection& cartan, const KernelMetric& hhat, Point pt) {
  return cartan.pair.inclusion() * theta(cartan, hhat, pt);
}

Eigen::VectorXd nabla_bar(const CartanConnection& cartan, const KernelMetric& hhat, const Eigen::VectorXd& vbar,
                          Point pt, const Eigen::VectorXd& lift_h) {
  const LiePair& pair = cartan.pair;
  Eigen::VectorXd vhat = pair.quotient().transpose() * vbar;
  if (lift_h.size() > 0) vhat += pair.inclusion() * lift_h;
  return vhat - pair.inclusion() * (theta(cartan, hhat, pt) * vhat);
}

Eigen::MatrixXd h_bar(const CartanConnection& cartan, const KernelMetric& hhat, Point pt) {
  const int dq = cartan.pair.dim_q();
  Eigen::MatrixXd nb(cartan.pair.dim_g(), dq);
  for (int a = 0; a < dq; ++a) nb.col(a) = nabla_bar(cartan, hhat, Eigen::VectorXd::Unit(dq, a), pt);
  return nb.transpose() * hhat.matrix() * nb;
}

bool is_reductive_compatible(const KernelMetric& hhat, const ReductiveSplit& split, double tol) {
  return max_abs_entry(split.i_h().transpose() * hhat.matrix() * split.i_p()) <= tol;
}

std::vector<CheckResult> metric_checks(const CartanConnection& cartan, const CartanConnection& other,
                                       const KernelMetric& hhat, int samples, std::uint64_t seed) {
  const LiePair& pair = cartan.pair;
  const Eigen::MatrixXd& i = pair.inclusion();
  const int dh = pair.dim_h();
  const int dg = pair.dim_g();
  const int dq = pair.dim_q();
  const MetricPack triple = extract_triple(cartan, hhat);
  SampleGenerator gen(cartan.chart(), seed);
  const bool compatible = cartan.split && is_reductive_compatible(hhat, *cartan.split);

  double idem = 0, incl = 0, rank = 0, adj = 0, indep = 0, theta_i = 0, orth = 0, pull = 0, hbar_indep = 0,
         lift_indep = 0, theta_pi = 0, nabla_ibar = 0, h_restrict = 0;
  for (int s = 0; s < samples; ++s) {
    const std::vector<double> pt = gen.point();
    const Eigen::MatrixXd P = projector_ph(cartan, hhat, pt);
    const Eigen::MatrixXd T = theta(cartan, hhat, pt);
    idem = std::max(idem, max_abs_entry(P * P - P));
    incl = std::max(incl, max_abs_entry(P * i - i));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(P);
    lu.setThreshold(1e-10);
    rank = std::max(rank, std::abs(static_cast<double>(lu.rank() - dh)));
    const Eigen::VectorXd v = random_vector(gen.rng(), dh);
    const Eigen::VectorXd w = random_vector(gen.rng(), dg);
    adj = std::max(adj, std::abs(hhat(i * v, P * w) - hhat(i * v, w)));
    indep = std::max(indep, max_abs_entry(P - projector_ph(other, hhat, pt)));
    theta_i = std::max(theta_i, max_abs_entry(T * i - Eigen::MatrixXd::Identity(dh, dh)));

    const Eigen::MatrixXd hb = h_bar(cartan, hhat, pt);
    hbar_indep = std::max(hbar_indep, max_abs_entry(hb - h_bar(other, hhat, pt)));
    const Eigen::MatrixXd M = tetrad_matrix(cartan, pt);
    Eigen::MatrixXd g(M.cols(), M.cols());
    for (int mu = 0; mu < M.cols(); ++mu) {
      for (int nu = 0; nu < M.cols(); ++nu) g(mu, nu) = triple.g[mu][nu].values(pt)[0];
    }
    pull = std::max(pull, max_abs_entry(g - M.transpose() * hb * M));

    const Eigen::VectorXd vbar = random_vector(gen.rng(), dq);
    lift_indep = std::max(lift_indep, (nabla_bar(cartan, hhat, vbar, pt) -
                                       nabla_bar(cartan, hhat, vbar, pt, random_vector(gen.rng(), dh)))
                                          .cwiseAbs()
                                          .maxCoeff());
    if (compatible) {
      theta_pi = std::max(theta_pi, max_abs_entry(T - cartan.split->pi_h()));
      const Eigen::MatrixXd& ip = cartan.split->i_p();
      const Eigen::MatrixXd ibar = ip * (pair.quotient() * ip).inverse();
      Eigen::MatrixXd nb(dg, dq);
      for (int a = 0; a < dq; ++a) nb.col(a) = nabla_bar(cartan, hhat, Eigen::VectorXd::Unit(dq, a), pt);
      nabla_ibar = std::max(nabla_ibar, max_abs_entry(nb - ibar));
    }

    const std::vector<std::vector<double>> at{pt};
    const Field X = gen.polynomial(cartan.chart()->n(), 2);
    const AlgebraField hv = gen.algebra_field(pair, ValueSpace::H, 2);
    const AlgebraField hw = gen.algebra_field(pair, ValueSpace::H, 2);
    const Section kv = kernel_inject(pair, hv, Side::P);
    orth = std::max(orth, max_abs(pullback_metric(cartan, hhat, horizontal_lift(triple.connection, X), kv), at));
    const double ghat = pullback_metric(cartan, hhat, kv, kernel_inject(pair, hw, Side::P)).values(pt)[0];
    h_restrict = std::max(h_restrict, std::abs(ghat - triple.h(hv.vector(pt), hw.vector(pt))));
  }

  std::vector<CheckResult> out = {
      make_check("p_h idempotent", idem, 1e-10),
      make_check("p_h o i = i", incl, 1e-10),
      make_check("rank p_h = dim h", rank, 0.0),
      make_check("hhat(i v, p_h w) = hhat(i v, w)", adj, 1e-8),
      make_check("p_h independent of the Cartan connection", indep, 1e-8),
      make_check("theta o i = Id", theta_i, 1e-10),
      make_check("ghat(nabla_X, iota v) = 0", orth, 1e-8),
      make_check("h = i* hhat", h_restrict, 1e-10),
      make_check("g = tvarpi* hbar", pull, 1e-8),
      make_check("hbar independent of the Cartan connection", hbar_indep, 1e-8),
      make_check("nabla_bar independent of the lift", lift_indep, 1e-10),
  };
  if (compatible) {
    out.push_back(make_check("theta = pi_h (reductive-compatible hhat)", theta_pi, 1e-10));
    out.push_back(make_check("nabla_bar = ibar (reductive-compatible hhat)", nabla_ibar, 1e-10));
  }
  return out;
}

}  // namespace cartan
