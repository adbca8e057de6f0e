#include "cartan/palatini.hpp"

#include <cmath>

#include "cartan/error.hpp"
#include "cartan/gauge.hpp"

namespace cartan {

namespace {

constexpr double kInHTol = 1e-10;

// n x dim_p matrix sending p-coordinates to vectors in R^n (the last column of each generator).
Eigen::MatrixXd p_columns(const Model& model) {
  const int n = model.n;
  const auto& basis = model.pair.g().basis();
  Eigen::MatrixXd c(n, model.split.dim_p());
  for (int k = 0; k < model.split.dim_p(); ++k) c.col(k) = basis[model.split.p_indices()[k]].col(n).head(n);
  return c;
}

struct PointData {
  Eigen::MatrixXd b;                   // n x n, column mu is b_mu
  std::vector<Eigen::VectorXd> abar;   // g-coordinates of Abar_mu
  std::vector<std::vector<Eigen::VectorXd>> dabar;  // dabar[mu][nu] = d_nu Abar_mu
};

class Evaluator {
 public:
  explicit Evaluator(const PalatiniConfig& cfg) : cfg_(cfg), cols_(p_columns(cfg.model)) {
    const int n = cfg.model.n;
    for (int mu = 0; mu < n; ++mu) {
      std::vector<Field> row;
      for (int nu = 0; nu < n; ++nu) row.push_back(partial(cfg.cartan.components[mu], nu));
      partials_.push_back(std::move(row));
    }
  }

  PointData at(Point pt, bool derivatives) const {
    const int n = cfg_.model.n;
    PointData d;
    d.b.resize(n, n);
    for (int mu = 0; mu < n; ++mu) {
      d.abar.push_back(cfg_.cartan.components[mu].vector(pt));
      d.b.col(mu) = cols_ * (cfg_.model.split.pi_p() * d.abar.back());
      if (derivatives) {
        std::vector<Eigen::VectorXd> row;
        for (int nu = 0; nu < n; ++nu) row.push_back(partials_[mu][nu].vector(pt));
        d.dabar.push_back(std::move(row));
      }
    }
    return d;
  }

  Eigen::MatrixXd metric(const PointData& d) const {
    const Eigen::MatrixXd g = d.b.transpose() * cfg_.model.eta * d.b;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (std::abs(g.determinant()) <= 1e-12 * std::pow(scale, cfg_.model.n)) {
      throw Error(ErrorCode::SingularTetrad, "tetrad-induced metric is singular");
    }
    return g;
  }

  Eigen::VectorXd curvature(const PointData& d, int mu, int nu) const {
    return d.dabar[nu][mu] - d.dabar[mu][nu] + cfg_.model.pair.g().bracket(d.abar[mu], d.abar[nu]);
  }

  double integrand(Point pt) const {
    const int n = cfg_.model.n;
    const PointData d = at(pt, true);
    const Eigen::MatrixXd g = metric(d);
    const Eigen::MatrixXd gi = g.inverse();
    const Eigen::MatrixXd& hm = cfg_.kernel_metric.matrix();
    const Eigen::MatrixXd& pih = cfg_.model.split.pi_h();
    std::vector<std::vector<Eigen::VectorXd>> omega(n, std::vector<Eigen::VectorXd>(n));
    std::vector<std::vector<Eigen::VectorXd>> wedge(n, std::vector<Eigen::VectorXd>(n));
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        if (mu == nu) continue;
        omega[mu][nu] = pih * curvature(d, mu, nu);
        wedge[mu][nu] = wedge_h(cfg_.model, d.b.col(mu), d.b.col(nu));
      }
    }
    double sum = 0.0;
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        if (mu == nu) continue;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const double w = gi(mu, a) * gi(nu, b);
            if (w != 0.0) sum += w * omega[mu][nu].dot(hm * wedge[a][b]);
          }
        }
      }
    }
    return cfg_.orientation * 0.5 * sum * std::sqrt(std::abs(g.determinant()));
  }

 private:
  const PalatiniConfig& cfg_;
  Eigen::MatrixXd cols_;
  std::vector<std::vector<Field>> partials_;
};

}  // namespace

PalatiniConfig make_palatini_config(Model model, CartanConnection cartan, InvariantForm kernel_metric,
                                    int orientation) {
  if (!cartan.pair.same_as(model.pair)) throw Error(ErrorCode::AlgebraMismatch, "connection and model differ");
  if (!cartan.split) cartan.split = model.split;
  if (model.split.dim_p() != model.n || static_cast<int>(cartan.components.size()) != model.n ||
      cartan.chart()->n() != model.n) {
    throw Error(ErrorCode::DimensionMismatch, "chart dimension must equal dim p");
  }
  if (model.pair.g().rep_dim() != model.n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "Palatini models act on R^(n+1)");
  }
  if ((model.eta - model.eta.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::NotSymmetric, "eta is not symmetric");
  }
  if (std::abs(model.eta.determinant()) < 1e-12) throw Error(ErrorCode::Degenerate, "eta is degenerate");
  if (kernel_metric.dim() != model.pair.dim_h()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel metric must live on h");
  }
  kernel_metric.require_ad_invariant(model.pair.h_terms());
  if (orientation != 1 && orientation != -1) throw Error(ErrorCode::ConfigError, "orientation must be +1 or -1");
  return {std::move(model), std::move(cartan), std::move(kernel_metric), orientation};
}

InvariantForm h_kernel_metric(const Model& model, const std::string& name) {
  if (name == "trace") return InvariantForm::trace(model.pair.h_basis());
  if (name == "euclidean") return InvariantForm::identity(model.pair.dim_h());
  throw Error(ErrorCode::ConfigError, "unknown kernel metric '" + name + "'");
}

Eigen::MatrixXd tetrad_vectors(const PalatiniConfig& cfg, Point pt) { return Evaluator(cfg).at(pt, false).b; }

Eigen::MatrixXd induced_metric(const PalatiniConfig& cfg, Point pt) {
  const Evaluator e(cfg);
  return e.metric(e.at(pt, false));
}

MatrixField induced_metric(const PalatiniConfig& cfg) {
  const int n = cfg.model.n;
  const Eigen::MatrixXd cols = p_columns(cfg.model);
  std::vector<Field> b;
  for (const auto& c : cfg.cartan.components) b.push_back(linear_map(cols * cfg.model.split.pi_p(), c));
  MatrixField g(n, std::vector<ScalarField>(n));
  for (int mu = 0; mu < n; ++mu) {
    const Field eb = linear_map(cfg.model.eta, b[mu]);
    for (int nu = 0; nu < n; ++nu) {
      std::vector<Field> parts;
      for (int a = 0; a < n; ++a) parts.push_back(component(b[nu], a));
      g[mu][nu] = contract(eb, parts);
    }
  }
  return g;
}

Eigen::MatrixXd h_on_vectors(const Model& model, const Eigen::VectorXd& v) {
  return model.pair.g().to_matrix(model.pair.inclusion() * v).topLeftCorner(model.n, model.n);
}

Eigen::VectorXd wedge_h(const Model& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = model.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = (x * y.transpose() - y * x.transpose()) * model.eta;
  double residual = 0.0;
  const Eigen::VectorXd c = model.pair.g().coordinates(m, &residual);
  const Eigen::VectorXd h = model.pair.h_part() * c;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (residual > kInHTol * scale || (c - model.pair.inclusion() * h).cwiseAbs().maxCoeff() > kInHTol * scale) {
    throw Error(ErrorCode::NotInH, "tetrad wedge leaves the span of h");
  }
  return h;
}

CurvatureSplit h_curvature_and_torsion(const PalatiniConfig& cfg) {
  const TwoFormComponents f = field_strength(cfg.model.pair, cfg.cartan.components);
  CurvatureSplit out;
  for (const auto& row : f) {
    std::vector<AlgebraField> h, p;
    for (const auto& c : row) {
      h.emplace_back(linear_map(cfg.model.split.pi_h(), c), ValueSpace::H);
      p.emplace_back(linear_map(cfg.model.split.pi_p(), c), ValueSpace::P);
    }
    out.curvature.push_back(std::move(h));
    out.torsion.push_back(std::move(p));
  }
  return out;
}

double torsion_max(const PalatiniConfig& cfg) {
  const Evaluator e(cfg);
  const auto& rule = cfg.cartan.chart()->quadrature();
  const int n = cfg.model.n;
  double worst = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const PointData d = e.at(rule.point(i), true);
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = mu + 1; nu < n; ++nu) {
        worst = std::max(worst, (cfg.model.split.pi_p() * e.curvature(d, mu, nu)).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

TwoFormComponents beta_wedge_beta_t(const PalatiniConfig& cfg) {
  const int n = cfg.model.n;
  const ChartPtr chart = cfg.cartan.chart();
  const int dim_h = cfg.model.pair.dim_h();
  TwoFormComponents out(n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      auto eval = [cfg, mu, nu, n, dim_h](Point pt, int order) {
        if (order > 0) throw Error(ErrorCode::EvaluationError, "wedge components are evaluated pointwise only");
        const Eigen::MatrixXd b = tetrad_vectors(cfg, pt);
        const Eigen::VectorXd w = wedge_h(cfg.model, b.col(mu), b.col(nu));
        std::vector<Jet> jets;
        for (int k = 0; k < dim_h; ++k) jets.push_back(Jet::constant(n, 0, w[k]));
        return jets;
      };
      out[mu].emplace_back(Field(chart, dim_h, eval), ValueSpace::H);
    }
  }
  return out;
}

double action(const PalatiniConfig& cfg) {
  const Evaluator e(cfg);
  return integrate(*cfg.cartan.chart(), [&](Point pt) { return e.integrand(pt); });
}

PalatiniConfig gauge_transform(const PalatiniConfig& cfg, const AlgebraField& v, double eps) {
  const FormComponents delta = lie_derivative_cartan(kernel_inject(cfg.model.pair, v, Side::P), cfg.cartan);
  FormComponents next;
  for (std::size_t mu = 0; mu < delta.size(); ++mu) {
    next.emplace_back(static_cast<const Field&>(cfg.cartan.components[mu]) + eps * delta[mu], ValueSpace::G);
  }
  PalatiniConfig out = cfg;
  out.cartan = make_cartan_connection(cfg.model.pair, std::move(next), cfg.cartan.split, cfg.cartan.normalized);
  return out;
}

bool GaugeVariation::agree(double rel) const {
  const double hi = std::max(ratio, ratio_half);
  const double floor = 1e-7 * std::max(1.0, std::abs(S));
  return hi <= floor || std::abs(ratio - ratio_half) <= rel * hi;
}

GaugeVariation gauge_variation(const PalatiniConfig& cfg, const AlgebraField& v, double eps) {
  GaugeVariation r;
  r.S = action(cfg);
  r.S_eps = action(gauge_transform(cfg, v, eps));
  r.S_half = action(gauge_transform(cfg, v, eps / 2));
  r.ratio = std::abs(r.S_eps - r.S) / (eps * eps);
  r.ratio_half = std::abs(r.S_half - r.S) / (eps * eps / 4);
  return r;
}

}  // namespace cartan
