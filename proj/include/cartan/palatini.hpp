#pragma once

// The Palatini action of a reductive Cartan connection: tetrad metric, the
// h-curvature and torsion, the wedge of the tetrad with itself and the
// action integral with its first-order gauge invariance.

#include <string>
#include <vector>

#include "cartan/metrics.hpp"

namespace cartan {

struct PalatiniConfig {
  Model model;
  CartanConnection cartan;
  InvariantForm kernel_metric;  // on h
  int orientation = 1;
};

/// Validates dimensions, the split, eta and ad-invariance of the kernel metric.
PalatiniConfig make_palatini_config(Model model, CartanConnection cartan, InvariantForm kernel_metric,
                                    int orientation = 1);
/// "trace" (trace form of the h generators) or "euclidean".
InvariantForm h_kernel_metric(const Model& model, const std::string& name);

/// Columns b_mu in R^n of the tetrad at a point.
Eigen::MatrixXd tetrad_vectors(const PalatiniConfig& cfg, Point pt);
/// g_{mu nu} = b_mu^T eta b_nu; throws SingularTetrad.
Eigen::MatrixXd induced_metric(const PalatiniConfig& cfg, Point pt);
MatrixField induced_metric(const PalatiniConfig& cfg);

/// h-coordinates of (x y^T - y x^T) eta; throws NotInH.
Eigen::VectorXd wedge_h(const Model& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Matrix of an h element acting on R^n (upper-left block).
Eigen::MatrixXd h_on_vectors(const Model& model, const Eigen::VectorXd& v);

struct CurvatureSplit {
  TwoFormComponents curvature;  // pi_h of dAbar + [Abar, Abar]
  TwoFormComponents torsion;    // pi_p of the same
};

CurvatureSplit h_curvature_and_torsion(const PalatiniConfig& cfg);
/// Max component of the torsion over the quadrature grid.
double torsion_max(const PalatiniConfig& cfg);
TwoFormComponents beta_wedge_beta_t(const PalatiniConfig& cfg);

/// orientation * integral of h(Omega, *(beta ^ beta^t)) over the chart.
double action(const PalatiniConfig& cfg);

/// Abar -> Abar + eps (d v + [Abar, v]).
PalatiniConfig gauge_transform(const PalatiniConfig& cfg, const AlgebraField& v, double eps);

struct GaugeVariation {
  double S = 0;
  double S_eps = 0;
  double S_half = 0;
  double ratio = 0;       // |S_eps - S| / eps^2
  double ratio_half = 0;  // |S_half - S| / (eps/2)^2
  /// Ratios within rel of each other, or both below the round-off floor.
  bool agree(double rel = 0.1) const;
};

GaugeVariation gauge_variation(const PalatiniConfig& cfg, const AlgebraField& v, double eps = 1e-3);

}  // namespace cartan
