#pragma once

// Kernel metrics on g, the pulled-back algebroid metric, the extracted
// triple (g, h, connection) and the splitting maps built from them.

#include <cstdint>
#include <string>
#include <vector>

#include "cartan/connections.hpp"

namespace cartan {

/// n x n matrix of scalar fields.
using MatrixField = std::vector<std::vector<ScalarField>>;

/// Constant symmetric nondegenerate form on g-coefficients.
struct KernelMetric {
  LiePair pair;
  InvariantForm form;

  double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return form(a, b); }
  const Eigen::MatrixXd& matrix() const { return form.matrix(); }
};

KernelMetric kernel_metric(const LiePair& pair, const Eigen::MatrixXd& m);
/// "trace" or "euclidean".
KernelMetric kernel_metric(const LiePair& pair, const std::string& name);

/// hhat(varpi(s1), varpi(s2)) pointwise.
ScalarField pullback_metric(const CartanConnection& cartan, const KernelMetric& hhat, const Section& s1,
                            const Section& s2);

struct MetricPack {
  MatrixField g;
  InvariantForm h;
  LocalConnection connection;
};

/// dim_h x dim_g matrix K with A = K Abar; throws DegenerateInnerMetric.
Eigen::MatrixXd connection_map(const KernelMetric& hhat);
MetricPack extract_triple(const CartanConnection& cartan, const KernelMetric& hhat);

// Pointwise operators on g-coefficients.
Eigen::MatrixXd projector_ph(const CartanConnection& cartan, const KernelMetric& hhat, Point pt);
Eigen::MatrixXd theta(const CartanConnection& cartan, const KernelMetric& hhat, Point pt);
/// nabla_bar(vbar) = vhat - i(theta(vhat)); vhat lifts vbar by zero-padding plus i(lift_h).
Eigen::VectorXd nabla_bar(const CartanConnection& cartan, const KernelMetric& hhat, const Eigen::VectorXd& vbar,
                          Point pt, const Eigen::VectorXd& lift_h = {});
/// Gram matrix of hbar on g/h coordinates.
Eigen::MatrixXd h_bar(const CartanConnection& cartan, const KernelMetric& hhat, Point pt);

/// True when hhat pairs h with the complement p to zero.
bool is_reductive_compatible(const KernelMetric& hhat, const ReductiveSplit& split, double tol = 1e-12);

/// Probes every metric identity; `other` is a second Cartan connection for the independence checks.
std::vector<CheckResult> metric_checks(const CartanConnection& cartan, const CartanConnection& other,
                                       const KernelMetric& hhat, int samples, std::uint64_t seed);

}  // namespace cartan
