#pragma once

// Ehresmann connections (local h- or g-valued 1-forms A) and Cartan
// connections (g-valued Abar whose quotient part is a tetrad), with their
// algebroid forms, lifts, curvatures and the Cartan isomorphism test.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cartan/algebroid.hpp"
#include "cartan/forms.hpp"

namespace cartan {

inline constexpr double kDefaultCondMax = 1e8;

/// Components of a chart 1-form with algebra values, one field per coordinate.
using FormComponents = std::vector<AlgebraField>;
/// F[mu][nu] of a 2-form, antisymmetric.
using TwoFormComponents = std::vector<std::vector<AlgebraField>>;

/// sum_mu X^mu a_mu
AlgebraField contract_components(const VectorField& X, const FormComponents& a);
/// d_mu a_nu - d_nu a_mu + [a_mu, a_nu]
TwoFormComponents field_strength(const LiePair& pair, const FormComponents& a);
/// Max component difference of two 1-forms over points.
double components_difference(const FormComponents& a, const FormComponents& b,
                             const std::vector<std::vector<double>>& pts);

struct LocalConnection {
  LiePair pair;
  Side side = Side::P;
  FormComponents components;  // h-valued on side P, g-valued on side Q

  const ChartPtr& chart() const { return components.front().chart(); }
  AlgebraField operator()(const VectorField& X) const { return contract_components(X, components); }
};

LocalConnection make_local_connection(const LiePair& pair, Side side, FormComponents components);

struct CartanConnection {
  LiePair pair;
  FormComponents components;  // g-valued
  std::optional<ReductiveSplit> split;
  bool normalized = true;

  const ChartPtr& chart() const { return components.front().chart(); }
  AlgebraField operator()(const VectorField& X) const { return contract_components(X, components); }
  /// A = pi_h(Abar) as a P-side connection; throws NoSplit.
  LocalConnection ehresmann_part() const;
  /// B = pi_p(Abar), p-valued; throws NoSplit.
  FormComponents tetrad() const;
};

CartanConnection make_cartan_connection(const LiePair& pair, FormComponents components,
                                        std::optional<ReductiveSplit> split = std::nullopt,
                                        bool normalized = true);
/// Abar = i_h(A) + i_p(B) for a reductive split.
CartanConnection assemble_cartan(const ReductiveSplit& split, const FormComponents& A,
                                 const FormComponents& B);

/// (X + gamma) -> gamma - A(X), on the side of the connection.
AlgebroidForm omega_lie(const LocalConnection& conn);
Section horizontal_lift(const LocalConnection& conn, const VectorField& X);
TwoFormComponents curvature_local(const LocalConnection& conn);
/// Algebra part of [lift X, lift Y] - lift [X, Y].
AlgebraField curvature_via_lift(const LocalConnection& conn, const VectorField& X, const VectorField& Y);

LocalConnection transport_to_Q(const LocalConnection& conn);
/// Residuals of omega_Q o J = j o omega_P and R = rhat o omega_Q on random sections.
std::vector<CheckResult> transport_checks(const LocalConnection& conn, int samples, std::uint64_t seed,
                                          double tol = 1e-12);

/// (X + gamma) -> i_h(gamma) - Abar(X)
AlgebroidForm varpi_lie(const CartanConnection& cartan);

struct CartanVerdict {
  bool is_cartan = false;
  bool dimension_ok = false;
  bool is_generalized_iso = false;
  double worst_condition = std::numeric_limits<double>::infinity();
  /// First probe point where the tetrad fails, if any.
  std::optional<std::vector<double>> failure;
};

/// The dim(g/h) x n matrix M_{a mu} = [Abar_mu]^a at a point.
Eigen::MatrixXd tetrad_matrix(const CartanConnection& cartan, Point pt);
CartanVerdict check_cartan(const CartanConnection& cartan, const std::vector<std::vector<double>>& probes,
                           double cond_max = kDefaultCondMax);
/// Probes on the chart's quadrature grid.
CartanVerdict check_cartan(const CartanConnection& cartan, double cond_max = kDefaultCondMax);
std::vector<std::vector<double>> quadrature_points(const Chart& chart);

/// Solves varpi_lie(X + gamma) = w pointwise; throws SingularTetrad on evaluation.
Section varpi_inverse(const CartanConnection& cartan, const AlgebraField& w);
/// -[Abar(X)]
AlgebraField tvarpi(const CartanConnection& cartan, const VectorField& X);

struct CartanCurvature {
  AlgebroidForm functional;     // hd varpi - 1/2 [varpi, varpi]
  TwoFormComponents local;      // -Fbar
};

CartanCurvature cartan_curvature(const CartanConnection& cartan);

struct ReductiveComponents {
  AlgebroidForm omega;  // gamma - A(X), h-valued
  AlgebroidForm beta;   // -B(X), p-valued
};

ReductiveComponents reductive_components(const CartanConnection& cartan);
/// omega o iota = Id, beta o iota = 0 and tvarpi(X) = beta(lift X) on random data.
std::vector<CheckResult> reductive_checks(const CartanConnection& cartan, int samples, std::uint64_t seed,
                                          double tol = 1e-12);

struct QConnectionVerdict {
  CartanConnection candidate;
  CartanVerdict verdict;
  /// True when no probed X != 0 had a horizontal lift inside the image of J.
  bool ker_im_trivial = false;
};

QConnectionVerdict cartan_from_Q_connection(const LocalConnection& aq, std::uint64_t seed = 1,
                                            double cond_max = kDefaultCondMax);

}  // namespace cartan
