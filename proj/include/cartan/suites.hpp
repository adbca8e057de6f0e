#pragma once

// Randomized verification suites shared by the command-line tool and the
// acceptance gate. Each returns named residuals with their tolerances.

#include <cstdint>
#include <optional>
#include <vector>

#include "cartan/gauge.hpp"
#include "cartan/palatini.hpp"

namespace cartan {

/// Identity tetrad plus `size` times a random polynomial in every g-direction.
CartanConnection sample_cartan(const Model& model, SampleGenerator& gen, double size = 0.1);
/// Abg = x1 dx2 (x) (first h generator); needs n >= 2.
LocalConnection twisted_connection(const Model& model, const ChartPtr& chart);

/// Exactness and commutativity of the diagram maps.
std::vector<CheckResult> diagram_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed);
/// Jacobi identity, [s, iota v] = iota(s.v) and the anchor homomorphism.
std::vector<CheckResult> bracket_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed);
/// hd^2 = 0 and the Koszul differential against the bigraded d + s'.
std::vector<CheckResult> calculus_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed);
/// Curvature routes over the quadrature grid and the transport relations; `fixed` is always included.
std::vector<CheckResult> ehresmann_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed,
                                         const std::optional<LocalConnection>& fixed = std::nullopt);
/// Normalization, inverse round trip, curvature identities and reductive components.
std::vector<CheckResult> cartan_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed,
                                      const std::optional<CartanConnection>& fixed = std::nullopt);
/// Ten constructed Q-side connections: verdicts against the rank of X -> [A(X)] on the probe grid.
std::vector<CheckResult> q_criterion_suite(const Model& model, const ChartPtr& chart, std::uint64_t seed);
/// Metric identities for a generic SPD kernel metric and, when given, a configured one.
std::vector<CheckResult> metrics_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed,
                                       const std::optional<Eigen::MatrixXd>& hhat = std::nullopt);
/// Variation identities and the W commutator algebra.
std::vector<CheckResult> gauge_suite(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed);

struct PalatiniSummary {
  double S = 0;
  double torsion_max = 0;
  /// Worst ratio mismatch |r - r_half| / max(r, r_half) over the gauge directions.
  double gauge_ratio = 0;
  std::vector<GaugeVariation> variations;
  std::vector<CheckResult> checks;
};

/// Action, torsion and the gauge-invariance ratios along each v.
PalatiniSummary palatini_suite(const PalatiniConfig& cfg, const std::vector<AlgebraField>& gauge_v, double eps,
                               std::optional<double> expected_action = std::nullopt, double action_tol = 1e-10);

}  // namespace cartan
