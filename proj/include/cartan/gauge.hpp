#pragma once

// Infinitesimal diffeomorphism and gauge actions on connection data: closed
// forms of Lie derivatives along sections, the background decomposition and
// the W-actions with their commutator algebra.

#include <cstdint>
#include <optional>
#include <vector>

#include "cartan/connections.hpp"

namespace cartan {

/// (L_X a)_mu = X^nu d_nu a_mu + (d_mu X^nu) a_nu
FormComponents lie_derivative_components(const VectorField& X, const FormComponents& a);
/// d f + [a, f] componentwise, for h- or g-valued f.
FormComponents covariant_derivative(const LiePair& pair, const FormComponents& a, const AlgebraField& f);
/// Components w(d_mu + 0) of a 1-form on the algebroid.
FormComponents trivialize(const AlgebroidForm& w, const ChartPtr& chart);

struct GaugeParameter {
  VectorField X;
  AlgebraField gamma;  // h-valued
  std::optional<LocalConnection> background;
};

/// X + (background(X) + gamma)
Section to_section(const LiePair& pair, const GaugeParameter& param);

/// -L_X A + d gamma + [A, gamma] for the section X + gamma.
FormComponents lie_derivative_ehresmann(const Section& s, const LocalConnection& A);
/// -L_X Abar + d i(gamma) + [Abar, i(gamma)]
FormComponents lie_derivative_cartan(const Section& s, const CartanConnection& cartan);

/// Connection data split as an h-valued A and a p-valued B.
struct GaugeState {
  FormComponents A;
  FormComponents B;
};

GaugeState operator+(const GaugeState& a, const GaugeState& b);
GaugeState operator-(const GaugeState& a, const GaugeState& b);
GaugeState operator*(double s, const GaugeState& a);
double state_difference(const GaugeState& a, const GaugeState& b, const std::vector<std::vector<double>>& pts);
GaugeState split_state(const CartanConnection& cartan);
/// h-on-p action gamma . B componentwise.
FormComponents act_on_p(const ReductiveSplit& split, const AlgebraField& gamma, const FormComponents& B);

/// (-L_X A + delta_gamma A, -L_X B - delta_gamma B) with delta_gamma B = gamma . B; throws NoSplit.
GaugeState lie_derivative_cartan_split(const Section& s, const CartanConnection& cartan);
/// The background decomposition of the variation along X + (background(X) + gamma), term by term.
GaugeState background_decompose(const VectorField& X, const AlgebraField& gamma, const LocalConnection& background,
                                const CartanConnection& cartan);

/// A pure diffeomorphism generator xi or a pure gauge generator Omega.
struct WGenerator {
  enum class Kind { Diffeo, Gauge };
  Kind kind;
  VectorField xi;
  AlgebraField omega;

  static WGenerator diffeo(VectorField xi) { return {Kind::Diffeo, std::move(xi), {}}; }
  static WGenerator gauge(AlgebraField omega) { return {Kind::Gauge, {}, std::move(omega)}; }
};

/// W(xi): dA = -L A + d(i Abg) + [A, i Abg], dB = -L B - (i Abg).B; W(Omega): dA = dOmega + [A, Omega], dB = -Omega.B
GaugeState w_action(const ReductiveSplit& split, const WGenerator& w, const LocalConnection& background,
                    const GaugeState& state);
/// (W_a(W_b s) - W_a(0)) - (W_b(W_a s) - W_b(0))
GaugeState w_commutator(const ReductiveSplit& split, const WGenerator& a, const WGenerator& b,
                        const LocalConnection& background, const GaugeState& state);
/// Rbg(X, Y) for the background curvature.
AlgebraField background_curvature(const LocalConnection& background, const VectorField& X, const VectorField& Y);

struct VariationReport {
  std::vector<CheckResult> checks;
  /// The same identities with the right-hand side negated; informational.
  std::vector<CheckResult> opposite_sign;
  bool pass() const;
};

VariationReport commutator_check(const ReductiveSplit& split, const VectorField& xi, const VectorField& xi2,
                                 const AlgebraField& omega, const AlgebraField& omega2,
                                 const LocalConnection& background, const GaugeState& state,
                                 const std::vector<std::vector<double>>& pts, double tol = 1e-6);

/// Closed-form versus functional routes, kernel vanishing, the split and background
/// forms, the W dictionary and the gauge transformation of varpi on random data.
VariationReport gauge_checks(const Model& model, const ChartPtr& chart, int samples, std::uint64_t seed);

}  // namespace cartan
