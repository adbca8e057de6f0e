#pragma once

// Algebroid forms, stored as functions of their section arguments. The bigraded coefficient representation is kept only to
// cross-check the Koszul differential.

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "cartan/algebroid.hpp"

namespace cartan {

inline constexpr int kMaxFormDegree = 3;

enum class Provenance { ClosedForm, Derived };

class AlgebroidForm {
 public:
  using Evaluator = std::function<AlgebraField(const std::vector<Section>&)>;

  AlgebroidForm(LiePair pair, int degree, ValueSpace space, Evaluator eval,
                Provenance provenance = Provenance::Derived, Side side = Side::P);

  const LiePair& pair() const { return pair_; }
  int degree() const { return degree_; }
  ValueSpace value_space() const { return space_; }
  Provenance provenance() const { return provenance_; }
  /// Forms on the Q side take sections X + gamma with g-valued gamma.
  Side side() const { return side_; }

  /// Checks arity and that every argument is a section of the form's side and pair.
  AlgebraField operator()(const std::vector<Section>& args) const;

 private:
  LiePair pair_;
  int degree_;
  ValueSpace space_;
  Evaluator eval_;
  Provenance provenance_;
  Side side_;
};

/// The 0-form with value w.
AlgebroidForm function_form(const LiePair& pair, const AlgebraField& w, Side side = Side::P);
AlgebroidForm zero_form(const LiePair& pair, int degree, ValueSpace space, const ChartPtr& chart,
                        Side side = Side::P);

AlgebroidForm operator+(const AlgebroidForm& a, const AlgebroidForm& b);
AlgebroidForm operator-(const AlgebroidForm& a, const AlgebroidForm& b);
AlgebroidForm operator*(double s, const AlgebroidForm& a);

AlgebroidForm koszul_differential(const AlgebroidForm& w);
AlgebroidForm contract(const Section& X, const AlgebroidForm& w);
AlgebroidForm lie_derivative(const Section& X, const AlgebroidForm& w);
/// [a, b](s_1..s_{p+q}) = sum over (p,q)-shuffles of sgn * [a(s_I), b(s_J)].
AlgebroidForm graded_bracket(const AlgebroidForm& a, const AlgebroidForm& b);

/// Coefficients of a form of fixed total degree on the trivialized algebroid,
/// split into (r chart slots, s algebra slots). Coefficients are stored for
/// every ordered index tuple and are fully antisymmetric in each block.
class BigradedForm {
 public:
  BigradedForm(LiePair pair, ChartPtr chart, ValueSpace module, int degree);

  const LiePair& pair() const { return pair_; }
  const ChartPtr& chart() const { return chart_; }
  ValueSpace module() const { return module_; }
  int degree() const { return degree_; }

  /// Sets the (mu; a) coefficient and its antisymmetric images; repeated indices must not occur.
  void set(const std::vector<int>& mu, const std::vector<int>& a, const AlgebraField& coeff);
  /// Coefficient for r = mu.size(), s = a.size(); zero when never set.
  AlgebraField coefficient(const std::vector<int>& mu, const std::vector<int>& a) const;
  bool has_coefficient(const std::vector<int>& mu, const std::vector<int>& a) const;

  /// Largest violation of block antisymmetry over the points.
  double antisymmetry_residual(const std::vector<std::vector<double>>& pts) const;

 private:
  using Key = std::pair<std::vector<int>, std::vector<int>>;
  LiePair pair_;
  ChartPtr chart_;
  ValueSpace module_;
  int degree_;
  std::map<Key, AlgebraField> coeffs_;
};

/// d-hat on chart indices plus (-1)^r times the Chevalley-Eilenberg differential on algebra indices.
BigradedForm bigraded_differential(const BigradedForm& w);
BigradedForm de_rham_part(const BigradedForm& w);
BigradedForm chevalley_eilenberg_part(const BigradedForm& w);
AlgebroidForm to_functional(const BigradedForm& w);

}  // namespace cartan
