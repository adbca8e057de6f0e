#include "cartan/forms.hpp"

#include <algorithm>
#include <numeric>

#include "cartan/error.hpp"

namespace cartan {

namespace {

// Sign of the permutation that sorts `v` (entries distinct).
int permutation_sign(std::vector<int> v) {
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (v[i] != static_cast<int>(i)) {
      std::swap(v[i], v[v[i]]);
      sign = -sign;
    }
  }
  return sign;
}

int rank_sign(const std::vector<int>& idx) {
  std::vector<int> order(idx.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return idx[a] < idx[b]; });
  std::vector<int> inverse(idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) inverse[order[i]] = static_cast<int>(i);
  return permutation_sign(inverse);
}

bool has_repeats(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

// Increasing subsets of {0..n-1} of size k.
std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (pick[i]) s.push_back(i);
    }
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

std::vector<int> complement(const std::vector<int>& s, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (std::find(s.begin(), s.end(), i) == s.end()) out.push_back(i);
  }
  return out;
}

// Sign of the shuffle listing s first, then its complement.
int shuffle_sign(const std::vector<int>& s, const std::vector<int>& rest) {
  std::vector<int> perm = s;
  perm.insert(perm.end(), rest.begin(), rest.end());
  return permutation_sign(perm);
}

std::vector<std::vector<int>> ordered_tuples(int range, int length) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(length, 0);
  if (length == 0) return {{}};
  while (true) {
    if (!has_repeats(t)) out.push_back(t);
    int k = length - 1;
    while (k >= 0 && ++t[k] == range) t[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

template <typename T>
std::vector<T> without(const std::vector<T>& v, std::initializer_list<std::size_t> drop) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(v[i]);
  }
  return out;
}

AlgebraField add(const AlgebraField& a, const AlgebraField& b) {
  return AlgebraField(static_cast<const Field&>(a) + b, a.space());
}

AlgebraField scaled(double s, const AlgebraField& a) { return AlgebraField(s * a, a.space()); }

AlgebraField zero_value(const LiePair& pair, ValueSpace space, const ChartPtr& chart) {
  return AlgebraField(zero_field(chart, value_dim(pair, space)), space);
}

void require_value_space(ValueSpace space) {
  if (space != ValueSpace::H && space != ValueSpace::G) {
    throw Error(ErrorCode::ValueSpaceMismatch, "forms take values in h or g");
  }
}

}  // namespace

AlgebroidForm::AlgebroidForm(LiePair pair, int degree, ValueSpace space, Evaluator eval,
                             Provenance provenance, Side side)
    : pair_(std::move(pair)), degree_(degree), space_(space), eval_(std::move(eval)),
      provenance_(provenance), side_(side) {
  if (degree < 0) throw Error(ErrorCode::DegreeUnderflow, "negative form degree");
  if (degree > kMaxFormDegree) throw Error(ErrorCode::DegreeOverflow, "form degree above 3");
}

AlgebraField AlgebroidForm::operator()(const std::vector<Section>& args) const {
  if (static_cast<int>(args.size()) != degree_) {
    throw Error(ErrorCode::DimensionMismatch, "a " + std::to_string(degree_) + "-form takes " +
                                                  std::to_string(degree_) + " sections, got " +
                                                  std::to_string(args.size()));
  }
  for (const auto& s : args) {
    if (s.side != side_) throw Error(ErrorCode::SideMismatch, "section is on the wrong side");
    if (!s.pair.same_as(pair_)) throw Error(ErrorCode::AlgebraMismatch, "section uses another pair");
  }
  AlgebraField out = eval_(args);
  if (out.space() != space_) throw Error(ErrorCode::ValueSpaceMismatch, "form evaluator value space");
  return out;
}

AlgebroidForm function_form(const LiePair& pair, const AlgebraField& w, Side side) {
  if (w.components() != value_dim(pair, w.space())) {
    throw Error(ErrorCode::DimensionMismatch, "0-form value has the wrong size");
  }
  return AlgebroidForm(pair, 0, w.space(), [w](const std::vector<Section>&) { return w; },
                       Provenance::ClosedForm, side);
}

AlgebroidForm zero_form(const LiePair& pair, int degree, ValueSpace space, const ChartPtr& chart,
                        Side side) {
  const AlgebraField z = zero_value(pair, space, chart);
  return AlgebroidForm(pair, degree, space, [z](const std::vector<Section>&) { return z; },
                       Provenance::ClosedForm, side);
}

namespace {

void require_matching(const AlgebroidForm& a, const AlgebroidForm& b) {
  if (!a.pair().same_as(b.pair())) throw Error(ErrorCode::AlgebraMismatch, "forms use different pairs");
  if (a.degree() != b.degree()) throw Error(ErrorCode::DimensionMismatch, "forms differ in degree");
  if (a.value_space() != b.value_space()) {
    throw Error(ErrorCode::ValueSpaceMismatch, "forms differ in value space");
  }
  if (a.side() != b.side()) throw Error(ErrorCode::SideMismatch, "forms live on different sides");
}

Provenance combined(const AlgebroidForm& a, const AlgebroidForm& b) {
  return a.provenance() == Provenance::ClosedForm && b.provenance() == Provenance::ClosedForm
             ? Provenance::ClosedForm
             : Provenance::Derived;
}

}  // namespace

AlgebroidForm operator+(const AlgebroidForm& a, const AlgebroidForm& b) {
  require_matching(a, b);
  return AlgebroidForm(a.pair(), a.degree(), a.value_space(),
                       [a, b](const std::vector<Section>& s) { return add(a(s), b(s)); },
                       combined(a, b), a.side());
}

AlgebroidForm operator-(const AlgebroidForm& a, const AlgebroidForm& b) { return a + (-1.0) * b; }

AlgebroidForm operator*(double k, const AlgebroidForm& a) {
  return AlgebroidForm(a.pair(), a.degree(), a.value_space(),
                       [k, a](const std::vector<Section>& s) { return scaled(k, a(s)); },
                       a.provenance(), a.side());
}

AlgebroidForm koszul_differential(const AlgebroidForm& w) {
  require_value_space(w.value_space());
  if (w.degree() >= kMaxFormDegree) {
    throw Error(ErrorCode::DegreeOverflow, "differential of a form of degree " + std::to_string(w.degree()));
  }
  return AlgebroidForm(
      w.pair(), w.degree() + 1, w.value_space(),
      [w](const std::vector<Section>& s) {
        const std::size_t k = s.size();
        AlgebraField out = zero_value(w.pair(), w.value_space(), s.front().chart());
        for (std::size_t i = 0; i < k; ++i) {
          const double sign = i % 2 == 0 ? 1.0 : -1.0;
          out = add(out, scaled(sign, rep_action(s[i], w(without(s, {i})))));
        }
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = i + 1; j < k; ++j) {
            const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
            std::vector<Section> args{bracket_sections(s[i], s[j])};
            for (auto& r : without(s, {i, j})) args.push_back(std::move(r));
            out = add(out, scaled(sign, w(args)));
          }
        }
        return out;
      },
      Provenance::Derived, w.side());
}

AlgebroidForm contract(const Section& X, const AlgebroidForm& w) {
  if (w.degree() < 1) throw Error(ErrorCode::DegreeUnderflow, "contracting a 0-form");
  if (X.side != w.side()) throw Error(ErrorCode::SideMismatch, "contraction across sides");
  return AlgebroidForm(
      w.pair(), w.degree() - 1, w.value_space(),
      [X, w](const std::vector<Section>& s) {
        std::vector<Section> args{X};
        args.insert(args.end(), s.begin(), s.end());
        return w(args);
      },
      w.provenance(), w.side());
}

AlgebroidForm lie_derivative(const Section& X, const AlgebroidForm& w) {
  if (w.degree() >= kMaxFormDegree) {
    throw Error(ErrorCode::DegreeOverflow, "Lie derivative of a top-degree form");
  }
  const AlgebroidForm a = contract(X, koszul_differential(w));
  if (w.degree() == 0) return a;
  return a + koszul_differential(contract(X, w));
}

AlgebroidForm graded_bracket(const AlgebroidForm& a, const AlgebroidForm& b) {
  if (!a.pair().same_as(b.pair())) throw Error(ErrorCode::AlgebraMismatch, "forms use different pairs");
  if (a.value_space() != b.value_space()) {
    throw Error(ErrorCode::ValueSpaceMismatch, "bracket of forms with different value spaces");
  }
  if (a.side() != b.side()) throw Error(ErrorCode::SideMismatch, "forms live on different sides");
  const int p = a.degree();
  const int q = b.degree();
  if (p + q > kMaxFormDegree) throw Error(ErrorCode::DegreeOverflow, "bracket degree above 3");
  struct Split {
    std::vector<int> left;
    std::vector<int> right;
    double sign;
  };
  std::vector<Split> splits;
  for (auto& s : subsets(p + q, p)) {
    auto rest = complement(s, p + q);
    const double sign = shuffle_sign(s, rest);
    splits.push_back({std::move(s), std::move(rest), sign});
  }
  return AlgebroidForm(a.pair(), p + q, a.value_space(),
                       [a, b, splits](const std::vector<Section>& s) {
                         const ChartPtr chart = s.empty() ? a({}).chart() : s.front().chart();
                         AlgebraField out = zero_value(a.pair(), a.value_space(), chart);
                         for (const auto& sp : splits) {
                           std::vector<Section> l, r;
                           for (int i : sp.left) l.push_back(s[i]);
                           for (int i : sp.right) r.push_back(s[i]);
                           out = add(out, scaled(sp.sign, field_bracket(a.pair(), a(l), b(r))));
                         }
                         return out;
                       },
                       combined(a, b), a.side());
}

BigradedForm::BigradedForm(LiePair pair, ChartPtr chart, ValueSpace module, int degree)
    : pair_(std::move(pair)), chart_(std::move(chart)), module_(module), degree_(degree) {
  require_value_space(module);
  if (degree < 0) throw Error(ErrorCode::DegreeUnderflow, "negative form degree");
  if (degree > 2) throw Error(ErrorCode::DegreeOverflow, "bigraded forms stop at degree 2");
}

void BigradedForm::set(const std::vector<int>& mu, const std::vector<int>& a, const AlgebraField& coeff) {
  if (static_cast<int>(mu.size() + a.size()) != degree_) {
    throw Error(ErrorCode::DimensionMismatch, "index count does not match the degree");
  }
  if (coeff.space() != module_ || coeff.components() != value_dim(pair_, module_)) {
    throw Error(ErrorCode::ValueSpaceMismatch, "coefficient is not valued in the module");
  }
  require_same_chart(coeff, zero_field(chart_, 0));
  for (int m : mu) {
    if (m < 0 || m >= chart_->n()) throw Error(ErrorCode::DimensionMismatch, "chart index");
  }
  for (int x : a) {
    if (x < 0 || x >= pair_.dim_h()) throw Error(ErrorCode::DimensionMismatch, "algebra index");
  }
  if (has_repeats(mu) || has_repeats(a)) {
    throw Error(ErrorCode::DimensionMismatch, "repeated index in an antisymmetric block");
  }
  std::vector<int> pm = mu, pa = a;
  std::sort(pm.begin(), pm.end());
  std::sort(pa.begin(), pa.end());
  const int base = rank_sign(mu) * rank_sign(a);
  do {
    std::vector<int> qa = pa;
    do {
      const double sign = base * rank_sign(pm) * rank_sign(qa);
      coeffs_[{pm, qa}] = scaled(sign, coeff);
    } while (std::next_permutation(qa.begin(), qa.end()));
  } while (std::next_permutation(pm.begin(), pm.end()));
}

bool BigradedForm::has_coefficient(const std::vector<int>& mu, const std::vector<int>& a) const {
  return coeffs_.count({mu, a}) > 0;
}

AlgebraField BigradedForm::coefficient(const std::vector<int>& mu, const std::vector<int>& a) const {
  const auto it = coeffs_.find({mu, a});
  if (it != coeffs_.end()) return it->second;
  return zero_value(pair_, module_, chart_);
}

double BigradedForm::antisymmetry_residual(const std::vector<std::vector<double>>& pts) const {
  double worst = 0.0;
  for (const auto& [key, c] : coeffs_) {
    const auto& [mu, a] = key;
    for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
      auto m = mu;
      std::swap(m[i], m[i + 1]);
      worst = std::max(worst, max_abs(static_cast<const Field&>(c) + coefficient(m, a), pts));
    }
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      auto b = a;
      std::swap(b[i], b[i + 1]);
      worst = std::max(worst, max_abs(static_cast<const Field&>(c) + coefficient(mu, b), pts));
    }
  }
  return worst;
}

namespace {

void require_differentiable(const BigradedForm& w) {
  if (w.degree() > 1) throw Error(ErrorCode::DegreeOverflow, "bigraded differential needs degree <= 1");
}

}  // namespace

BigradedForm de_rham_part(const BigradedForm& w) {
  require_differentiable(w);
  BigradedForm out(w.pair(), w.chart(), w.module(), w.degree() + 1);
  const int n = w.chart()->n();
  for (int r = 1; r <= out.degree(); ++r) {
    const int s = out.degree() - r;
    for (const auto& nu : ordered_tuples(n, r)) {
      if (!std::is_sorted(nu.begin(), nu.end())) continue;
      for (const auto& a : ordered_tuples(w.pair().dim_h(), s)) {
        if (!std::is_sorted(a.begin(), a.end())) continue;
        AlgebraField sum = zero_value(w.pair(), w.module(), w.chart());
        for (std::size_t i = 0; i < nu.size(); ++i) {
          const double sign = i % 2 == 0 ? 1.0 : -1.0;
          const AlgebraField c = w.coefficient(without(nu, {i}), a);
          sum = add(sum, scaled(sign, AlgebraField(partial(c, nu[i]), w.module())));
        }
        out.set(nu, a, sum);
      }
    }
  }
  return out;
}

BigradedForm chevalley_eilenberg_part(const BigradedForm& w) {
  require_differentiable(w);
  const LiePair& pair = w.pair();
  const int dh = pair.dim_h();
  BigradedForm out(pair, w.chart(), w.module(), w.degree() + 1);
  std::vector<AlgebraField> basis;
  for (int a = 0; a < dh; ++a) {
    std::vector<double> e(dh, 0.0);
    e[a] = 1.0;
    basis.emplace_back(constant_field(w.chart(), e), ValueSpace::H);
  }
  for (int s = 1; s <= out.degree(); ++s) {
    const int r = out.degree() - s;
    const double outer = r % 2 == 0 ? 1.0 : -1.0;
    for (const auto& mu : ordered_tuples(w.chart()->n(), r)) {
      if (!std::is_sorted(mu.begin(), mu.end())) continue;
      for (const auto& a : ordered_tuples(dh, s)) {
        if (!std::is_sorted(a.begin(), a.end())) continue;
        AlgebraField sum = zero_value(pair, w.module(), w.chart());
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double sign = i % 2 == 0 ? 1.0 : -1.0;
          sum = add(sum, scaled(sign, field_bracket(pair, basis[a[i]], w.coefficient(mu, without(a, {i})))));
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
          for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
            for (const auto& t : pair.h_terms()) {
              if (t.i != a[i] || t.j != a[j]) continue;
              std::vector<int> b{t.k};
              for (int x : without(a, {i, j})) b.push_back(x);
              if (has_repeats(b)) continue;
              sum = add(sum, scaled(sign * t.c, w.coefficient(mu, b)));
            }
          }
        }
        out.set(mu, a, scaled(outer, sum));
      }
    }
  }
  return out;
}

BigradedForm bigraded_differential(const BigradedForm& w) {
  const BigradedForm d = de_rham_part(w);
  const BigradedForm s = chevalley_eilenberg_part(w);
  BigradedForm out(w.pair(), w.chart(), w.module(), w.degree() + 1);
  const int k = out.degree();
  for (int r = 0; r <= k; ++r) {
    for (const auto& mu : ordered_tuples(w.chart()->n(), r)) {
      if (!std::is_sorted(mu.begin(), mu.end())) continue;
      for (const auto& a : ordered_tuples(w.pair().dim_h(), k - r)) {
        if (!std::is_sorted(a.begin(), a.end())) continue;
        out.set(mu, a, add(d.coefficient(mu, a), s.coefficient(mu, a)));
      }
    }
  }
  return out;
}

AlgebroidForm to_functional(const BigradedForm& w) {
  const int k = w.degree();
  const int n = w.chart()->n();
  const int dh = w.pair().dim_h();
  const int m = value_dim(w.pair(), w.module());
  // One entry per (slot split, ordered chart tuple, ordered algebra tuple).
  struct Term {
    double sign;
    std::vector<int> chart_slots, mu, alg_slots, a;
    AlgebraField coeff;
  };
  std::vector<Term> terms;
  for (int r = 0; r <= k; ++r) {
    for (auto& slots : subsets(k, r)) {
      const auto rest = complement(slots, k);
      const double sign = shuffle_sign(slots, rest);
      for (const auto& mu : ordered_tuples(n, r)) {
        for (const auto& a : ordered_tuples(dh, k - r)) {
          if (!w.has_coefficient(mu, a)) continue;
          terms.push_back({sign, slots, mu, rest, a, w.coefficient(mu, a)});
        }
      }
    }
  }
  const ChartPtr chart = w.chart();
  const LiePair pair = w.pair();
  const ValueSpace module = w.module();
  return AlgebroidForm(pair, k, module, [terms, chart, module, n, m](const std::vector<Section>& s) {
    Field f(chart, m, [terms, s, n, m](Point pt, int order) {
      std::vector<std::vector<Jet>> X, g;
      for (const auto& sec : s) {
        X.push_back(sec.X.jets(pt, order));
        g.push_back(sec.gamma.jets(pt, order));
      }
      std::vector<Jet> out(m, Jet::constant(n, order, 0.0));
      for (const auto& t : terms) {
        Jet prod = Jet::constant(n, order, t.sign);
        for (std::size_t i = 0; i < t.mu.size(); ++i) prod *= X[t.chart_slots[i]][t.mu[i]];
        for (std::size_t i = 0; i < t.a.size(); ++i) prod *= g[t.alg_slots[i]][t.a[i]];
        const auto c = t.coeff.jets(pt, order);
        for (int j = 0; j < m; ++j) out[j].add_product(prod, c[j]);
      }
      return out;
    });
    return AlgebraField(std::move(f), module);
  });
}

}  // namespace cartan
