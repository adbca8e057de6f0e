#include "cartan/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "cartan/error.hpp"

namespace cartan {

namespace {

Eigen::VectorXd vectorize(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

std::vector<int> complement(const std::vector<int>& indices, int dim) {
  std::vector<int> out;
  for (int k = 0; k < dim; ++k) {
    if (std::find(indices.begin(), indices.end(), k) == indices.end()) out.push_back(k);
  }
  return out;
}

Eigen::MatrixXd selection(const std::vector<int>& rows, int dim) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) s(static_cast<Eigen::Index>(r), rows[r]) = 1.0;
  return s;
}

void apply_terms(const std::vector<BracketTerm>& terms, const Eigen::VectorXd& a,
                 const Eigen::VectorXd& b, Eigen::VectorXd& out) {
  for (const auto& t : terms) out[t.k] += t.c * a[t.i] * b[t.j];
}

}  // namespace

struct MatrixLieAlgebra::Data {
  std::vector<Eigen::MatrixXd> basis;
  Eigen::MatrixXd vectorized;   // d^2 x m
  Eigen::MatrixXd pseudo_inverse;
  std::vector<double> constants;  // c^k_{ij} at (k * m + i) * m + j
  std::vector<BracketTerm> terms;
  int dim = 0;
  int rep_dim = 0;
};

MatrixLieAlgebra::MatrixLieAlgebra(std::vector<Eigen::MatrixXd> basis) {
  if (basis.empty()) throw Error(ErrorCode::DependentBasis, "empty basis");
  auto data = std::make_shared<Data>();
  const auto d = basis.front().rows();
  for (const auto& e : basis) {
    if (e.rows() != d || e.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "basis matrices must share one square shape");
    }
  }
  const int m = static_cast<int>(basis.size());
  data->dim = m;
  data->rep_dim = static_cast<int>(d);
  data->vectorized.resize(d * d, m);
  for (int i = 0; i < m; ++i) data->vectorized.col(i) = vectorize(basis[i]);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(data->vectorized, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() < m || sv[m - 1] < kNondegeneracyTol) {
    throw Error(ErrorCode::DependentBasis, "basis matrices are linearly dependent");
  }
  data->pseudo_inverse =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  data->basis = std::move(basis);

  data->constants.assign(static_cast<std::size_t>(m) * m * m, 0.0);
  auto at = [m](int k, int i, int j) { return (static_cast<std::size_t>(k) * m + i) * m + j; };
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Eigen::VectorXd c = vectorize(commutator(data->basis[i], data->basis[j]));
      const Eigen::VectorXd coeffs = data->pseudo_inverse * c;
      const double residual = (data->vectorized * coeffs - c).norm();
      if (residual > kClosureTol) {
        throw Error(ErrorCode::NotClosed, "[e" + std::to_string(i + 1) + ", e" +
                                              std::to_string(j + 1) +
                                              "] leaves the span, residual " +
                                              std::to_string(residual));
      }
      for (int k = 0; k < m; ++k) {
        data->constants[at(k, i, j)] = coeffs[k];
        data->constants[at(k, j, i)] = -coeffs[k];
      }
    }
  }
  // Round-off below the closure tolerance is snapped to zero so the sparse tables stay sparse.
  for (auto& c : data->constants) {
    if (std::abs(c) < kClosureTol) c = 0.0;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        const double c = data->constants[at(k, i, j)];
        if (c != 0.0) data->terms.push_back({i, j, k, c});
      }
    }
  }

  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int l = 0; l < m; ++l) {
        for (int k = 0; k < m; ++k) {
          double s = 0.0;
          for (int p = 0; p < m; ++p) {
            s += data->constants[at(p, i, j)] * data->constants[at(k, p, l)] +
                 data->constants[at(p, j, l)] * data->constants[at(k, p, i)] +
                 data->constants[at(p, l, i)] * data->constants[at(k, p, j)];
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  if (worst > kClosureTol) {
    throw Error(ErrorCode::JacobiViolation, "Jacobi residual " + std::to_string(worst));
  }
  data_ = std::move(data);
}

int MatrixLieAlgebra::dim() const { return data_->dim; }
int MatrixLieAlgebra::rep_dim() const { return data_->rep_dim; }
const std::vector<Eigen::MatrixXd>& MatrixLieAlgebra::basis() const { return data_->basis; }

double MatrixLieAlgebra::structure_constant(int k, int i, int j) const {
  const auto m = static_cast<std::size_t>(data_->dim);
  return data_->constants[(k * m + i) * m + j];
}

const std::vector<BracketTerm>& MatrixLieAlgebra::bracket_terms() const { return data_->terms; }

Eigen::VectorXd MatrixLieAlgebra::bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != dim() || b.size() != dim()) {
    throw Error(ErrorCode::AlgebraMismatch, "coefficient vectors do not match algebra dimension");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  apply_terms(data_->terms, a, b, out);
  return out;
}

Eigen::MatrixXd MatrixLieAlgebra::to_matrix(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != dim()) {
    throw Error(ErrorCode::AlgebraMismatch, "coefficient vector does not match algebra dimension");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rep_dim(), rep_dim());
  for (int i = 0; i < dim(); ++i) m += coeffs[i] * data_->basis[i];
  return m;
}

Eigen::VectorXd MatrixLieAlgebra::coordinates(const Eigen::MatrixXd& m, double* residual) const {
  if (m.rows() != rep_dim() || m.cols() != rep_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match representation size");
  }
  const Eigen::VectorXd v = vectorize(m);
  Eigen::VectorXd coeffs = data_->pseudo_inverse * v;
  if (residual != nullptr) *residual = (data_->vectorized * coeffs - v).norm();
  return coeffs;
}

Eigen::MatrixXd MatrixLieAlgebra::ad(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
  for (const auto& t : data_->terms) out(t.k, t.j) += t.c * x[t.i];
  return out;
}

AlgebraElement::AlgebraElement(MatrixLieAlgebra algebra, Eigen::VectorXd coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != algebra_.dim()) {
    throw Error(ErrorCode::AlgebraMismatch, "element length does not match algebra dimension");
  }
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.algebra().same_as(b.algebra())) {
    throw Error(ErrorCode::AlgebraMismatch, "elements belong to different algebras");
  }
  return AlgebraElement(a.algebra(), a.algebra().bracket(a.coeffs(), b.coeffs()));
}

struct LiePair::Data {
  MatrixLieAlgebra g;
  std::vector<int> h;
  std::vector<int> q;
  Eigen::MatrixXd inclusion;
  Eigen::MatrixXd quotient;
  Eigen::MatrixXd h_part;
  std::vector<BracketTerm> h_terms;
  std::vector<BracketTerm> hg_terms;
};

LiePair::LiePair(MatrixLieAlgebra g, std::vector<int> h_indices) {
  auto data = std::make_shared<Data>();
  const int m = g.dim();
  std::set<int> seen;
  for (int k : h_indices) {
    if (k < 0 || k >= m || !seen.insert(k).second) {
      throw Error(ErrorCode::DimensionMismatch, "invalid h index " + std::to_string(k));
    }
  }
  data->q = complement(h_indices, m);
  std::vector<int> slot(m, -1);
  for (std::size_t a = 0; a < h_indices.size(); ++a) slot[h_indices[a]] = static_cast<int>(a);

  for (const auto& t : g.bracket_terms()) {
    const bool ih = slot[t.i] >= 0;
    const bool jh = slot[t.j] >= 0;
    if (ih && jh) {
      if (slot[t.k] < 0 && std::abs(t.c) > kClosureTol) {
        throw Error(ErrorCode::NotSubalgebra, "[e" + std::to_string(t.i + 1) + ", e" +
                                                  std::to_string(t.j + 1) +
                                                  "] has a component outside h");
      }
      data->h_terms.push_back({slot[t.i], slot[t.j], slot[t.k], t.c});
    }
    if (ih) data->hg_terms.push_back({slot[t.i], t.j, t.k, t.c});
  }
  data->inclusion = selection(h_indices, m).transpose();
  data->h_part = selection(h_indices, m);
  data->quotient = selection(data->q, m);
  data->g = std::move(g);
  data->h = std::move(h_indices);
  data_ = std::move(data);
}

const MatrixLieAlgebra& LiePair::g() const { return data_->g; }
const std::vector<int>& LiePair::h_indices() const { return data_->h; }
const std::vector<int>& LiePair::q_indices() const { return data_->q; }
int LiePair::dim_g() const { return data_->g.dim(); }
int LiePair::dim_h() const { return static_cast<int>(data_->h.size()); }
int LiePair::dim_q() const { return static_cast<int>(data_->q.size()); }
const Eigen::MatrixXd& LiePair::inclusion() const { return data_->inclusion; }
const Eigen::MatrixXd& LiePair::quotient() const { return data_->quotient; }
const Eigen::MatrixXd& LiePair::h_part() const { return data_->h_part; }
const std::vector<BracketTerm>& LiePair::h_terms() const { return data_->h_terms; }
const std::vector<BracketTerm>& LiePair::hg_terms() const { return data_->hg_terms; }

std::vector<Eigen::MatrixXd> LiePair::h_basis() const {
  std::vector<Eigen::MatrixXd> out;
  for (int k : data_->h) out.push_back(data_->g.basis()[k]);
  return out;
}

Eigen::VectorXd LiePair::quotient_project(const Eigen::VectorXd& x) const {
  if (x.size() != dim_g()) throw Error(ErrorCode::AlgebraMismatch, "expected a g element");
  return data_->quotient * x;
}

Eigen::VectorXd LiePair::h_bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != dim_h() || b.size() != dim_h()) {
    throw Error(ErrorCode::AlgebraMismatch, "expected h elements");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_h());
  apply_terms(data_->h_terms, a, b, out);
  return out;
}

struct ReductiveSplit::Data {
  LiePair pair;
  std::vector<int> p;
  Eigen::MatrixXd pi_h;
  Eigen::MatrixXd pi_p;
  Eigen::MatrixXd i_h;
  Eigen::MatrixXd i_p;
};

ReductiveSplit::ReductiveSplit(LiePair pair, std::vector<int> p_indices) {
  std::vector<int> sorted_p = p_indices;
  std::sort(sorted_p.begin(), sorted_p.end());
  std::vector<int> sorted_q = pair.q_indices();
  std::sort(sorted_q.begin(), sorted_q.end());
  if (sorted_p != sorted_q) {
    throw Error(ErrorCode::DimensionMismatch, "p indices must complement the h indices");
  }
  const auto& g = pair.g();
  const int m = g.dim();
  for (int a : pair.h_indices()) {
    for (int b : p_indices) {
      const Eigen::VectorXd c = g.bracket(Eigen::VectorXd::Unit(m, a), Eigen::VectorXd::Unit(m, b));
      for (int k : pair.h_indices()) {
        if (std::abs(c[k]) > kClosureTol) {
          throw Error(ErrorCode::NotHModule, "[e" + std::to_string(a + 1) + ", e" +
                                                 std::to_string(b + 1) + "] has an h component");
        }
      }
    }
  }
  auto data = std::make_shared<Data>();
  data->pi_h = pair.h_part();
  data->i_h = pair.inclusion();
  data->pi_p = selection(p_indices, m);
  data->i_p = data->pi_p.transpose();
  data->pair = std::move(pair);
  data->p = std::move(p_indices);
  data_ = std::move(data);
}

const LiePair& ReductiveSplit::pair() const { return data_->pair; }
const std::vector<int>& ReductiveSplit::p_indices() const { return data_->p; }
int ReductiveSplit::dim_p() const { return static_cast<int>(data_->p.size()); }
const Eigen::MatrixXd& ReductiveSplit::pi_h() const { return data_->pi_h; }
const Eigen::MatrixXd& ReductiveSplit::pi_p() const { return data_->pi_p; }
const Eigen::MatrixXd& ReductiveSplit::i_h() const { return data_->i_h; }
const Eigen::MatrixXd& ReductiveSplit::i_p() const { return data_->i_p; }

Eigen::MatrixXd ReductiveSplit::h_action_on_p(const Eigen::VectorXd& v) const {
  const auto& g = data_->pair.g();
  return data_->pi_p * g.ad(data_->i_h * v) * data_->i_p;
}

InvariantForm::InvariantForm(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "bilinear form must be a nonempty square matrix");
  }
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > kClosureTol) {
    throw Error(ErrorCode::NotSymmetric, "bilinear form is not symmetric");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
  if (svd.singularValues().minCoeff() <= kNondegeneracyTol) {
    throw Error(ErrorCode::Degenerate, "bilinear form is degenerate");
  }
}

InvariantForm InvariantForm::trace(const MatrixLieAlgebra& algebra) {
  return trace(algebra.basis());
}

InvariantForm InvariantForm::trace(const std::vector<Eigen::MatrixXd>& matrices) {
  const auto m = static_cast<Eigen::Index>(matrices.size());
  Eigen::MatrixXd b(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) b(i, j) = (matrices[i] * matrices[j]).trace();
  }
  return InvariantForm(std::move(b));
}

InvariantForm InvariantForm::identity(int dim) {
  return InvariantForm(Eigen::MatrixXd::Identity(dim, dim));
}

double InvariantForm::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != dim() || b.size() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vectors do not match the form dimension");
  }
  return a.dot(matrix_ * b);
}

double InvariantForm::ad_invariance_residual(const MatrixLieAlgebra& algebra) const {
  if (algebra.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "form/algebra size");
  return ad_invariance_residual(algebra.bracket_terms());
}

double InvariantForm::ad_invariance_residual(const std::vector<BracketTerm>& terms) const {
  const int m = dim();
  // ad matrices per basis element x: (ad_x)_{kj} = c^k_{xj}
  std::vector<Eigen::MatrixXd> ad(m, Eigen::MatrixXd::Zero(m, m));
  for (const auto& t : terms) ad[t.i](t.k, t.j) += t.c;
  double worst = 0.0;
  for (int x = 0; x < m; ++x) {
    // B(ad_x y, z) + B(y, ad_x z) = (ad_x^T B + B ad_x)_{yz}
    const Eigen::MatrixXd r = ad[x].transpose() * matrix_ + matrix_ * ad[x];
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

bool InvariantForm::is_ad_invariant(const MatrixLieAlgebra& algebra, double tol) const {
  return ad_invariance_residual(algebra) <= tol;
}

void InvariantForm::require_ad_invariant(const MatrixLieAlgebra& algebra, double tol) const {
  require_ad_invariant(algebra.bracket_terms(), tol);
}

void InvariantForm::require_ad_invariant(const std::vector<BracketTerm>& terms, double tol) const {
  const double r = ad_invariance_residual(terms);
  if (r > tol) {
    throw Error(ErrorCode::NotAdInvariant, "ad-invariance residual " + std::to_string(r));
  }
}

namespace {

Eigen::MatrixXd unit(int d, int r, int c) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
  e(r, c) = 1.0;
  return e;
}

}  // namespace

Model builtin_model(const std::string& name, int n) {
  Model model;
  model.name = name;
  model.n = n;
  std::vector<Eigen::MatrixXd> basis;
  const int d = n + 1;
  Eigen::VectorXd signature = Eigen::VectorXd::Ones(n);
  if (name == "poincare") {
    if (n != 4) throw Error(ErrorCode::UnknownModel, "poincare is only defined for n = 4");
    signature[0] = -1.0;
  } else if (name != "euclidean" && name != "sphere" && name != "hyperbolic") {
    throw Error(ErrorCode::UnknownModel, "unknown model '" + name + "'");
  }
  if (n < 1) throw Error(ErrorCode::UnknownModel, "model dimension must be positive");

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (name == "poincare") {
        basis.push_back(signature[b] * unit(d, a, b) - signature[a] * unit(d, b, a));
      } else {
        basis.push_back(unit(d, b, a) - unit(d, a, b));
      }
    }
  }
  const int dim_h = static_cast<int>(basis.size());
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd p = unit(d, a, n);
    if (name == "sphere") p -= unit(d, n, a);
    if (name == "hyperbolic") p += unit(d, n, a);
    basis.push_back(p);
  }
  std::vector<int> h(dim_h);
  std::iota(h.begin(), h.end(), 0);
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), dim_h);

  model.pair = LiePair(MatrixLieAlgebra(std::move(basis)), h);
  model.split = ReductiveSplit(model.pair, p);
  model.eta = signature.asDiagonal();
  return model;
}

Model builtin_model(const std::string& text) {
  std::string spec;
  for (char c : text) {
    if (c != '(' && c != ')' && c != ',') spec.push_back(c);
  }
  if (spec == "poincare" || spec == "poincare13") {
    return builtin_model("poincare", 4);
  }
  std::size_t pos = spec.size();
  while (pos > 0 && std::isdigit(static_cast<unsigned char>(spec[pos - 1]))) --pos;
  const std::string base = spec.substr(0, pos);
  const std::string digits = spec.substr(pos);
  if (digits.empty() || base.empty()) {
    throw Error(ErrorCode::UnknownModel, "cannot parse model name '" + text + "'");
  }
  return builtin_model(base, std::stoi(digits));
}

}  // namespace cartan
