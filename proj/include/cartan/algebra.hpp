#pragma once

// Matrix Lie algebras, subalgebra pairs h in g, reductive splits and
// invariant bilinear forms. All types are immutable handles to shared data.

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace cartan {

inline constexpr double kClosureTol = 1e-10;
inline constexpr double kNondegeneracyTol = 1e-10;

/// One nonzero structure constant: [e_i, e_j] contains `c` times e_k.
struct BracketTerm {
  int i;
  int j;
  int k;
  double c;
};

class MatrixLieAlgebra {
 public:
  MatrixLieAlgebra() = default;
  /// Computes structure constants by least squares and validates closure and Jacobi.
  explicit MatrixLieAlgebra(std::vector<Eigen::MatrixXd> basis);

  int dim() const;
  int rep_dim() const;
  const std::vector<Eigen::MatrixXd>& basis() const;
  /// c^k_{ij}
  double structure_constant(int k, int i, int j) const;
  const std::vector<BracketTerm>& bracket_terms() const;

  Eigen::VectorXd bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& coeffs) const;
  /// Least-squares coordinates of a matrix; `residual` receives the fit error.
  Eigen::VectorXd coordinates(const Eigen::MatrixXd& m, double* residual = nullptr) const;
  /// Matrix of ad(x) acting on coefficient vectors.
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

  bool same_as(const MatrixLieAlgebra& other) const { return data_ == other.data_; }
  bool valid() const { return data_ != nullptr; }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

class AlgebraElement {
 public:
  AlgebraElement(MatrixLieAlgebra algebra, Eigen::VectorXd coeffs);

  const MatrixLieAlgebra& algebra() const { return algebra_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

 private:
  MatrixLieAlgebra algebra_;
  Eigen::VectorXd coeffs_;
};

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

class LiePair {
 public:
  LiePair() = default;
  LiePair(MatrixLieAlgebra g, std::vector<int> h_indices);

  const MatrixLieAlgebra& g() const;
  const std::vector<int>& h_indices() const;
  const std::vector<int>& q_indices() const;
  int dim_g() const;
  int dim_h() const;
  int dim_q() const;

  /// Inclusion h -> g on coefficients (dim_g x dim_h).
  const Eigen::MatrixXd& inclusion() const;
  /// Quotient projection g -> g/h on coefficients (dim_q x dim_g).
  const Eigen::MatrixXd& quotient() const;
  /// h-coordinates of a g-vector (dim_h x dim_g), the left inverse of inclusion().
  const Eigen::MatrixXd& h_part() const;

  const std::vector<BracketTerm>& h_terms() const;   // h x h -> h
  const std::vector<BracketTerm>& hg_terms() const;  // h x g -> g
  /// Basis matrices of h.
  std::vector<Eigen::MatrixXd> h_basis() const;

  Eigen::VectorXd quotient_project(const Eigen::VectorXd& x) const;
  Eigen::VectorXd h_bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  bool same_as(const LiePair& other) const { return data_ == other.data_; }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

class ReductiveSplit {
 public:
  ReductiveSplit() = default;
  ReductiveSplit(LiePair pair, std::vector<int> p_indices);

  const LiePair& pair() const;
  const std::vector<int>& p_indices() const;
  int dim_p() const;

  const Eigen::MatrixXd& pi_h() const;      // dim_h x dim_g
  const Eigen::MatrixXd& pi_p() const;      // dim_p x dim_g
  const Eigen::MatrixXd& i_h() const;       // dim_g x dim_h
  const Eigen::MatrixXd& i_p() const;       // dim_g x dim_p
  /// Matrix of the h-action on p for a given h element (dim_p x dim_p).
  Eigen::MatrixXd h_action_on_p(const Eigen::VectorXd& v) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

class InvariantForm {
 public:
  InvariantForm() = default;
  /// Requires a square, symmetric, nondegenerate matrix.
  explicit InvariantForm(Eigen::MatrixXd matrix);

  static InvariantForm trace(const MatrixLieAlgebra& algebra);
  /// Trace form tr(ab) on the span of the given matrices.
  static InvariantForm trace(const std::vector<Eigen::MatrixXd>& matrices);
  static InvariantForm identity(int dim);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  double ad_invariance_residual(const MatrixLieAlgebra& algebra) const;
  /// Residual of B([x,y],z) + B(y,[x,z]) over basis triples for the given bracket.
  double ad_invariance_residual(const std::vector<BracketTerm>& terms) const;
  bool is_ad_invariant(const MatrixLieAlgebra& algebra, double tol = kClosureTol) const;
  void require_ad_invariant(const MatrixLieAlgebra& algebra, double tol = kClosureTol) const;
  void require_ad_invariant(const std::vector<BracketTerm>& terms, double tol = kClosureTol) const;

 private:
  Eigen::MatrixXd matrix_;
};

/// A reductive Klein pair together with an invariant signature form on p.
struct Model {
  std::string name;
  int n = 0;
  LiePair pair;
  ReductiveSplit split;
  Eigen::MatrixXd eta;
};

/// name in {"euclidean", "sphere", "hyperbolic", "poincare"}; poincare requires n = 4.
Model builtin_model(const std::string& name, int n);
/// Parses CLI-style names such as "euclidean2", "sphere3" or "poincare" / "poincare13".
Model builtin_model(const std::string& spec);

}  // namespace cartan
