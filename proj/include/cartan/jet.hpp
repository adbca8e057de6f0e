#pragma once

// Truncated multivariate Taylor polynomials.
//
// A Jet of order K in n variables stores the Taylor coefficients of a smooth
// function around a base point, for every monomial of total degree <= K.
// Monomials are ordered by total degree first, so the coefficients of a
// lower-order jet are a prefix of any higher-order one.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cartan {

inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxJetOrder = 8;

class Jet {
 public:
  Jet() = default;

  static Jet constant(int nvars, int order, double value);
  /// The jet of the coordinate function x_var around a base point with x_var = value.
  static Jet variable(int nvars, int order, int var, double value);

  int nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  double value() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
  double coeff(std::size_t i) const { return coeffs_[i]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  /// Partial derivative along `var`; the result has order() - 1.
  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double s);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  /// Fused a += s * b, the hot path for linear combinations.
  void add_scaled(const Jet& b, double s);
  void add_product(const Jet& a, const Jet& b);

  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet pow(const Jet& a, unsigned exponent);
  friend Jet reciprocal(const Jet& a);

 private:
  Jet(int nvars, int order);
  void require_compatible(const Jet& other) const;

  int nvars_ = 0;
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// Number of monomials of total degree <= order in nvars variables.
std::size_t jet_size(int nvars, int order);

/// Exponent vector of the i-th monomial in the graded ordering.
std::span<const std::uint8_t> jet_monomial(int nvars, std::size_t index);

}  // namespace cartan
