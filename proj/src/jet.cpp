#include "cartan/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "cartan/error.hpp"

namespace cartan {
namespace {

struct ProductEntry {
  std::uint32_t lhs;
  std::uint32_t rhs;
  std::uint32_t out;
};

struct DerivEntry {
  std::uint32_t src;
  double factor;
};

// Monomial tables for a fixed number of variables, built once up to kMaxJetOrder.
struct Tables {
  int nvars = 0;
  std::vector<std::vector<std::uint8_t>> monomials;
  std::vector<int> degree;
  std::array<std::size_t, kMaxJetOrder + 1> count_by_order{};
  std::vector<ProductEntry> products;  // sorted by deg(lhs) + deg(rhs)
  std::array<std::size_t, kMaxJetOrder + 1> product_count{};
  // derivs[var][t]: coefficient t of d/dvar comes from src with the given factor.
  std::vector<std::vector<DerivEntry>> derivs;
};

std::size_t encode(const std::vector<std::uint8_t>& e) {
  std::size_t key = 0;
  for (auto x : e) key = key * (kMaxJetOrder + 1) + x;
  return key;
}

void append_degree(int nvars, int deg, std::vector<std::uint8_t>& cur, int var,
                   std::vector<std::vector<std::uint8_t>>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(deg);
    out.push_back(cur);
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur[var] = static_cast<std::uint8_t>(k);
    append_degree(nvars, deg - k, cur, var + 1, out);
  }
  cur[var] = 0;
}

Tables build_tables(int nvars) {
  Tables t;
  t.nvars = nvars;
  std::vector<std::uint8_t> cur(nvars, 0);
  for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
    if (nvars == 0) {
      if (deg == 0) t.monomials.push_back({});
    } else {
      append_degree(nvars, deg, cur, 0, t.monomials);
    }
    t.count_by_order[deg] = t.monomials.size();
  }
  std::size_t key_space = 1;
  for (int i = 0; i < nvars; ++i) key_space *= (kMaxJetOrder + 1);
  std::vector<std::int32_t> lookup(key_space, -1);
  for (std::size_t i = 0; i < t.monomials.size(); ++i) {
    int d = 0;
    for (auto x : t.monomials[i]) d += x;
    t.degree.push_back(d);
    lookup[encode(t.monomials[i])] = static_cast<std::int32_t>(i);
  }

  std::vector<std::vector<ProductEntry>> by_degree(kMaxJetOrder + 1);
  std::vector<std::uint8_t> sum(nvars);
  for (std::size_t i = 0; i < t.monomials.size(); ++i) {
    for (std::size_t j = 0; j < t.monomials.size(); ++j) {
      const int d = t.degree[i] + t.degree[j];
      if (d > kMaxJetOrder) continue;
      for (int v = 0; v < nvars; ++v) sum[v] = t.monomials[i][v] + t.monomials[j][v];
      by_degree[d].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                              static_cast<std::uint32_t>(lookup[encode(sum)])});
    }
  }
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    t.products.insert(t.products.end(), by_degree[d].begin(), by_degree[d].end());
    t.product_count[d] = t.products.size();
  }

  t.derivs.resize(nvars);
  for (int v = 0; v < nvars; ++v) {
    for (std::size_t i = 0; i < t.count_by_order[kMaxJetOrder - 1]; ++i) {
      auto e = t.monomials[i];
      const double factor = e[v] + 1.0;
      e[v] += 1;
      t.derivs[v].push_back({static_cast<std::uint32_t>(lookup[encode(e)]), factor});
    }
  }
  return t;
}

const Tables& tables(int nvars) {
  if (nvars < 0 || nvars > kMaxJetVars) {
    throw std::invalid_argument("jet: unsupported number of variables " + std::to_string(nvars));
  }
  static std::array<std::once_flag, kMaxJetVars + 1> flags;
  static std::array<Tables, kMaxJetVars + 1> all;
  std::call_once(flags[nvars], [nvars] { all[nvars] = build_tables(nvars); });
  return all[nvars];
}

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw std::invalid_argument("jet: order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxJetOrder) + "]");
  }
}

// sum_k c[k] h^k for a jet h with zero constant term.
Jet compose_series(const Jet& h, const std::vector<double>& c) {
  Jet result = Jet::constant(h.nvars(), h.order(), c[0]);
  Jet power = Jet::constant(h.nvars(), h.order(), 1.0);
  for (int k = 1; k <= h.order(); ++k) {
    power *= h;
    result.add_scaled(power, c[k]);
  }
  return result;
}

Jet without_constant(const Jet& a) {
  Jet h = a;
  if (h.size() > 0) h.coeffs()[0] = 0.0;
  return h;
}

}  // namespace

std::size_t jet_size(int nvars, int order) {
  check_order(order);
  return tables(nvars).count_by_order[order];
}

std::span<const std::uint8_t> jet_monomial(int nvars, std::size_t index) {
  return tables(nvars).monomials.at(index);
}

Jet::Jet(int nvars, int order)
    : nvars_(nvars), order_(order), coeffs_(jet_size(nvars, order), 0.0) {}

Jet Jet::constant(int nvars, int order, double value) {
  Jet j(nvars, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int nvars, int order, int var, double value) {
  Jet j = constant(nvars, order, value);
  if (order >= 1) {
    // Degree-one monomials follow the constant, ordered x1, x2, ...
    j.coeffs_[1 + var] = 1.0;
  }
  return j;
}

void Jet::require_compatible(const Jet& other) const {
  if (nvars_ != other.nvars_ || order_ != other.order_) {
    throw std::logic_error("jet: mixing jets of different shape");
  }
}

Jet Jet::derivative(int var) const {
  if (order_ == 0) throw std::logic_error("jet: cannot differentiate an order-0 jet");
  Jet out(nvars_, order_ - 1);
  const auto& d = tables(nvars_).derivs[var];
  for (std::size_t t = 0; t < out.coeffs_.size(); ++t) {
    out.coeffs_[t] = d[t].factor * coeffs_[d[t].src];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw std::logic_error("jet: truncation cannot raise the order");
  Jet out(nvars_, order);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

Jet& Jet::operator+=(const Jet& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

void Jet::add_scaled(const Jet& b, double s) {
  require_compatible(b);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * b.coeffs_[i];
}

void Jet::add_product(const Jet& a, const Jet& b) {
  require_compatible(a);
  require_compatible(b);
  if (order_ == 0) {
    coeffs_[0] += a.coeffs_[0] * b.coeffs_[0];
    return;
  }
  const auto& t = tables(nvars_);
  const std::size_t count = t.product_count[order_];
  for (std::size_t e = 0; e < count; ++e) {
    const auto& p = t.products[e];
    coeffs_[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
  }
}

Jet& Jet::operator*=(const Jet& other) {
  require_compatible(other);
  if (order_ == 0) {
    coeffs_[0] *= other.coeffs_[0];
    return *this;
  }
  Jet out(nvars_, order_);
  out.add_product(*this, other);
  coeffs_ = std::move(out.coeffs_);
  return *this;
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0 || !std::isfinite(a0)) {
    throw Error(ErrorCode::EvaluationError, "division by zero");
  }
  std::vector<double> c(a.order() + 1);
  double term = 1.0 / a0;
  for (int k = 0; k <= a.order(); ++k) {
    c[k] = term;
    term *= -1.0 / a0;
  }
  return compose_series(without_constant(a), c);
}

Jet& Jet::operator/=(const Jet& other) {
  require_compatible(other);
  if (order_ == 0) {
    if (other.coeffs_[0] == 0.0) throw Error(ErrorCode::EvaluationError, "division by zero");
    coeffs_[0] /= other.coeffs_[0];
    return *this;
  }
  return *this *= reciprocal(other);
}

Jet exp(const Jet& a) {
  const double e0 = std::exp(a.value());
  std::vector<double> c(a.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = e0 / fact;
  }
  return compose_series(without_constant(a), c);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value());
  const double co = std::cos(a.value());
  const double cycle[4] = {s, co, -s, -co};
  std::vector<double> c(a.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = cycle[k % 4] / fact;
  }
  return compose_series(without_constant(a), c);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value());
  const double co = std::cos(a.value());
  const double cycle[4] = {co, -s, -co, s};
  std::vector<double> c(a.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = cycle[k % 4] / fact;
  }
  return compose_series(without_constant(a), c);
}

Jet pow(const Jet& a, unsigned exponent) {
  Jet result = Jet::constant(a.nvars(), a.order(), 1.0);
  Jet base = a;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1u;
    if (exponent > 0) base *= base;
  }
  return result;
}

}  // namespace cartan
