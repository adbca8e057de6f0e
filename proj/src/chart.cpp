#include "cartan/chart.hpp"

#include <string>

#include "cartan/error.hpp"
#include "cartan/jet.hpp"

namespace cartan {

namespace {

QuadratureRule simpson_rule(const std::vector<Interval>& bounds, int points_per_axis) {
  const int n = static_cast<int>(bounds.size());
  std::vector<std::vector<double>> nodes(n);
  std::vector<std::vector<double>> weights(n);
  for (int a = 0; a < n; ++a) {
    const double h = (bounds[a].hi - bounds[a].lo) / (points_per_axis - 1);
    for (int k = 0; k < points_per_axis; ++k) {
      nodes[a].push_back(bounds[a].lo + k * h);
      double w = (k == 0 || k == points_per_axis - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      weights[a].push_back(w * h / 3.0);
    }
  }
  QuadratureRule rule;
  rule.n = n;
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(points_per_axis);
  rule.points.reserve(total * n);
  rule.weights.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      rule.points.push_back(nodes[a][idx[a]]);
      w *= weights[a][idx[a]];
    }
    rule.weights.push_back(w);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < points_per_axis) break;
      idx[a] = 0;
    }
  }
  return rule;
}

}  // namespace

Chart::Chart(int n, std::vector<Interval> bounds, int quad_points, Backend backend, double fd_step)
    : n_(n),
      bounds_(std::move(bounds)),
      quad_points_(quad_points),
      backend_(backend),
      fd_step_(fd_step) {
  if (n_ < 1 || n_ > kMaxJetVars) {
    throw Error(ErrorCode::DimensionMismatch,
                "chart dimension must lie in [1, " + std::to_string(kMaxJetVars) + "]");
  }
  if (bounds_.empty()) bounds_.assign(n_, Interval{});
  if (static_cast<int>(bounds_.size()) != n_) {
    throw Error(ErrorCode::DimensionMismatch, "chart needs one interval per coordinate");
  }
  for (const auto& b : bounds_) {
    if (!(b.lo < b.hi)) throw Error(ErrorCode::DimensionMismatch, "chart interval is empty");
  }
  if (quad_points_ < 3 || quad_points_ % 2 == 0) {
    throw Error(ErrorCode::DimensionMismatch, "quad_points must be odd and at least 3");
  }
  if (!(fd_step_ > 0.0)) throw Error(ErrorCode::DimensionMismatch, "fd step must be positive");
  rule_ = simpson_rule(bounds_, quad_points_);
}

bool Chart::contains(std::span<const double> pt) const {
  if (static_cast<int>(pt.size()) != n_) return false;
  for (int a = 0; a < n_; ++a) {
    if (!(pt[a] >= bounds_[a].lo && pt[a] <= bounds_[a].hi)) return false;
  }
  return true;
}

double Chart::volume() const {
  double v = 1.0;
  for (const auto& b : bounds_) v *= b.hi - b.lo;
  return v;
}

bool Chart::operator==(const Chart& other) const {
  if (n_ != other.n_ || quad_points_ != other.quad_points_ || backend_ != other.backend_ ||
      fd_step_ != other.fd_step_) {
    return false;
  }
  for (int a = 0; a < n_; ++a) {
    if (bounds_[a].lo != other.bounds_[a].lo || bounds_[a].hi != other.bounds_[a].hi) return false;
  }
  return true;
}

ChartPtr make_chart(int n, std::vector<Interval> bounds, int quad_points, Backend backend,
                    double fd_step) {
  return std::make_shared<const Chart>(n, std::move(bounds), quad_points, backend, fd_step);
}

ChartPtr with_backend(const Chart& chart, Backend backend) {
  return make_chart(chart.n(), chart.bounds(), chart.quad_points(), backend, chart.fd_step());
}

}  // namespace cartan
