#pragma once

#include <memory>
#include <span>
#include <vector>

namespace cartan {

/// How derivatives of fields are taken.
enum class Backend {
  Dual,       // forward-mode Taylor jets, exact up to round-off
  CentralFd,  // second-order central differences
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Tensor-product composite Simpson rule over the chart box.
struct QuadratureRule {
  int n = 0;
  std::vector<double> points;  // row-major, n coordinates per node
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

/// A coordinate box in R^n.
class Chart {
 public:
  explicit Chart(int n, std::vector<Interval> bounds = {}, int quad_points = 9,
                 Backend backend = Backend::Dual, double fd_step = 1e-5);

  int n() const { return n_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  int quad_points() const { return quad_points_; }
  Backend backend() const { return backend_; }
  double fd_step() const { return fd_step_; }

  bool contains(std::span<const double> pt) const;
  double volume() const;
  const QuadratureRule& quadrature() const { return rule_; }

  bool operator==(const Chart& other) const;

 private:
  int n_;
  std::vector<Interval> bounds_;
  int quad_points_;
  Backend backend_;
  double fd_step_;
  QuadratureRule rule_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(int n, std::vector<Interval> bounds = {}, int quad_points = 9,
                    Backend backend = Backend::Dual, double fd_step = 1e-5);

/// Same box and quadrature with a different derivative backend.
ChartPtr with_backend(const Chart& chart, Backend backend);

}  // namespace cartan
