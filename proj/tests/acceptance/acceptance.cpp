// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/suites.hpp"

using namespace cartan;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void require_all(const std::vector<CheckResult>& checks, const std::string& tag) {
    if (checks.empty()) require(false, tag + ": no checks ran");
    for (const auto& c : checks) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " (residual %.3g > %.3g)", c.residual, c.tolerance);
      require(c.pass, tag + ": " + c.name + buf);
    }
  }
};

ChartPtr chart_for(const Model& m, Backend backend = Backend::Dual) { return make_chart(m.n, {}, 9, backend); }

FormComponents identity_tetrad(const Model& m, const ChartPtr& chart) {
  FormComponents out;
  for (int mu = 0; mu < m.n; ++mu) {
    std::vector<double> e(m.pair.dim_g(), 0.0);
    e[m.split.p_indices()[mu]] = 1.0;
    out.emplace_back(constant_field(chart, e), ValueSpace::G);
  }
  return out;
}

PalatiniConfig identity_config(const Model& m, const ChartPtr& chart) {
  return make_palatini_config(m, make_cartan_connection(m.pair, identity_tetrad(m, chart), m.split),
                              h_kernel_metric(m, "trace"));
}

std::vector<AlgebraField> random_h_fields(const Model& m, const ChartPtr& chart, int count, std::uint64_t seed) {
  SampleGenerator gen(chart, seed);
  std::vector<AlgebraField> out;
  for (int k = 0; k < count; ++k) out.push_back(gen.algebra_field(m.pair, ValueSpace::H, 2));
  return out;
}

const std::vector<std::string> kPlanar = {"euclidean2", "sphere2"};
const std::vector<std::string> kModels = {"euclidean2", "sphere2", "hyperbolic2", "sphere3"};

Outcome diagram() {
  Outcome o;
  const auto t0 = Clock::now();
  for (const auto& name : kPlanar) {
    const Model m = builtin_model(name);
    for (const auto& c : diagram_suite(m, chart_for(m), 100, 101)) {
      o.require(c.pass && (c.tolerance > 1e-12 || c.residual < 1e-12), name + ": " + c.name);
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime " + std::to_string(t) + " s >= 5 s");
  return o;
}

Outcome brackets() {
  Outcome o;
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    o.require_all(bracket_suite(m, chart_for(m), 50, 202), name);
  }
  return o;
}

Outcome calculus() {
  Outcome o;
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    o.require_all(calculus_suite(m, chart_for(m), 30, 303), name);
  }
  return o;
}

Outcome ehresmann() {
  Outcome o;
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    const auto chart = chart_for(m);
    o.require_all(ehresmann_suite(m, chart, 20, 404, twisted_connection(m, chart)), name);
  }
  return o;
}

Outcome cartan_connections() {
  Outcome o;
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    const auto checks = cartan_suite(m, chart_for(m), 20, 505);
    o.require_all(checks, name);
    bool model_check = name == "hyperbolic2" || name == "sphere3";
    for (const auto& c : checks) {
      model_check |= c.name == "flat model curvature vanishes" || c.name == "sphere h-curvature component = 1";
    }
    o.require(model_check, name + ": model curvature check missing");
  }
  return o;
}

Outcome q_criterion() {
  Outcome o;
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    o.require_all(q_criterion_suite(m, chart_for(m), 606), name);
  }
  return o;
}

Outcome metrics() {
  Outcome o;
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    o.require_all(metrics_suite(m, chart_for(m), 20, 707), name);
  }
  return o;
}

Outcome gauge() {
  Outcome o;
  const auto t0 = Clock::now();
  for (const auto& name : kModels) {
    const Model m = builtin_model(name);
    o.require_all(gauge_suite(m, chart_for(m), 10, 808), name);
  }
  const double t = seconds_since(t0);
  o.require(t < 30.0, "runtime " + std::to_string(t) + " s >= 30 s");
  return o;
}

Outcome palatini() {
  Outcome o;
  {
    const Model m = builtin_model("euclidean2");
    const auto chart = chart_for(m);
    const PalatiniSummary s = palatini_suite(identity_config(m, chart), {}, 1e-3, 0.0, 1e-10);
    o.require(std::abs(s.S) <= 1e-10, "flat action " + std::to_string(s.S));
    o.require_all(s.checks, "flat");
  }
  {
    const Model m = builtin_model("sphere2");
    const double dual = action(identity_config(m, chart_for(m, Backend::Dual)));
    const double fd = action(identity_config(m, chart_for(m, Backend::CentralFd)));
    o.require(std::abs(dual - 2.0) <= 1e-6 && std::abs(fd - 2.0) <= 1e-6, "sphere2 regression value 2 not reproduced");
    o.require(std::abs(dual - fd) <= 1e-6, "sphere2 backends differ by " + std::to_string(std::abs(dual - fd)));
  }
  {
    const Model m = builtin_model("sphere3");
    const auto chart = chart_for(m);
    SampleGenerator gen(chart, 909);
    const PalatiniConfig cfg = make_palatini_config(m, sample_cartan(m, gen, 0.1), h_kernel_metric(m, "trace"));
    const PalatiniSummary s = palatini_suite(cfg, random_h_fields(m, chart, 5, 910), 1e-3);
    o.require(s.variations.size() == 5, "expected 5 gauge directions");
    o.require_all(s.checks, "sphere3 gauge");
  }
  {
    const auto t0 = Clock::now();
    const Model m = builtin_model("poincare");
    const auto chart = make_chart(4, {}, 7);
    SampleGenerator gen(chart, 911);
    const PalatiniConfig cfg = make_palatini_config(m, sample_cartan(m, gen, 0.1), h_kernel_metric(m, "trace"));
    const PalatiniSummary s = palatini_suite(cfg, random_h_fields(m, chart, 1, 912), 1e-3);
    o.require(std::isfinite(s.S), "poincare action not finite");
    const double t = seconds_since(t0);
    o.require(t < 120.0, "poincare smoke runtime " + std::to_string(t) + " s >= 120 s");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 diagram exactness and commutativity", diagram},
      {"2 algebroid bracket", brackets},
      {"3 differential calculus", calculus},
      {"4 Ehresmann curvature and transport", ehresmann},
      {"5 Cartan connections", cartan_connections},
      {"6 Ehresmann-on-Q criterion", q_criterion},
      {"7 metrics", metrics},
      {"8 gauge algebra", gauge},
      {"9 Palatini action", palatini},
  };
  int failed = 0;
  for (const auto& [title, fn] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", title.c_str(), seconds_since(t0),
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
