#include "cartan/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cartan/error.hpp"

namespace cartan {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ConfigError, path + ": " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) config_error(path + "/" + key, "missing required field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_error(path, "expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) config_error(path, "expected a string");
  return j.get<std::string>();
}

Eigen::MatrixXd matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_error(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != cols || cols == 0) config_error(rp, "rows must be arrays of equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = number(j[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

std::vector<int> indices(const json& j, const std::string& path) {
  if (!j.is_array()) config_error(path, "expected an array of indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<std::string> expressions(const json& j, const std::string& path) {
  if (!j.is_array()) config_error(path, "expected an array of expression strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (j[i].is_number()) {
      std::ostringstream s;
      s.precision(17);
      s << j[i].get<double>();
      out.push_back(s.str());
    } else {
      out.push_back(string(j[i], p));
    }
  }
  return out;
}

ComponentSpec::value_type component(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || s[0] != '@') config_error(path, "field references must start with '@'");
    return s.substr(1);
  }
  return expressions(j, path);
}

ComponentSpec components(const json& j, const std::string& path) {
  if (!j.is_array()) config_error(path, "expected one entry per coordinate");
  ComponentSpec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(component(j[i], path + "/" + std::to_string(i)));
  return out;
}

Model custom_model(const json& j, const std::string& path) {
  const json& b = require(j, "basis", path);
  if (!b.is_array() || b.empty()) config_error(path + "/basis", "expected a non-empty array of matrices");
  std::vector<Eigen::MatrixXd> basis;
  for (std::size_t i = 0; i < b.size(); ++i) basis.push_back(matrix(b[i], path + "/basis/" + std::to_string(i)));
  const std::vector<int> h = indices(require(j, "h_indices", path), path + "/h_indices");
  const std::vector<int> p = indices(require(j, "p_indices", path), path + "/p_indices");
  Model m;
  m.name = j.contains("name") ? string(j["name"], path + "/name") : "custom";
  m.n = static_cast<int>(p.size());
  try {
    m.pair = LiePair(MatrixLieAlgebra(std::move(basis)), h);
    m.split = ReductiveSplit(m.pair, p);
  } catch (const Error& e) {
    config_error(path, e.what());
  }
  m.eta = j.contains("eta") ? matrix(j["eta"], path + "/eta") : Eigen::MatrixXd::Identity(m.n, m.n);
  if (m.eta.rows() != m.n || m.eta.cols() != m.n) config_error(path + "/eta", "eta must be n x n with n = |p_indices|");
  return m;
}

Model model_from_name(const std::string& name, const std::string& path) {
  try {
    return builtin_model(name);
  } catch (const Error& e) {
    config_error(path, e.what());
  }
}

std::string label(const Model& m) {
  if (m.name == "poincare") return "poincare(1,3)";
  if (m.name == "euclidean" || m.name == "sphere" || m.name == "hyperbolic") return m.name + std::to_string(m.n);
  return m.name;
}

Backend backend_from(const std::string& s, const std::string& path) {
  if (s == "dual") return Backend::Dual;
  if (s == "fd") return Backend::CentralFd;
  config_error(path, "backend must be 'dual' or 'fd'");
}

// Resolves a component entry to a field with the expected number of values.
Field resolve(const ComponentSpec::value_type& entry, const RunConfig& cfg, const ChartPtr& chart, int dim,
              const std::string& path) {
  std::vector<std::string> src;
  if (const auto* name = std::get_if<std::string>(&entry)) {
    const auto it = cfg.fields.find(*name);
    if (it == cfg.fields.end()) config_error(path, "unknown field '@" + *name + "'");
    src = it->second;
  } else {
    src = std::get<std::vector<std::string>>(entry);
  }
  if (static_cast<int>(src.size()) != dim) {
    config_error(path, "expected " + std::to_string(dim) + " expressions, got " + std::to_string(src.size()));
  }
  try {
    return parse_field(chart, src);
  } catch (const Error& e) {
    config_error(path, e.what());
  }
}

FormComponents resolve_form(const ComponentSpec& spec, const RunConfig& cfg, const ChartPtr& chart, int dim,
                            ValueSpace space, const std::string& path) {
  if (static_cast<int>(spec.size()) != chart->n()) {
    config_error(path, "expected " + std::to_string(chart->n()) + " components, one per coordinate");
  }
  FormComponents out;
  for (std::size_t mu = 0; mu < spec.size(); ++mu) {
    out.emplace_back(resolve(spec[mu], cfg, chart, dim, path + "/" + std::to_string(mu)), space);
  }
  return out;
}

ChartPtr chart_for(const RunConfig& cfg, const Model& m, int quad_points) {
  if (cfg.n && *cfg.n != m.n) config_error("/chart/n", "chart dimension differs from the model's dim p");
  std::vector<Interval> bounds = cfg.bounds;
  if (!bounds.empty() && static_cast<int>(bounds.size()) != m.n) config_error("/chart/bounds", "one interval per coordinate");
  return make_chart(m.n, bounds, quad_points, cfg.backend);
}

struct Target {
  Model model;
  ChartPtr chart;
  int samples;
  bool configured;  // connection data from the config applies
};

void append(std::vector<CheckResult>& out, std::vector<CheckResult> more, const std::string& tag) {
  for (auto& c : more) {
    c.name = tag + c.name;
    out.push_back(std::move(c));
  }
}

// Runs one suite, turning library errors into a failing check.
template <class F>
void guarded(std::vector<CheckResult>& out, const std::string& tag, const std::string& suite, F&& f) {
  try {
    append(out, f(), tag);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    out.push_back(make_check(tag + suite + " raised " + e.what(), std::numeric_limits<double>::infinity(), 0.0));
  }
}

PalatiniConfig palatini_config(const RunConfig& cfg, const Target& t, bool perturb) {
  FormComponents abar;
  if (t.configured && cfg.cartan) {
    abar = resolve_form(*cfg.cartan, cfg, t.chart, t.model.pair.dim_g(), ValueSpace::G, "/cartan");
  } else if (perturb) {
    SampleGenerator gen(t.chart, cfg.seed);
    abar = sample_cartan(t.model, gen, 0.1).components;
  } else {
    for (int mu = 0; mu < t.model.n; ++mu) {
      std::vector<double> e(t.model.pair.dim_g(), 0.0);
      e[t.model.split.p_indices()[mu]] = 1.0;
      abar.emplace_back(constant_field(t.chart, e), ValueSpace::G);
    }
  }
  const InvariantForm h = t.configured ? h_kernel_metric(t.model, cfg.palatini.kernel_metric)
                                       : h_kernel_metric(t.model, "trace");
  return make_palatini_config(t.model, make_cartan_connection(t.model.pair, abar, t.model.split), h,
                              t.configured ? cfg.palatini.orientation : 1);
}

std::vector<AlgebraField> gauge_directions(const RunConfig& cfg, const Target& t, int random_count) {
  std::vector<AlgebraField> out;
  if (t.configured && !cfg.palatini.gauge_v.empty()) {
    for (std::size_t k = 0; k < cfg.palatini.gauge_v.size(); ++k) {
      out.emplace_back(resolve(cfg.palatini.gauge_v[k], cfg, t.chart, t.model.pair.dim_h(),
                               "/palatini/gauge_v/" + std::to_string(k)),
                       ValueSpace::H);
    }
    return out;
  }
  SampleGenerator gen(t.chart, cfg.seed + 17);
  for (int k = 0; k < random_count; ++k) out.push_back(gen.algebra_field(t.model.pair, ValueSpace::H, 2));
  return out;
}

void run_check(const std::string& suite, const RunConfig& cfg, const Target& t, const std::string& tag,
               std::vector<CheckResult>& out) {
  const Model& m = t.model;
  const std::uint64_t seed = cfg.seed;
  if (suite == "diagram") {
    guarded(out, tag, suite, [&] { return diagram_suite(m, t.chart, t.samples, seed); });
    guarded(out, tag, "bracket", [&] { return bracket_suite(m, t.chart, t.samples, seed + 1); });
  } else if (suite == "connections") {
    guarded(out, tag, "calculus", [&] { return calculus_suite(m, t.chart, t.samples, seed); });
    guarded(out, tag, suite, [&] {
      std::optional<LocalConnection> fixed;
      if (t.configured && cfg.connection) {
        fixed = make_local_connection(
            m.pair, Side::P, resolve_form(*cfg.connection, cfg, t.chart, m.pair.dim_h(), ValueSpace::H, "/connection"));
      }
      return ehresmann_suite(m, t.chart, t.samples, seed + 1, fixed);
    });
  } else if (suite == "cartan") {
    guarded(out, tag, suite, [&] {
      std::optional<CartanConnection> fixed;
      if (t.configured && cfg.cartan) {
        fixed = make_cartan_connection(
            m.pair, resolve_form(*cfg.cartan, cfg, t.chart, m.pair.dim_g(), ValueSpace::G, "/cartan"), m.split);
      }
      return cartan_suite(m, t.chart, t.samples, seed, fixed);
    });
    guarded(out, tag, "q-criterion", [&] { return q_criterion_suite(m, t.chart, seed + 1); });
  } else if (suite == "metrics") {
    std::optional<Eigen::MatrixXd> hhat;
    if (t.configured && cfg.metric) {
      try {
        if (const auto* name = std::get_if<std::string>(&*cfg.metric)) {
          hhat = kernel_metric(m.pair, *name).matrix();
        } else {
          hhat = kernel_metric(m.pair, std::get<Eigen::MatrixXd>(*cfg.metric)).matrix();
        }
      } catch (const Error& e) {
        config_error("/metric", e.what());
      }
    }
    guarded(out, tag, suite, [&] { return metrics_suite(m, t.chart, t.samples, seed, hhat); });
  } else if (suite == "gauge-algebra") {
    guarded(out, tag, suite, [&] { return gauge_suite(m, t.chart, t.samples, seed); });
  } else {
    config_error("command", "unknown check suite '" + suite + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error("/", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("/", "the configuration must be a JSON object");
  static const std::vector<std::string> known = {"model", "chart", "fields", "connection", "cartan", "metric",
                                                 "seed", "samples", "tolerance", "backend", "palatini"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) config_error("/" + key, "unknown field");
  }

  RunConfig cfg;
  const json& model = require(j, "model", "");
  if (model.is_string()) {
    cfg.model = model_from_name(model.get<std::string>(), "/model");
  } else if (model.is_object()) {
    cfg.model = custom_model(model, "/model");
  } else {
    config_error("/model", "expected a model name or an object with basis, h_indices and p_indices");
  }

  if (j.contains("chart")) {
    const json& c = j["chart"];
    if (!c.is_object()) config_error("/chart", "expected an object");
    if (c.contains("n")) cfg.n = integer(c["n"], "/chart/n");
    if (c.contains("quad_points")) cfg.quad_points = integer(c["quad_points"], "/chart/quad_points");
    if (cfg.quad_points < 3 || cfg.quad_points % 2 == 0) config_error("/chart/quad_points", "must be odd and at least 3");
    if (c.contains("bounds")) {
      const Eigen::MatrixXd b = matrix(c["bounds"], "/chart/bounds");
      if (b.cols() != 2) config_error("/chart/bounds", "each interval is [lo, hi]");
      for (int r = 0; r < b.rows(); ++r) {
        if (!(b(r, 0) < b(r, 1))) config_error("/chart/bounds/" + std::to_string(r), "lo must be below hi");
        cfg.bounds.push_back({b(r, 0), b(r, 1)});
      }
    }
  }

  if (j.contains("fields")) {
    if (!j["fields"].is_object()) config_error("/fields", "expected an object of named expression lists");
    for (const auto& [name, value] : j["fields"].items()) {
      const std::string p = "/fields/" + name;
      cfg.fields[name] = value.is_string() ? std::vector<std::string>{value.get<std::string>()} : expressions(value, p);
    }
  }
  if (j.contains("connection")) cfg.connection = components(j["connection"], "/connection");
  if (j.contains("cartan")) cfg.cartan = components(j["cartan"], "/cartan");
  if (j.contains("metric")) {
    const json& m = j["metric"];
    if (m.is_string()) {
      const std::string s = m.get<std::string>();
      if (s != "trace" && s != "euclidean") config_error("/metric", "expected 'trace', 'euclidean' or a matrix");
      cfg.metric = s;
    } else {
      cfg.metric = matrix(m, "/metric");
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) config_error("/seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("samples")) cfg.samples = integer(j["samples"], "/samples");
  if (cfg.samples < 1) config_error("/samples", "must be at least 1");
  if (j.contains("tolerance")) cfg.tolerance = number(j["tolerance"], "/tolerance");
  if (j.contains("backend")) cfg.backend = backend_from(string(j["backend"], "/backend"), "/backend");

  if (j.contains("palatini")) {
    const json& p = j["palatini"];
    if (!p.is_object()) config_error("/palatini", "expected an object");
    if (p.contains("orientation")) cfg.palatini.orientation = integer(p["orientation"], "/palatini/orientation");
    if (cfg.palatini.orientation != 1 && cfg.palatini.orientation != -1) {
      config_error("/palatini/orientation", "must be +1 or -1");
    }
    if (p.contains("epsilon")) cfg.palatini.epsilon = number(p["epsilon"], "/palatini/epsilon");
    if (!(cfg.palatini.epsilon > 0)) config_error("/palatini/epsilon", "must be positive");
    if (p.contains("kernel_metric")) {
      cfg.palatini.kernel_metric = string(p["kernel_metric"], "/palatini/kernel_metric");
      if (cfg.palatini.kernel_metric != "trace" && cfg.palatini.kernel_metric != "euclidean") {
        config_error("/palatini/kernel_metric", "expected 'trace' or 'euclidean'");
      }
    }
    if (p.contains("gauge_v")) {
      const json& v = p["gauge_v"];
      if (v.is_number_integer()) {
        cfg.palatini.random_gauge_v = v.get<int>();
        if (cfg.palatini.random_gauge_v < 0) config_error("/palatini/gauge_v", "count must be non-negative");
      } else {
        if (!v.is_array()) config_error("/palatini/gauge_v", "expected a count or a list of h-valued fields");
        for (std::size_t k = 0; k < v.size(); ++k) {
          cfg.palatini.gauge_v.push_back(component(v[k], "/palatini/gauge_v/" + std::to_string(k)));
        }
      }
    }
    if (p.contains("expected_action")) cfg.palatini.expected_action = number(p["expected_action"], "/palatini/expected_action");
  }

  auto check_refs = [&](const ComponentSpec& spec, const std::string& path) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const auto* name = std::get_if<std::string>(&spec[i]);
      if (name && !cfg.fields.count(*name)) config_error(path + "/" + std::to_string(i), "unknown field '@" + *name + "'");
    }
  };
  if (cfg.connection) check_refs(*cfg.connection, "/connection");
  if (cfg.cartan) check_refs(*cfg.cartan, "/cartan");
  check_refs(cfg.palatini.gauge_v, "/palatini/gauge_v");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error(path, "cannot open configuration file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string Report::to_json() const {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j;
  j["command"] = command;
  j["version"] = kToolVersion;
  j["report_schema"] = kReportSchemaVersion;
  j["seed"] = seed;
  j["samples"] = samples;
  j["backend"] = backend;
  j["models"] = models;
  j["wall_time"] = wall_time;
  j["pass"] = pass();
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"residual", num(c.residual)}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  auto summary = [&](const PalatiniSummary& s) {
    json out{{"S", num(s.S)}, {"torsion_max", num(s.torsion_max)}, {"gauge_ratio", num(s.gauge_ratio)}};
    out["variations"] = json::array();
    for (const auto& v : s.variations) {
      out["variations"].push_back({{"S_eps", num(v.S_eps)}, {"S_half", num(v.S_half)}, {"ratio", num(v.ratio)},
                                   {"ratio_half", num(v.ratio_half)}});
    }
    return out;
  };
  if (command == "palatini" && palatini.size() == 1) {
    const json s = summary(palatini.begin()->second);
    for (const auto& [k, v] : s.items()) j[k] = v;
  } else if (!palatini.empty()) {
    for (const auto& [name, s] : palatini) j["palatini"][name] = summary(s);
  }
  return j.dump(2);
}

Report run(const RunOptions& options) {
  RunConfig cfg;
  if (options.config_path) cfg = load_config_file(*options.config_path);
  else cfg.model.reset();
  return run(options, std::move(cfg));
}

Report run(const RunOptions& options, RunConfig cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (options.model) cfg.model = model_from_name(*options.model, "--model");
  if (options.samples) {
    if (*options.samples < 1) config_error("--samples", "must be at least 1");
    cfg.samples = *options.samples;
  }
  if (options.seed) cfg.seed = *options.seed;
  if (options.tol) cfg.tolerance = options.tol;
  if (options.backend) cfg.backend = backend_from(*options.backend, "--backend");

  Report report;
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.backend = cfg.backend == Backend::Dual ? "dual" : "fd";

  std::vector<Target> targets;
  if (cfg.model) {
    targets.push_back({*cfg.model, chart_for(cfg, *cfg.model, cfg.quad_points), cfg.samples, true});
  } else if (options.command == "all") {
    for (const char* name : {"euclidean2", "sphere2"}) {
      const Model m = builtin_model(name);
      targets.push_back({m, make_chart(m.n, {}, cfg.quad_points, cfg.backend), cfg.samples, false});
    }
    const Model p = builtin_model("poincare");
    targets.push_back({p, make_chart(4, {}, 5, cfg.backend), std::min(cfg.samples, 2), false});
  } else {
    config_error("/model", "missing required field 'model' (give it in the config or with --model)");
  }
  const bool tagged = targets.size() > 1;
  for (const auto& t : targets) report.models.push_back(label(t.model));

  static const std::vector<std::string> suites = {"diagram", "connections", "cartan", "metrics", "gauge-algebra"};
  if (options.command == "check") {
    report.command = "check " + options.suite;
    if (std::find(suites.begin(), suites.end(), options.suite) == suites.end()) {
      config_error("command", "unknown check suite '" + options.suite + "'");
    }
    for (const auto& t : targets) run_check(options.suite, cfg, t, tagged ? label(t.model) + ": " : "", report.checks);
  } else if (options.command == "palatini" || options.command == "all") {
    report.command = options.command;
    for (const auto& t : targets) {
      const std::string tag = tagged ? label(t.model) + ": " : "";
      if (options.command == "all") {
        for (const auto& s : suites) run_check(s, cfg, t, tag, report.checks);
      }
      try {
        // Unconfigured matrix entries pin regression values on the identity tetrad.
        const bool smoke = !t.configured && t.model.name == "poincare";
        const PalatiniConfig pc = palatini_config(cfg, t, smoke);
        std::optional<double> expected = t.configured ? cfg.palatini.expected_action : std::nullopt;
        if (!t.configured && t.model.name == "euclidean") expected = 0.0;
        if (!t.configured && t.model.name == "sphere") expected = 2.0;
        const int count = t.configured ? cfg.palatini.random_gauge_v : (smoke ? 1 : 2);
        PalatiniSummary s = palatini_suite(pc, gauge_directions(cfg, t, count), cfg.palatini.epsilon, expected);
        append(report.checks, s.checks, tag + "palatini: ");
        report.palatini[label(t.model)] = std::move(s);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        report.checks.push_back(make_check(tag + "palatini raised " + e.what(), std::numeric_limits<double>::infinity(), 0.0));
      }
    }
  } else {
    config_error("command", "unknown command '" + options.command + "'");
  }

  if (cfg.tolerance) {
    for (auto& c : report.checks) c = make_check(c.name, c.residual, *cfg.tolerance);
  }
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_code(const Report& report) { return report.pass() ? 0 : 1; }

}  // namespace cartan
