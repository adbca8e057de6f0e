#pragma once

// Configuration loading, command dispatch and JSON reports for the
// cartan-check tool.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cartan/suites.hpp"

namespace cartan {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

/// One component per coordinate; each is a list of expressions or "@name".
using ComponentSpec = std::vector<std::variant<std::vector<std::string>, std::string>>;

struct PalatiniSpec {
  int orientation = 1;
  double epsilon = 1e-3;
  std::string kernel_metric = "trace";
  std::vector<ComponentSpec::value_type> gauge_v;  // explicit h-valued fields
  int random_gauge_v = 5;                          // used when gauge_v is empty
  std::optional<double> expected_action;
};

struct RunConfig {
  std::optional<Model> model;
  std::optional<int> n;
  std::vector<Interval> bounds;
  int quad_points = 9;
  Backend backend = Backend::Dual;
  std::map<std::string, std::vector<std::string>> fields;
  std::optional<ComponentSpec> connection;  // h-valued Ehresmann connection
  std::optional<ComponentSpec> cartan;      // g-valued Cartan connection
  std::optional<std::variant<std::string, Eigen::MatrixXd>> metric;
  std::uint64_t seed = 1;
  int samples = 20;
  std::optional<double> tolerance;
  PalatiniSpec palatini;
};

/// Throws Error(ConfigError) with a JSON-pointer-style path on schema violations.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

struct RunOptions {
  std::string command;  // "check", "palatini" or "all"
  std::string suite;    // for "check": diagram, connections, cartan, metrics, gauge-algebra
  std::optional<std::string> config_path;
  std::optional<std::string> model;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> backend;  // "dual" or "fd"
};

struct Report {
  std::string command;
  std::vector<std::string> models;
  std::uint64_t seed = 0;
  int samples = 0;
  std::string backend;
  double wall_time = 0;
  std::vector<CheckResult> checks;
  /// Palatini summaries keyed by model label.
  std::map<std::string, PalatiniSummary> palatini;

  bool pass() const;
  std::string to_json() const;
};

/// Merges flags over the config and runs the command; config problems throw ConfigError.
Report run(const RunOptions& options);
/// Same, with an already parsed config.
Report run(const RunOptions& options, RunConfig config);

/// 0 pass, 1 check failure.
int exit_code(const Report& report);

}  // namespace cartan
