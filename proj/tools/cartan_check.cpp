#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cartan/cli.hpp"
#include "cartan/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Lie algebroid and Cartan geometry identities", "cartan-check"};
  app.set_version_flag("--version", cartan::kToolVersion);
  app.require_subcommand(1);

  cartan::RunOptions opt;
  std::string config, model, backend, out;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON configuration file");
    sub->add_option("--model", model, "builtin model: euclidean2, sphere3, hyperbolic2, poincare, ...");
    sub->add_option("--samples", samples, "random samples per check")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--tol", tol, "override every check tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--backend", backend, "derivative backend")->check(CLI::IsMember({"dual", "fd"}));
    sub->add_option("--out", out, "write the JSON report here instead of stdout");
  };

  CLI::App* check = app.add_subcommand("check", "run one verification suite");
  check->add_option("suite", opt.suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"diagram", "connections", "cartan", "metrics", "gauge-algebra"}));
  add_flags(check);
  CLI::App* palatini = app.add_subcommand("palatini", "evaluate the action and its gauge invariance");
  add_flags(palatini);
  CLI::App* all = app.add_subcommand("all", "run every suite");
  add_flags(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opt.command = check->parsed() ? "check" : palatini->parsed() ? "palatini" : "all";
  const CLI::App* sub = app.get_subcommands().front();
  if (!config.empty()) opt.config_path = config;
  if (!model.empty()) opt.model = model;
  if (sub->count("--samples")) opt.samples = samples;
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--tol")) opt.tol = tol;
  if (!backend.empty()) opt.backend = backend;

  cartan::Report report;
  try {
    report = cartan::run(opt);
  } catch (const cartan::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  const std::string json = report.to_json();
  if (out.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "cannot write " << out << '\n';
      return 2;
    }
    f << json << '\n';
  }
  return cartan::exit_code(report);
}
