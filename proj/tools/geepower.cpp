// geepower: analytical GEE power for multi-period cluster randomized trials.
//
//   geepower run <file> [--json] [--df 1|2]
//   geepower sweep <file> --param <name> --values v1,v2,... --out <csv> [--summary]
//   geepower explain <file>
//
// Exit codes: 0 success, 1 I/O or numeric failure, 2 validation failure.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "geepower/power.hpp"
#include "geepower/report.hpp"
#include "geepower/scenario.hpp"
#include "geepower/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalid = 2;

struct ValidationFailed {
  geepower::ValidationReport report;
};

geepower::TrialSpec load(const std::string& path, bool json, int df_override) {
  auto spec = geepower::load_scenario(path, json ? geepower::ScenarioFormat::Json : geepower::ScenarioFormat::Text);
  if (df_override == 1) spec.df_choice = geepower::DfChoice::ClustersMinusParams;
  if (df_override == 2) spec.df_choice = geepower::DfChoice::ClustersMinusTwo;
  auto report = geepower::validate(spec);
  if (!report.ok()) throw ValidationFailed{std::move(report)};
  return spec;
}

int sweep_threads() {
  if (const char* env = std::getenv("GEEPOWER_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric GEEPOWER_THREADS='" << env << "'\n";
    }
  }
  return 0;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto token = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    values.push_back(geepower::parse_double(token, "--values"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical GEE power for complete and incomplete multi-period cluster randomized trials"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  int df_override = 0;

  auto* run = app.add_subcommand("run", "Validate a scenario and print the power table");
  run->add_option("file", file, "Scenario file")->required();
  run->add_flag("--json", json, "Read the scenario as JSON");
  run->add_option("--df", df_override, "Degrees of freedom rule: 1 = I - p, 2 = I - 2")
      ->check(CLI::IsMember({1, 2}));

  std::string param;
  std::string values_arg;
  std::string out_csv;
  bool summary = false;
  auto* sweep = app.add_subcommand("sweep", "Tabulate power over a list of parameter values");
  sweep->add_option("file", file, "Scenario file")->required();
  sweep->add_flag("--json", json, "Read the scenario as JSON");
  sweep->add_option("--df", df_override, "Degrees of freedom rule: 1 = I - p, 2 = I - 2")
      ->check(CLI::IsMember({1, 2}));
  sweep->add_option("--param", param,
                    "delta | alpha0 | r0 | alpha1 | alpha2 | alpha3 | cluster_multiplier | cp_size_multiplier")
      ->required();
  sweep->add_option("--values", values_arg, "Comma-separated values")->required();
  sweep->add_option("--out", out_csv, "Output CSV path")->required();
  sweep->add_flag("--summary", summary, "Also print a text power curve");

  auto* explain = app.add_subcommand("explain", "Dump parsed sequences, exposures and the covariance matrix");
  explain->add_option("file", file, "Scenario file")->required();
  explain->add_flag("--json", json, "Read the scenario as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kFailure;
  }

  try {
    if (run->parsed()) {
      const auto spec = load(file, json, df_override);
      const auto result = geepower::compute_power(spec);
      std::cout << geepower::render_report(spec, result);
    } else if (sweep->parsed()) {
      const auto values = parse_values(values_arg);
      const auto which = geepower::parse_sweep_param(param);
      const auto spec = load(file, json, df_override);
      const auto rows = geepower::run_sweep(spec, which, values, sweep_threads());
      std::ofstream csv(out_csv);
      if (!csv) throw std::ios_base::failure("cannot write " + out_csv);
      geepower::write_sweep_csv(csv, which, rows);
      if (!csv.flush()) throw std::ios_base::failure("error writing " + out_csv);
      if (summary) std::cout << geepower::render_power_curve(which, rows);
    } else if (explain->parsed()) {
      const auto spec = load(file, json, 0);
      const auto cov = geepower::model_covariance(spec);
      std::cout << geepower::render_explain(spec, cov);
    }
  } catch (const ValidationFailed& v) {
    std::cerr << "scenario failed validation:\n" << v.report.to_string();
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
