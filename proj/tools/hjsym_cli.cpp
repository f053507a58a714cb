// hjsym: eikonal solves, symmetrized comparison solutions and deficit ledgers.
//
//   hjsym run --config <file|dir> [--out dir] [--jobs N]
//   hjsym convergence --config <file> --levels 64,128,256,512 [--out dir]
//   hjsym verify --suite rearrangement|hl|isoperimetric|sandwich|bounds|rescaling [--jobs N]
//
// --h, --gamma-n and --ctol override the config. Exit codes: 0 pass, 2 config/input
// error, 3 inequality failure, 4 solver failure.

#include "hjsym/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

using namespace hjsym;

namespace {

int run_cmd(const std::string& config, const std::optional<std::string>& out, int jobs, const Overrides& ov) {
  std::vector<ExperimentConfig> configs;
  try {
    configs = load_configs(config);
    for (auto& c : configs) apply(ov, c);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config;
  }
  std::optional<std::filesystem::path> out_dir;
  if (out) out_dir = *out;
  const auto outcomes = run_batch(configs, out_dir, jobs);
  for (const auto& o : outcomes) {
    if (o.report) {
      const auto& r = *o.report;
      std::printf("%s: eps=%.6g alpha=%.6g E=%.6g T=%.6g rows=%zu -> %s%s%s\n", o.name.c_str(), r.quantity("eps"),
                  r.quantity("alpha"), r.quantity("E"), r.quantity("T"), r.rows.size(), o.dir.string().c_str(),
                  o.code ? " FAIL " : "", o.message.c_str());
    } else {
      std::fprintf(stderr, "%s: error (%d): %s\n", o.name.c_str(), o.code, o.message.c_str());
    }
  }
  return combine_codes(outcomes);
}

int convergence_cmd(const std::string& config, const std::string& levels_text, const std::optional<std::string>& out,
                    const Overrides& ov) {
  ExperimentConfig c;
  std::vector<int> levels;
  try {
    c = load_config(config);
    apply(ov, c);
    std::stringstream ss(levels_text);
    for (std::string item; std::getline(ss, item, ',');) {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw ConfigError("bad level '" + item + "'");
      levels.push_back(n);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config;
  }
  try {
    const auto rows = convergence(c, levels);
    const std::string csv = convergence_csv(rows);
    std::cout << csv;
    if (out) write_text(std::filesystem::path(*out) / "convergence.csv", csv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return exit_solver;
  }
  return exit_ok;
}

int verify_cmd(const std::string& suite, int jobs, bool verbose) {
  VerifyResult r;
  try {
    r = verify(suite, jobs);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return exit_solver;
  }
  for (const auto& c : r.checks)
    if (verbose || !c.passed)
      std::printf("%s %-22s %-28s lhs=%.10g rhs=%.10g tol=%.3g\n", c.passed ? "ok  " : "FAIL", c.case_name.c_str(),
                  c.check.c_str(), c.lhs, c.rhs, c.tol);
  std::printf("%s: %zu checks, %zu failed\n", suite.c_str(), r.checks.size(), r.failures());
  return r.failures() ? exit_inequality : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eikonal symmetrization deficits"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h would clash with --h

  Overrides ov;
  double h = 0, gamma = 0, ctol = 0;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--h", h, "grid spacing");
    cmd->add_option("--gamma-n", gamma, "isoperimetric stability constant");
    cmd->add_option("--ctol", ctol, "tolerance constant c_tol");
  };

  std::string config, levels = "64,128,256,512", suite;
  std::optional<std::string> out;
  int jobs = 1;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "solve and write the deficit ledger");
  run->add_option("--config", config, "config file or directory of *.json")->required();
  run->add_option("--out", out, "output directory");
  run->add_option("--jobs", jobs, "concurrent experiments")->check(CLI::PositiveNumber);
  add_overrides(run);

  auto* conv = app.add_subcommand("convergence", "observed orders over grid levels");
  conv->add_option("--config", config, "config file")->required();
  conv->add_option("--levels", levels, "grid counts N, h = 1/N");
  conv->add_option("--out", out, "directory for convergence.csv");
  add_overrides(conv);

  auto* ver = app.add_subcommand("verify", "property batteries over the built-in cases");
  ver->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(verify_suites()));
  ver->add_option("--jobs", jobs, "concurrent cases")->check(CLI::PositiveNumber);
  ver->add_flag("--verbose,-v", verbose, "print every check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  for (auto* cmd : {run, conv}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--h")) ov.h = h;
    if (cmd->count("--gamma-n")) ov.gamma_n = gamma;
    if (cmd->count("--ctol")) ov.c_tol = ctol;
  }

  if (run->parsed()) return run_cmd(config, out, jobs, ov);
  if (conv->parsed()) return convergence_cmd(config, levels, out, ov);
  return verify_cmd(suite, jobs, verbose);
}
