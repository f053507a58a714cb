#pragma once

#include "hjsym/eikonal.hpp"
#include "hjsym/expression.hpp"
#include "hjsym/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace hjsym {

struct ConstSource {
  double c = 1.0;
};
/// c0 + c1 |x - center| with the shape's center.
struct RadialAffineSource {
  double c0 = 1.0, c1 = 0.0;
};
/// a1 x + a2 y + c.
struct LinearSource {
  double a1 = 0.0, a2 = 0.0, c = 1.0;
};
struct ExpressionSource {
  std::string text;
};

using SourceSpec = std::variant<ConstSource, RadialAffineSource, LinearSource, ExpressionSource>;

struct OutputOptions {
  std::filesystem::path dir;  // empty: out/<name>
  bool grids = true;
  bool profiles = true;
};

struct ExperimentConfig {
  std::string name;
  ShapeSpec shape;
  SourceSpec source = ConstSource{};
  Constants constants;
  OutputOptions output;
};

/// Command-line overrides applied on top of a config.
struct Overrides {
  std::optional<double> h;
  std::optional<double> gamma_n;
  std::optional<double> c_tol;
};

/// Config JSON:
///   {"name": "...", "h": 0.0078125,
///    "shape": {"type": "disk", "radius": 1, "center": [0, 0], "rotation": 0},
///    "source": {"type": "const", "c": 1},
///    "constants": {"gamma_n": 100, "r": 1, "s": 1, "C": 1, "c_tol": 5},
///    "output": {"dir": "out/disk", "grids": true, "profiles": true}}
/// Shape types: disk(radius), ellipse(a, b), rectangle(width, length),
/// perturbed_disk(radius, amplitude, mode), two_disks(r1, r2, gap), polygon(vertices).
/// Source types: const(c), radial_affine(c0, c1), linear(a1, a2, c), expression(expr).
/// "h" may be replaced by "n" meaning h = 1/n. Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text, const std::string& default_name = "experiment");
ExperimentConfig load_config(const std::filesystem::path& path);
/// A file, or every *.json in a directory sorted by file name.
std::vector<ExperimentConfig> load_configs(const std::filesystem::path& path);

void apply(const Overrides& overrides, ExperimentConfig& config);

/// Canonical JSON of the shape (including h) and of the source.
std::string shape_json(const ShapeSpec& shape);
std::string source_json(const SourceSpec& source);

std::function<double(const Vec2&)> source_function(const SourceSpec& source, const ShapeSpec& shape);

/// Everything computed for one config.
struct Experiment {
  ExperimentConfig config;
  std::shared_ptr<const GridDomain> domain;
  GridFunction f;
  double m = 0.0;
  EikonalSolution solution;
};

/// Rasterize, sample the source and solve. Throws ConfigError when min f <= 0 and
/// SolverError from the solver.
Experiment prepare(const ExperimentConfig& config);

DeficitReport report(const Experiment& e);

/// report.json, report.csv, u.csv, u.bin and profiles/*.csv under `dir`.
void write_artifacts(const Experiment& e, const DeficitReport& report, const std::filesystem::path& dir);

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_inequality = 3, exit_solver = 4 };

struct RunOutcome {
  std::string name;
  int code = exit_ok;
  std::string message;  // error text, or the failing rows
  std::filesystem::path dir;
  std::optional<DeficitReport> report;
};

/// Runs the configs on up to `jobs` threads; outcomes come back in config order. With a
/// single config the artifacts go to `out` itself, otherwise to out/<name>.
std::vector<RunOutcome> run_batch(const std::vector<ExperimentConfig>& configs,
                                  const std::optional<std::filesystem::path>& out, int jobs);

/// 2 beats 4 beats 3 beats 0.
int combine_codes(const std::vector<RunOutcome>& outcomes);

struct ConvergenceRow {
  std::string quantity;
  double h = 0.0;
  double value = 0.0;
  double reference = 0.0;
  std::string reference_kind;  // analytic | richardson
  double error = 0.0;
  double order = 0.0;  // log2(e(2h)/e(h)); nan on the coarsest level
};

/// L∞ error against the exact solution where known (disk with const or radial_affine
/// sources), and eps, ||u||_1, alpha, E, T against closed forms or a Richardson reference
/// from the two finest levels. levels are grid counts N with h = 1/N.
std::vector<ConvergenceRow> convergence(const ExperimentConfig& config, const std::vector<int>& levels);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Exact solution of |grad u| = f when the config has one.
std::optional<std::function<double(const Vec2&)>> exact_solution(const ExperimentConfig& config);

struct VerifyCheck {
  std::string case_name;
  std::string check;
  double lhs = 0.0, rhs = 0.0, tol = 0.0;
  bool passed = true;
};

struct VerifyResult {
  std::string suite;
  std::vector<VerifyCheck> checks;
  std::size_t failures() const;
};

/// Built-in matrix: 6 shapes x 4 sources x 2 grids (h = 1/32, 1/64).
std::vector<ExperimentConfig> case_matrix();

/// Suites: rearrangement, hl, isoperimetric, sandwich, bounds, rescaling.
VerifyResult verify(const std::string& suite, int jobs = 1);
const std::vector<std::string>& verify_suites();

}  // namespace hjsym
