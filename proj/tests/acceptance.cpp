// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include "hjsym/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

using namespace hjsym;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void verdict(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

int jobs() { return int(std::max(1u, std::thread::hardware_concurrency())); }

ExperimentConfig config(Shape shape, SourceSpec source, int n, Vec2 center = Vec2::Zero(), std::string name = "case") {
  ExperimentConfig c;
  c.name = std::move(name);
  c.shape.shape = std::move(shape);
  c.shape.spacing = 1.0 / n;
  c.shape.center = center;
  c.source = std::move(source);
  return c;
}

ExperimentConfig unit_square(int n) { return config(Rectangle{1, 1}, ConstSource{1}, n, Vec2(0.5, 0.5), "square"); }

DeficitReport run_report(const ExperimentConfig& c) { return report(prepare(c)); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Every enforced row whose name starts with `prefix` passes on every report.
struct RowSweep {
  std::size_t rows = 0, failed = 0;
  std::string first;
};

RowSweep sweep(const std::vector<RunOutcome>& outcomes, const std::string& prefix) {
  RowSweep s;
  for (const auto& o : outcomes) {
    if (!o.report) {
      ++s.failed;
      if (s.first.empty()) s.first = o.name + ": " + o.message;
      continue;
    }
    for (const auto& row : o.report->rows) {
      if (row.name.rfind(prefix, 0) != 0 || row.kind != RowKind::enforced) continue;
      ++s.rows;
      if (row.status == RowStatus::fail) {
        ++s.failed;
        if (s.first.empty()) s.first = fmt("%s/%s lhs=%.6g rhs=%.6g", o.name.c_str(), row.name.c_str(), row.lhs, row.rhs);
      }
    }
  }
  return s;
}

std::string sweep_text(const RowSweep& s) {
  return fmt("%zu rows, %zu failed%s%s", s.rows, s.failed, s.first.empty() ? "" : "; first: ", s.first.c_str());
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "hjsym_acceptance";
  fs::remove_all(scratch);

  // 1
  {
    const auto t0 = Clock::now();
    const auto r = verify("rearrangement", jobs());
    const auto h = verify("hl", jobs());
    const double t = seconds_since(t0);
    verdict(1, "rearrangement exactness", r.failures() == 0 && h.failures() == 0 && t < 5.0,
            fmt("%zu + %zu checks, %zu failed, %.2f s", r.checks.size(), h.checks.size(), r.failures() + h.failures(), t));
  }

  // 2
  {
    const auto disk = config(Disk{1}, ConstSource{1}, 64, Vec2::Zero(), "disk");
    const auto rows = convergence(disk, {64, 128, 256, 512});
    double e256 = NAN, min_order = INFINITY;
    std::string orders;
    for (const auto& r : rows) {
      if (r.quantity != "linf_error") continue;
      if (std::abs(r.h - 1.0 / 256) < 1e-12) e256 = r.error;
      if (std::isfinite(r.order)) {
        min_order = std::min(min_order, r.order);
        orders += fmt(" %.3f", r.order);
      }
    }
    auto big = disk;
    big.shape.spacing = 1.0 / 512;
    const auto t0 = Clock::now();
    const auto e = prepare(big);
    const double t = seconds_since(t0);
    (void)e;
    verdict(2, "eikonal accuracy", e256 <= 0.02 && min_order >= 0.9 && t <= 10.0,
            fmt("Linf(1/256)=%.5f, orders%s, solve at 512^2 %.2f s", e256, orders.c_str(), t));
  }

  // 3, 5, 6c, 7, 8, 9, 10 on the built-in matrix
  const auto cases = case_matrix();
  const auto t_matrix = Clock::now();
  const auto outcomes = run_batch(cases, scratch / "matrix", jobs());
  const double matrix_seconds = seconds_since(t_matrix);

  const auto sq = run_report(unit_square(256));
  const auto disk_dec = run_report(config(Disk{1}, RadialAffineSource{1, -0.5}, 256));
  const auto disk_inc = run_report(config(Disk{1}, RadialAffineSource{0.5, 0.5}, 256));

  {
    const auto s = sweep(outcomes, "gn_inequality");
    verdict(3, "GN inequality", s.failed == 0 && s.rows == cases.size(),
            sweep_text(s) + fmt(" (%zu cases, %.1f s)", cases.size(), matrix_seconds));
  }

  // 4
  {
    const double eps_sq = sq.quantity("eps"), eps_dec = disk_dec.quantity("eps"), eps_inc = disk_inc.quantity("eps");
    const double ref_sq = 1 / (3 * std::sqrt(pi)) - 1.0 / 6;
    const bool ok = within(eps_sq, ref_sq, 0.02) && within(eps_dec, 0.084275, 0.02) && eps_inc <= disk_inc.tol;
    verdict(4, "closed-form deficits", ok,
            fmt("square %.6f (%.6f), disk 1-r/2 %.6f (0.084275), disk (1+r)/2 %.2e <= tol %.3g", eps_sq, ref_sq,
                eps_dec, eps_inc, disk_inc.tol));
  }

  // 5
  {
    const auto s = sweep(outcomes, "sandwich_");
    const double mid = sq.quantity("usharpG_l1"), right = sq.quantity("uG_l1");
    const bool ok = s.failed == 0 && s.rows == 2 * cases.size() && within(mid, 1.0 / 6, 0.02) &&
                    within(right, 1 / (3 * std::sqrt(pi)), 0.02);
    verdict(5, "sandwich", ok, sweep_text(s) + fmt("; square middle %.5f, right %.5f", mid, right));
  }

  // 6
  {
    const double a_sq = sq.quantity("alpha");
    const auto disk = run_report(config(Disk{1}, ConstSource{1}, 256));
    const double a_disk = disk.quantity("alpha");
    const auto s = sweep(outcomes, "asymmetry_propagation");
    const bool ok = std::abs(a_sq - 0.1794) <= 0.01 && a_disk <= 0.01 && s.failed == 0 && s.rows > 0;
    verdict(6, "asymmetry", ok, fmt("square %.5f, disk %.5f; propagation ", a_sq, a_disk) + sweep_text(s));
  }

  // 7
  {
    const auto a = sweep(outcomes, "asymmetry_pseudo_norm");
    const auto b = sweep(outcomes, "asymmetry_lower_bound");
    const double so = sq.quantity("s_omega_interp");
    const bool ok = a.failed == 0 && b.failed == 0 && a.rows == cases.size() && within(so, 0.0113, 0.10);
    verdict(7, "asymmetry chain", ok,
            "g<=uG " + sweep_text(a) + "; lower bound " + sweep_text(b) +
                fmt("; square s_omega %.5f (step %.5f)", so, sq.quantity("s_omega")));
  }

  // 8
  {
    const auto s = sweep(outcomes, "energy_gap");
    const double E = sq.quantity("E");
    const bool ok = s.failed == 0 && s.rows == cases.size() && within(E, 4 / pi - 1, 0.02);
    verdict(8, "energy gap constant", ok, sweep_text(s) + fmt("; square E %.5f (%.5f)", E, 4 / pi - 1));
  }

  // 9
  {
    const auto s = sweep(outcomes, "gradient_gap");
    verdict(9, "gradient rearrangement gap", s.failed == 0 && s.rows == cases.size(), sweep_text(s));
  }

  // 10
  {
    const auto s = sweep(outcomes, "source_stability");
    const double d = disk_dec.quantity("f_fu_l1"), literal = disk_dec.quantity("f_fu_l1_decreasing");
    const bool ok = s.failed == 0 && s.rows == cases.size() && d <= disk_dec.tol;
    verdict(10, "source stability", ok,
            sweep_text(s) + fmt("; disk 1-r/2 ||f-f_u||_1 %.5f vs tol %.3g (eps %.5f; f*(mu(u)) relabeling gives %.2e)",
                                d, disk_dec.tol, disk_dec.quantity("eps"), literal));
  }

  // 11
  {
    const std::vector<ExperimentConfig> scaled = {
        config(Ellipse{1.5, 2.0 / 3}, RadialAffineSource{1, -0.5}, 64, Vec2::Zero(), "ellipse"),
        config(TwoDisks{0.5, 0.5, 0.5}, LinearSource{0.25, 0.125, 1}, 64, Vec2::Zero(), "two_disks"),
        config(Rectangle{2, 1}, ExpressionSource{"0.75 + 0.25*x^2 + 0.125*abs(y)"}, 64, Vec2(1, 0.5), "rect"),
    };
    std::size_t rows = 0, bad = 0;
    double worst = 0;
    for (const auto& c : scaled) {
      const auto r = run_report(c);
      for (const auto& row : r.rows) {
        if (row.name.rfind("rescale_", 0) != 0) continue;
        ++rows;
        const double rel = std::abs(row.lhs - row.rhs) / std::max(1.0, std::max(std::abs(row.lhs), std::abs(row.rhs)));
        worst = std::max(worst, rel);
        if (!(rel <= 1e-10) || row.status == RowStatus::fail) ++bad;
      }
    }
    verdict(11, "rescaling identities", bad == 0 && rows == 5 * scaled.size(),
            fmt("%zu identities on %zu cases, worst relative gap %.2e", rows, scaled.size(), worst));
  }

  // 12
  {
    const auto c = config(PerturbedDisk{1, 0.15, 2}, ExpressionSource{"0.75 + 0.25*x^2 + 0.125*abs(y)"}, 64);
    const auto a = run_batch({c}, scratch / "det_a", 1);
    const auto b = run_batch({c}, scratch / "det_b", 1);
    const std::string ja = slurp(scratch / "det_a" / "report.json"), jb = slurp(scratch / "det_b" / "report.json");
    const bool ok = !ja.empty() && ja == jb && a[0].report && b[0].report;
    verdict(12, "determinism", ok, fmt("report.json %zu bytes, %s", ja.size(), ja == jb ? "identical" : "differs"));
  }

  fs::remove_all(scratch);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures ? 1 : 0;
}
