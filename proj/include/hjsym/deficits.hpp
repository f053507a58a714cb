#pragma once

#include "hjsym/radial.hpp"

#include <map>
#include <string>

namespace hjsym {

/// Literature constants and tolerance model. gamma_n, r, s and C only feed rows whose
/// constants are not explicit; those rows are advisory.
struct Constants {
  double gamma_n = 100.0;
  double r = 1.0;
  double s = 1.0;
  double C = 1.0;
  double c_tol = 5.0;
  double excess_exponent = 0.5;  // a in {t : gap(t) t^{1/n} > eps^a}
  int levels = 64;               // per-level perimeter checks
  int propagation_levels = 8;    // asymmetry of {u > t} for mu(t) >= |Ω|(1 - α/4)
};

/// c_tol h (1 + sup f diam Ω).
double tolerance(const GridDomain& domain, double f_sup, double c_tol);

/// Every rearranged object attached to a solution u of |grad u| = f.
struct Symmetrization {
  StepProfile u_star;      // u*
  StepProfile f_inc;       // f_*
  StepProfile F;           // pseudo-rearrangement along the levels of u
  PLProfile u_pl;          // solution_profile(u*) at profile_resolution
  StepProfile grad_sharp;  // |grad u#| as a function of s
  RadialSolution uG;       // |grad u^G| = f_#
  RadialSolution usharpG;  // (u#)^G
  RadialSolution g;        // |grad g| = F(omega_n |x|^n)
};

Symmetrization symmetrize(const GridFunction& u, const GridFunction& f, int n = 2);

/// Problem rescaled to |Ω| = 1, sup f = 1: w(x) = a u(x/b), source f(x/b)/sup f.
struct NormalizedProblem {
  double a = 1.0, b = 1.0;
  double f_sup = 1.0;
  double measure = 1.0;  // |Ω| before rescaling
  int n = 2;
  GridFunction u;
  GridFunction f;
  double m = 0.0;  // m / sup f

  /// Factor mapping L1 deficits of the original problem to the normalized one.
  double deficit_scale() const { return std::pow(measure, -1.0 - 1.0 / n) / f_sup; }
  GridFunction original_u() const;
  GridFunction original_f() const;
};

NormalizedProblem normalize(const GridFunction& u, const GridFunction& f, double m, int n = 2);

/// ||u^G||_1 - ||u||_1.
double primary_deficit(const GridFunction& u, const GridFunction& f);

struct Sandwich {
  double u = 0.0, usharpG = 0.0, uG = 0.0;
  double lower_margin() const { return usharpG - u; }
  double upper_margin() const { return uG - usharpG; }
};
Sandwich sandwich_check(const GridFunction& u, const GridFunction& f);
Sandwich sandwich_check(const GridFunction& u, const Symmetrization& sym);

struct PolyaRatio {
  double numerator = 0.0;    // h^2 Σ f^2
  double denominator = 0.0;  // ∫ |grad u#|^2
  double E = 0.0;
  bool defined = false;
};
PolyaRatio polya_ratio(const GridFunction& f, const PLProfile& u_pl, int n = 2);

/// M(δ) = |{|grad u#| < δ} ∩ {0 < u# < max u}| / |Ω| on the radial gradient profile.
double flat_gradient_fraction(const PLProfile& u_pl, double delta, int n = 2);

/// |{|grad u| <= δ} ∩ {0 < u < max u}| / |{u > 0}| with |grad u| = f.
double flat_source_fraction(const GridFunction& u, const GridFunction& f, double delta);

struct ExcessSet {
  double gap = 0.0;          // (1/(n omega^{1/n})) ∫ [f_* - |grad u#|_*] t^{1/n}
  double gap_unscaled = 0.0; // same integral without the constant
  double measure = 0.0;      // |I|
  double threshold = 0.0;    // eps^a
  double bound = 0.0;        // eps^{1-a}
};
/// Both profiles increasing; I is measured with the scaled integrand.
ExcessSet gradient_excess_set(const StepProfile& f_inc, const StepProfile& grad_inc, double eps,
                              double a, int n = 2);

struct SOmega {
  double step = 0.0;          // sup{t : mu(t) >= |Ω|(1 - α/4)}
  double interpolated = 0.0;  // the PL profile of u* at |Ω|(1 - α/4)
};
SOmega s_omega(const StepProfile& u_star, const PLProfile& u_pl, double alpha);

struct AsymmetryChain {
  double g_l1 = 0.0, u_l1 = 0.0, uG_l1 = 0.0;
  double s_omega = 0.0;
  double lower_bound = 0.0;  // s_Ω α^2 / (8 γ)
  double sharp_bound = 0.0;  // s_Ω |Ω| (1 - α/4) α^2 / (4 γ)
  double t1 = 0.0;           // U_g(|Ω|(1 - α/8)) / 2
  double t1_bound = 0.0;     // m α |Ω|^{1/n} / (16 n omega^{1/n})
  bool case_large_s = false; // s_Ω >= t1
  double window = 0.0;       // ∫_{t1}^{2 t1} (ν_g - μ)
  double window_bound = 0.0; // |Ω| α t1 / 8
  double C1 = 0.0;
  double cubic_bound = 0.0;  // C1 α^3
};
AsymmetryChain asymmetry_chain(const GridFunction& u, const Symmetrization& sym, double m, double alpha,
                               double s_omega, double gamma_n, int n = 2);

struct Translation {
  double T = 0.0;
  Vec2 center = Vec2::Zero();  // centre of the translated u#
  Vec2 shift = Vec2::Zero();   // x0 = -center
  int evaluations = 0;
};
/// J(c) = h^2 Σ |u(x) - u*(omega |x - c|^2)| + ||u#||_1 - h^2 Σ u*(omega |x - c|^2).
double translation_objective(const GridFunction& u, const StepProfile& u_star, const Vec2& c);
Translation translation_infimum(const GridFunction& u, const StepProfile& u_star);

/// ∫_{t0}^{t1} mu(t) dt = h^2 Σ clamp(|u| - t0, 0, t1 - t0).
double distribution_integral(const GridFunction& u, double t0, double t1);

/// h_u: the k-th cell of level_ordering(u, f) gets ((k + 1/2) h^2)^{1/n}.
GridFunction level_weight(const GridFunction& u, const GridFunction& f, int n = 2);

enum class RowStatus { pass, fail, vacuous };
enum class RowKind { enforced, advisory };

/// One inequality lhs <= rhs. margin = rhs - lhs; pass when margin >= -tol.
struct LedgerRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  RowStatus status = RowStatus::pass;
  RowKind kind = RowKind::enforced;
  std::string note;
};

std::string to_string(RowStatus s);
std::string to_string(RowKind k);

struct GridMeta {
  double h = 0.0;
  Index nx = 0, ny = 0;
  Vec2 origin = Vec2::Zero();
  std::size_t cells = 0;
  double measure = 0.0;
};

struct DeficitReport {
  std::string run_id;
  GridMeta grid;
  std::string shape;   // JSON text
  std::string source;  // JSON text
  Constants constants;
  double tol = 0.0;
  double tol_normalized = 0.0;
  std::map<std::string, double> quantities;
  std::vector<LedgerRow> rows;  // sorted by name

  /// Any enforced row failing.
  bool failed() const;
  const LedgerRow* row(const std::string& name) const;
  double quantity(const std::string& name) const;
};

struct ReportInput {
  std::string run_id;
  std::string shape = "{}";
  std::string source = "{}";
  Constants constants;
};

/// Full ledger for u solving |grad u| = f >= m > 0.
DeficitReport build_report(const GridFunction& u, const GridFunction& f, double m, const ReportInput& input);

}  // namespace hjsym
