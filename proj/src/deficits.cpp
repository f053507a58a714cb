#include "hjsym/deficits.hpp"

#include "hjsym/optimize.hpp"

#include <cstdio>

namespace hjsym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string level_name(const char* stem, int k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%02d", stem, k);
  return buf;
}

/// ∫_{t0}^{t1} mu(t)^p dt from |u| sorted ascending.
double mu_power_integral(const std::vector<double>& sorted, double cell, double t0, double t1, double p) {
  const std::size_t n = sorted.size();
  std::size_t k = std::size_t(std::upper_bound(sorted.begin(), sorted.end(), t0) - sorted.begin());
  double t = t0, acc = 0.0;
  while (t < t1) {
    const double next = k < n ? std::min(sorted[k], t1) : t1;
    acc += (next - t) * std::pow(cell * double(n - k), p);
    t = next;
    while (k < n && sorted[k] <= t) ++k;
  }
  return acc;
}

}  // namespace

double tolerance(const GridDomain& domain, double f_sup, double c_tol) {
  return c_tol * domain.spacing() * (1.0 + f_sup * domain.diameter());
}

Symmetrization symmetrize(const GridFunction& u, const GridFunction& f, int n) {
  require_same_domain(u, f, "symmetrize");
  StepProfile u_star = decreasing_rearrangement(u);
  StepProfile f_inc = increasing_rearrangement(f);
  StepProfile F = pseudo_rearrangement(u, f);
  PLProfile u_pl = solution_profile(u_star, profile_resolution(u.domain()));
  StepProfile grad = gradient_profile(u_pl, n);
  RadialSolution uG = solve_symmetrized(f_inc, n);
  RadialSolution usharpG(rearrange(grad, Monotonicity::increasing), n);
  RadialSolution g = solve_pseudo(F, n);
  return {std::move(u_star), std::move(f_inc), std::move(F), std::move(u_pl),
          std::move(grad),   std::move(uG),    std::move(usharpG), std::move(g)};
}

// ---------------------------------------------------------------------------
// Rescaling

NormalizedProblem normalize(const GridFunction& u, const GridFunction& f, double m, int n) {
  require_same_domain(u, f, "normalize");
  const double f_sup = f.max_abs();
  if (!(f_sup > 0.0)) throw PreconditionError("normalization needs a nonzero source");
  const double measure = u.domain().measure();
  const double b = std::pow(measure, -1.0 / n);
  const double a = b / f_sup;
  auto dom = std::make_shared<const GridDomain>(u.domain().scaled(b));
  GridFunction un(dom, u.values() * a);
  GridFunction fn(dom, f.values() / f_sup);
  return {a, b, f_sup, measure, n, std::move(un), std::move(fn), m / f_sup};
}

GridFunction NormalizedProblem::original_u() const {
  auto dom = std::make_shared<const GridDomain>(u.domain().scaled(1.0 / b));
  return GridFunction(dom, u.values() / a);
}

GridFunction NormalizedProblem::original_f() const {
  auto dom = std::make_shared<const GridDomain>(f.domain().scaled(1.0 / b));
  return GridFunction(dom, f.values() * f_sup);
}

// ---------------------------------------------------------------------------
// Deficits

double primary_deficit(const GridFunction& u, const GridFunction& f) {
  require_same_domain(u, f, "primary_deficit");
  return solve_symmetrized(increasing_rearrangement(f)).l1_norm() - u.integral();
}

Sandwich sandwich_check(const GridFunction& u, const Symmetrization& sym) {
  return {u.integral(), sym.usharpG.l1_norm(), sym.uG.l1_norm()};
}

Sandwich sandwich_check(const GridFunction& u, const GridFunction& f) {
  return sandwich_check(u, symmetrize(u, f));
}

PolyaRatio polya_ratio(const GridFunction& f, const PLProfile& u_pl, int n) {
  auto sq = f.interior_values();
  for (double& x : sq) x *= x;
  PolyaRatio out;
  out.numerator = f.domain().cell_area() * exact_sum(sq);
  out.denominator = dirichlet_energy_radial(u_pl, n);
  out.defined = out.denominator > 0.0;
  out.E = out.defined ? out.numerator / out.denominator - 1.0 : kInf;
  return out;
}

double flat_gradient_fraction(const PLProfile& u_pl, double delta, int n) {
  const StepProfile phi = gradient_profile(u_pl, n);
  const auto& w = u_pl.node_values();
  const double top = w(0);
  double acc = 0.0;
  for (Index k = 0; k < phi.size(); ++k) {
    if (!(phi.values()(k) < delta)) continue;
    // Segments lying on {u# = max} or {u# = 0} are outside the set.
    if (w(k + 1) >= top || w(k) <= 0.0) continue;
    acc += phi.width(k);
  }
  return acc / phi.length();
}

double flat_source_fraction(const GridFunction& u, const GridFunction& f, double delta) {
  require_same_domain(u, f, "flat_source_fraction");
  const double top = u.max_interior();
  std::size_t hit = 0, positive = 0;
  for (Index c : u.domain().cells()) {
    const double v = u.at(c);
    if (v != 0.0) ++positive;
    if (v > 0.0 && v < top && f.at(c) <= delta) ++hit;
  }
  return positive ? double(hit) / double(positive) : 0.0;
}

ExcessSet gradient_excess_set(const StepProfile& f_inc, const StepProfile& grad_inc, double eps, double a,
                              int n) {
  const double e1 = 1.0 + 1.0 / n, c = 1.0 / isoperimetric_constant(n);
  std::vector<double> cuts(f_inc.breaks().data(), f_inc.breaks().data() + f_inc.breaks().size());
  cuts.insert(cuts.end(), grad_inc.breaks().data(), grad_inc.breaks().data() + grad_inc.breaks().size());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double end = std::min(f_inc.back(), grad_inc.back());

  ExcessSet out;
  const bool rigid = !(eps > 0.0);
  out.threshold = rigid ? 0.0 : std::pow(eps, a);
  out.bound = rigid ? 0.0 : std::pow(eps, 1.0 - a);
  std::vector<double> terms, excess;
  for (std::size_t k = 0; k + 1 < cuts.size() && cuts[k] < end; ++k) {
    const double lo = cuts[k], hi = std::min(cuts[k + 1], end), mid = 0.5 * (lo + hi);
    const double d = f_inc(mid) - grad_inc(mid);
    terms.push_back(d * (std::pow(hi, e1) - std::pow(lo, e1)) / e1);
    if (rigid || !(d > 0.0)) continue;
    const double from = std::pow(out.threshold / (c * d), double(n));
    if (from < hi) excess.push_back(hi - std::max(lo, from));
  }
  out.gap_unscaled = exact_sum(terms);
  out.gap = c * out.gap_unscaled;
  out.measure = exact_sum(excess);
  return out;
}

SOmega s_omega(const StepProfile& u_star, const PLProfile& u_pl, double alpha) {
  const double S = u_star.back() * (1.0 - alpha / 4.0);
  Index j = 0;
  while (j + 1 < u_star.size() && u_star.breaks()(j + 1) < S) ++j;
  return {u_star.values()(j), u_pl(S)};
}

double distribution_integral(const GridFunction& u, double t0, double t1) {
  std::vector<double> terms;
  terms.reserve(u.domain().cell_count());
  for (Index c : u.domain().cells()) terms.push_back(std::clamp(std::abs(u.at(c)) - t0, 0.0, t1 - t0));
  return u.domain().cell_area() * exact_sum(terms);
}

AsymmetryChain asymmetry_chain(const GridFunction& u, const Symmetrization& sym, double m, double alpha,
                               double s_omega_value, double gamma_n, int n) {
  if (!(m > 0.0)) throw PreconditionError("asymmetry chain needs m > 0");
  const double measure = u.domain().measure();
  const double iso = isoperimetric_constant(n);
  AsymmetryChain c;
  c.g_l1 = sym.g.l1_norm();
  c.u_l1 = u.integral();
  c.uG_l1 = sym.uG.l1_norm();
  c.s_omega = s_omega_value;
  c.lower_bound = s_omega_value * alpha * alpha / (8.0 * gamma_n);
  c.sharp_bound = s_omega_value * measure * (1.0 - alpha / 4.0) * alpha * alpha / (4.0 * gamma_n);
  c.t1 = 0.5 * sym.g(measure * (1.0 - alpha / 8.0));
  c.t1_bound = m * alpha * std::pow(measure, 1.0 / n) / (16.0 * iso);
  c.case_large_s = s_omega_value >= c.t1;
  c.window = sym.g.level_measure_integral(c.t1, 2.0 * c.t1) - distribution_integral(u, c.t1, 2.0 * c.t1);
  c.window_bound = measure * alpha * c.t1 / 8.0;
  c.C1 = m * std::pow(measure, 1.0 + 1.0 / n) / iso * std::min(1.0 / (128.0 * gamma_n), 1.0 / 256.0);
  c.cubic_bound = c.C1 * alpha * alpha * alpha;
  return c;
}

// ---------------------------------------------------------------------------
// Translation infimum

namespace {

double translation_objective(const GridFunction& u, const StepProfile& u_star, double sharp_l1, const Vec2& c) {
  const GridDomain& dom = u.domain();
  const double h = dom.spacing();
  const double w = u_star.width(0), end = u_star.back();
  const Index last = u_star.size() - 1;
  const double* v = u_star.values().data();
  const auto& mask = dom.mask();
  const double* uv = u.values().data();
  long double diff = 0.0L, inside = 0.0L;
  for (Index j = 0; j < dom.ny(); ++j) {
    const double dy = dom.origin().y() + h * (double(j) + 0.5) - c.y();
    for (Index i = 0; i < dom.nx(); ++i) {
      if (!mask(i, j)) continue;
      const double dx = dom.origin().x() + h * (double(i) + 0.5) - c.x();
      const double s = std::numbers::pi * (dx * dx + dy * dy);
      double us = 0.0;
      if (s <= end) us = v[std::min(Index(s / w), last)];
      diff += std::abs(uv[j * dom.nx() + i] - us);
      inside += us;
    }
  }
  const double h2 = dom.cell_area();
  const double tail = std::max(0.0, sharp_l1 - h2 * double(inside));
  return h2 * double(diff) + tail;
}

}  // namespace

double translation_objective(const GridFunction& u, const StepProfile& u_star, const Vec2& c) {
  return translation_objective(u, u_star, u_star.integral(), c);
}

Translation translation_infimum(const GridFunction& u, const StepProfile& u_star) {
  const GridDomain& dom = u.domain();
  const double h = dom.spacing();
  CenterSearchOptions search;
  search.lattice_radius = 8;
  search.lattice_step = std::max(8.0 * h, 0.5 * dom.diameter() / search.lattice_radius);
  search.simplex_size = search.lattice_step;
  search.tolerance = h / 4.0;
  const double sharp_l1 = u_star.integral();
  const auto found = minimize_center([&](const Vec2& c) { return translation_objective(u, u_star, sharp_l1, c); },
                                     dom.centroid(), search);
  Translation t;
  t.T = found.value;
  t.center = found.center;
  t.shift = -found.center;
  t.evaluations = found.evaluations;
  return t;
}

GridFunction level_weight(const GridFunction& u, const GridFunction& f, int n) {
  const auto order = level_ordering(u, f);
  const double cell = u.domain().cell_area();
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(u.domain().nx(), u.domain().ny());
  for (std::size_t k = 0; k < order.size(); ++k)
    out.data()[order[k]] = std::pow((double(k) + 0.5) * cell, 1.0 / n);
  return GridFunction(u.domain_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------
// Report

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "fail";
    case RowStatus::vacuous: return "vacuous";
  }
  return "unknown";
}

std::string to_string(RowKind k) { return k == RowKind::enforced ? "enforced" : "advisory"; }

bool DeficitReport::failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const LedgerRow& r) {
    return r.kind == RowKind::enforced && r.status == RowStatus::fail;
  });
}

const LedgerRow* DeficitReport::row(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

double DeficitReport::quantity(const std::string& name) const {
  auto it = quantities.find(name);
  if (it == quantities.end()) throw Error("no quantity named " + name);
  return it->second;
}

namespace {

class Ledger {
 public:
  /// lhs <= rhs within base * max(1, |lhs|, |rhs|).
  void leq(const std::string& name, double lhs, double rhs, double base, RowKind kind = RowKind::enforced,
           std::string note = {}) {
    LedgerRow r{name, lhs, rhs, rhs - lhs, 0.0, RowStatus::pass, kind, std::move(note)};
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
      r.status = RowStatus::vacuous;
      r.margin = 0.0;
    } else {
      r.tol = base * std::max({1.0, std::abs(lhs), std::abs(rhs)});
      r.status = r.margin >= -r.tol ? RowStatus::pass : RowStatus::fail;
    }
    rows_.push_back(std::move(r));
  }

  /// |lhs - rhs| <= 1e-10 max(1, |lhs|, |rhs|).
  void identity(const std::string& name, double lhs, double rhs, std::string note = {}) {
    LedgerRow r{name, lhs, rhs, -std::abs(lhs - rhs), 0.0, RowStatus::pass, RowKind::enforced, std::move(note)};
    r.tol = 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    r.status = r.margin >= -r.tol ? RowStatus::pass : RowStatus::fail;
    rows_.push_back(std::move(r));
  }

  void vacuous(const std::string& name, double lhs, double rhs, std::string note) {
    rows_.push_back({name, lhs, rhs, rhs - lhs, 0.0, RowStatus::vacuous, RowKind::enforced, std::move(note)});
  }

  std::vector<LedgerRow> take() {
    std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return std::move(rows_);
  }

 private:
  std::vector<LedgerRow> rows_;
};

}  // namespace

DeficitReport build_report(const GridFunction& u, const GridFunction& f, double m, const ReportInput& input) {
  require_same_domain(u, f, "build_report");
  constexpr int n = 2;
  const Constants& k = input.constants;
  const GridDomain& dom = u.domain();
  const double h = dom.spacing(), cell = dom.cell_area();
  const double measure = dom.measure();
  const double f_sup = f.max_abs();
  const double iso = isoperimetric_constant(n);

  DeficitReport rep;
  rep.run_id = input.run_id;
  rep.grid = {h, dom.nx(), dom.ny(), dom.origin(), dom.cell_count(), measure};
  rep.shape = input.shape;
  rep.source = input.source;
  rep.constants = k;
  rep.tol = tolerance(dom, f_sup, k.c_tol);
  auto& q = rep.quantities;
  Ledger led;
  const double tol = rep.tol;

  // Original problem.
  const Symmetrization sym = symmetrize(u, f, n);
  const double u_l1 = u.integral();
  const double uG_l1 = sym.uG.l1_norm();
  const double mid_l1 = sym.usharpG.l1_norm();
  const double eps = uG_l1 - u_l1;
  q["m"] = m;
  q["f_sup"] = f_sup;
  q["measure"] = measure;
  q["diameter"] = dom.diameter();
  q["u_max"] = u.max_interior();
  q["u_l1"] = u_l1;
  q["uG_l1"] = uG_l1;
  q["uG_l1_direct"] = sym.uG.l1_norm_direct();
  q["usharpG_l1"] = mid_l1;
  q["eps"] = eps;

  led.leq("gn_inequality", u_l1, uG_l1, tol, RowKind::enforced, "||u||_1 <= ||u^G||_1");
  led.leq("sandwich_lower", u_l1, mid_l1, tol, RowKind::enforced, "||u||_1 <= ||(u#)^G||_1");
  led.leq("sandwich_upper", mid_l1, uG_l1, tol, RowKind::enforced, "||(u#)^G||_1 <= ||u^G||_1");

  const auto hl = hl_products(u, f);
  led.leq("hardy_littlewood", hl.lhs, hl.rhs, 0.0, RowKind::enforced, "int |u f| <= int u* f*, exact");

  const double grad_sup = sym.grad_sharp.max_value();
  q["grad_sharp_sup"] = grad_sup;
  led.leq("polya_szego_sup", grad_sup, f_sup, tol, RowKind::enforced, "sup |grad u#| <= sup |grad u|");
  const PolyaRatio pr = polya_ratio(f, sym.u_pl, n);
  q["energy_u"] = pr.numerator;
  q["energy_sharp"] = pr.denominator;
  q["E"] = pr.E;
  led.leq("polya_szego_energy", pr.denominator, pr.numerator, tol, RowKind::enforced,
          "int |grad u#|^2 <= int |grad u|^2");

  // Asymmetry of the domain.
  const AsymmetryResult asym = fraenkel_asymmetry(dom);
  const double alpha = asym.alpha;
  const double perimeter = domain_perimeter(dom);
  const double iso_bound = iso * std::sqrt(measure) * (1.0 + alpha * alpha / k.gamma_n);
  q["alpha"] = alpha;
  q["alpha_centroid"] = asym.centroid_alpha;
  q["ball_x"] = asym.ball.center.x();
  q["ball_y"] = asym.ball.center.y();
  q["perimeter"] = perimeter;
  led.leq("isoperimetric", iso_bound, perimeter, tol, RowKind::enforced,
          "n omega^{1/n} |Omega|^{1-1/n} (1 + alpha^2/gamma) <= P(Omega)");

  const SOmega so = s_omega(sym.u_star, sym.u_pl, alpha);
  q["s_omega"] = so.step;
  q["s_omega_interp"] = so.interpolated;

  // Asymmetry of superlevel sets with mu(t) >= |Omega| (1 - alpha/4).
  if (so.step > 0.0) {
    for (int j = 0; j < k.propagation_levels; ++j) {
      const double t = so.step * (j + 0.5) / k.propagation_levels;
      const GridDomain level = superlevel_set(u, t);
      const double a_t = fraenkel_asymmetry(level).alpha;
      char note[96];
      std::snprintf(note, sizeof note, "t = %.6g, |{u>t}| = %.6g", t, level.measure());
      led.leq(level_name("asymmetry_propagation", j), 0.5 * alpha, a_t, tol, RowKind::enforced, note);
    }
  }

  // Per-level perimeter inequality along the flow of level sets.
  {
    std::vector<double> sorted = u.interior_values();
    for (double& x : sorted) x = std::abs(x);
    std::sort(sorted.begin(), sorted.end());
    const double top = sorted.back();
    const int L = k.levels;
    std::optional<Vec2> warm = asym.ball.center;
    // Windows narrower than a few cells hold too few level values to resolve -d mu/dt.
    const double width = std::max(top / (L + 1), 4.0 * h * f_sup);
    for (int i = 1; i <= L; ++i) {
      const double t0 = top * i / (L + 1), t1 = t0 + width;
      if (t1 >= top) break;
      const auto count_above = [&](double t) {
        return double(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
      };
      const double mu0 = cell * count_above(t0), mu1 = cell * count_above(t1);
      if (mu1 <= 0.0 || mu0 - mu1 > 0.1 * measure) continue;
      std::vector<double> shell;
      for (Index c : dom.cells())
        if (u.at(c) > t0 && u.at(c) <= t1) shell.push_back(f.at(c));
      const double dt = t1 - t0;
      const double flux = cell * exact_sum(shell) / dt;
      const double root_mu = mu_power_integral(sorted, cell, t0, t1, 1.0 - 1.0 / n) / dt;
      AsymmetryOptions opt;
      opt.lattice = false;
      opt.start = warm;
      const auto a_level = fraenkel_asymmetry(superlevel_set(u, t0), opt);
      warm = a_level.ball.center;
      const double bound = iso * root_mu * (1.0 + a_level.alpha * a_level.alpha / k.gamma_n);
      char note[96];
      std::snprintf(note, sizeof note, "t in [%.6g, %.6g], alpha = %.6g", t0, t1, a_level.alpha);
      led.leq(level_name("coarea_level", i), bound, flux, tol, RowKind::enforced, note);
    }
  }

  // Pseudo-rearranged problem and the cubic asymmetry bound.
  const AsymmetryChain ch = asymmetry_chain(u, sym, m, alpha, so.step, k.gamma_n, n);
  q["g_l1"] = ch.g_l1;
  q["t1"] = ch.t1;
  q["C1"] = ch.C1;
  led.leq("asymmetry_pseudo_norm", ch.g_l1, ch.uG_l1, tol, RowKind::enforced, "||g||_1 <= ||u^G||_1");
  led.leq("asymmetry_lower_bound", ch.lower_bound, ch.g_l1 - ch.u_l1, tol, RowKind::enforced,
          "s_Omega alpha^2 / (8 gamma) <= ||g||_1 - ||u||_1");
  led.leq("asymmetry_lower_bound_sharp", ch.sharp_bound, ch.g_l1 - ch.u_l1, tol, RowKind::advisory,
          "s_Omega |Omega| (1 - alpha/4) alpha^2 / (4 gamma) <= ||g||_1 - ||u||_1");
  led.leq("asymmetry_t1", ch.t1_bound, ch.t1, tol, RowKind::enforced,
          "m alpha |Omega|^{1/n} / (16 n omega^{1/n}) <= t1");
  led.leq("asymmetry_window", ch.window_bound, ch.window, tol,
          ch.case_large_s ? RowKind::advisory : RowKind::enforced,
          ch.case_large_s ? "s_Omega >= t1: window bound not needed" : "s_Omega < t1");
  led.leq("asymmetry_cubic", ch.cubic_bound, eps, tol, RowKind::enforced, "C1 alpha^3 <= eps");

  // Translation infimum.
  const Translation tr = translation_infimum(u, sym.u_star);
  q["T"] = tr.T;
  q["translation_x"] = tr.shift.x();
  q["translation_y"] = tr.shift.y();

  // Source relabeling on the original problem.
  {
    const GridFunction fu = level_relabeling(u, f);
    const GridFunction fu_lit = level_relabeling_decreasing(u, f);
    std::vector<double> d, dl;
    for (Index c : dom.cells()) {
      d.push_back(std::abs(f.at(c) - fu.at(c)));
      dl.push_back(std::abs(f.at(c) - fu_lit.at(c)));
    }
    q["f_fu_l1"] = cell * exact_sum(d);
    q["f_fu_l1_decreasing"] = cell * exact_sum(dl);
  }

  // Normalized problem: |Omega| = 1, sup f = 1.
  const NormalizedProblem np = normalize(u, f, m, n);
  const GridDomain& ndom = np.u.domain();
  const double ntol = tolerance(ndom, 1.0, k.c_tol);
  rep.tol_normalized = ntol;
  const Symmetrization nsym = symmetrize(np.u, np.f, n);
  const double w_l1 = np.u.integral();
  const double eps_n = nsym.uG.l1_norm() - w_l1;
  const double m_n = np.m;
  q["a"] = np.a;
  q["b"] = np.b;
  q["eps_normalized"] = eps_n;
  q["m_normalized"] = m_n;

  // Rescaling identities.
  {
    const double scale = np.deficit_scale();
    const Ball scaled_ball{asym.ball.center * np.b, asym.ball.radius * np.b};
    const double alpha_n = std::max(0.0, symmetric_difference(ndom, scaled_ball) / ndom.measure());
    led.identity("rescale_alpha", alpha_n, alpha, "alpha of the rescaled domain at the rescaled centre");
    led.identity("rescale_deficit", eps_n, scale * eps, "eps~ = |Omega|^{-1-1/n} eps / sup f");
    const double T_n = translation_objective(np.u, nsym.u_star, tr.center * np.b);
    led.identity("rescale_translation", T_n, scale * tr.T, "||w - w#||_1 at the rescaled optimum");
    led.identity("rescale_min_source", np.f.min_interior(), f.min_interior() / f_sup, "min g = min f / sup f");
    const GridFunction gw = level_relabeling(np.u, np.f);
    std::vector<double> d;
    for (Index c : ndom.cells()) d.push_back(std::abs(np.f.at(c) - gw.at(c)));
    const double dist_n = ndom.cell_area() * exact_sum(d);
    led.identity("rescale_source_distance", dist_n, q["f_fu_l1"] / (measure * f_sup),
                 "||g - g_w||_1 = ||f - f_u||_1 / (|Omega| sup f)");
    q["source_distance_normalized"] = dist_n;
  }

  // Gradient gap and its excess set.
  {
    const StepProfile grad_inc = rearrange(nsym.grad_sharp, Monotonicity::increasing);
    const ExcessSet ex = gradient_excess_set(nsym.f_inc, grad_inc, eps_n, k.excess_exponent, n);
    q["gradient_gap"] = ex.gap;
    q["gradient_gap_unscaled"] = ex.gap_unscaled;
    q["excess_measure"] = ex.measure;
    led.leq("gradient_gap", ex.gap, eps_n, ntol, RowKind::enforced,
            "(1/(n omega^{1/n})) int [f_* - |grad u#|_*] t^{1/n} <= eps~");
    led.leq("gradient_gap_unscaled", ex.gap_unscaled, eps_n, ntol, RowKind::advisory,
            "int [f_* - |grad u#|_*] t^{1/n} <= eps~ without the radial constant");
    if (eps_n > 0.0)
      led.leq("excess_set", ex.measure, ex.bound, ntol, RowKind::advisory, "|I| < eps~^{1-a}");
    else
      led.vacuous("excess_set", ex.measure, ex.bound, "eps~ <= 0: I is empty");
  }

  // Energies on the normalized problem.
  const PolyaRatio npr = polya_ratio(np.f, nsym.u_pl, n);
  const double root_eps = std::sqrt(std::max(eps_n, 0.0));
  led.leq("energy_gap", npr.numerator - npr.denominator, 8.0 * root_eps, ntol, RowKind::enforced,
          "int |grad w|^2 - int |grad w#|^2 <= 8 eps~^{1/2}");
  if (eps_n <= std::pow(m_n, 4) / 256.0)
    led.leq("polya_ratio_bound", npr.E, 16.0 / (m_n * m_n) * root_eps, ntol, RowKind::enforced,
            "E <= 16/m~^2 eps~^{1/2}");
  else
    led.vacuous("polya_ratio_bound", npr.E, 16.0 / (m_n * m_n) * root_eps, "eps~ > m~^4/256");

  // Almost radiality.
  {
    const double expo = (4.0 * k.r + 2.0) / k.r;
    const double threshold = std::pow(m_n, expo) / 256.0;
    const double Er = std::pow(std::max(npr.E, 0.0), k.r);
    const double T_n = np.deficit_scale() * tr.T;
    const double M_src = flat_source_fraction(np.u, np.f, Er);
    const double M_sharp = flat_gradient_fraction(nsym.u_pl, Er, n);
    q["T_normalized"] = T_n;
    q["flat_source_fraction"] = M_src;
    q["flat_gradient_fraction"] = M_sharp;
    q["radiality_threshold"] = threshold;
    const bool small = eps_n < threshold;
    if (small) {
      led.leq("radiality_flat_set", M_src, 0.0, 0.0, RowKind::enforced, "M(E^r) = 0 when eps~ < m~^{(4r+2)/r}/256");
      led.vacuous("radiality_linear", T_n, 512.0 * n / (n + 1.0) * std::pow(m_n, -expo) * eps_n,
                  "small-deficit regime");
    } else {
      led.vacuous("radiality_flat_set", M_src, 0.0, "large-deficit regime");
      led.leq("radiality_linear", T_n, 512.0 * n / (n + 1.0) * std::pow(m_n, -expo) * eps_n, ntol,
              RowKind::enforced, "T~ <= 512n/(n+1) m~^{-(4r+2)/r} eps~");
    }
    led.leq("radiality_flat_set_sharp", M_sharp, 0.0, 0.0, RowKind::advisory,
            "flat zone of |grad w#| below E^r");
    led.leq("radiality_trivial", T_n, 2.0 * w_l1, ntol, RowKind::enforced, "T~ <= 2 ||w||_1");
    led.leq("polya_szego_quantitative", k.C * T_n, std::pow(M_sharp + std::max(npr.E, 0.0), k.s), ntol,
            RowKind::advisory, "C T~ <= (M(E^r) + E)^s with configured C, r, s");
  }

  // Source stability.
  {
    const GridFunction hu = level_weight(np.u, np.f, n);
    const StepProfile g_star = decreasing_rearrangement(np.f);
    const double total = g_star.back();
    const Index nodes = std::min<Index>(g_star.size() + 1, 4097);
    Eigen::VectorXd sigma = Eigen::VectorXd::LinSpaced(nodes, 0.0, total);
    const PLProfile hstar =
        sample_profile([&](double s) { return std::pow(std::max(total - s, 0.0), 1.0 / n); }, sigma);
    const LorentzParams lp{1.0, 1.0};
    const QuantitativeHL qhl = hl_quantitative_gap(hu, np.f, lp, hstar);
    q["lorentz_norm"] = qhl.lorentz.value;
    q["hl_gap"] = qhl.rhs - (qhl.lhs - qhl.deficit_term);
    led.leq("source_hl_quantitative", qhl.lhs, qhl.rhs, ntol, RowKind::enforced,
            "int g h_u + ||g - g_h||^2 / (4e ||g||_Lambda) <= int g* h*");
    const double dist = q["source_distance_normalized"];
    if (qhl.lorentz.vacuous)
      led.vacuous("source_stability", dist * dist, kInf, "Lorentz norm infinite");
    else
      led.leq("source_stability", dist * dist, 4.0 * std::numbers::e * qhl.lorentz.value * std::max(eps_n, 0.0),
              ntol, RowKind::enforced, "||g - g_w||_1^2 <= 4e ||g||_Lambda eps~");
    const double dist_lit = q["f_fu_l1_decreasing"] / (measure * f_sup);
    led.leq("source_stability_decreasing", dist_lit * dist_lit,
            4.0 * std::numbers::e * qhl.lorentz.value * std::max(eps_n, 0.0), ntol, RowKind::advisory,
            "same bound with f_u = f*(mu(u(x)))");
    led.leq("lorentz_norm_claim", qhl.lorentz.value, 1.0 / n, ntol, RowKind::advisory,
            "||g||_Lambda <= sup g / n");
  }

  rep.rows = led.take();
  return rep;
}

}  // namespace hjsym
