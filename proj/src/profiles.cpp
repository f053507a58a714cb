#include "hjsym/profiles.hpp"

#include <numeric>

namespace hjsym {

namespace {

bool weakly_monotone(const Eigen::VectorXd& v, Monotonicity m) {
  for (Index k = 0; k + 1 < v.size(); ++k) {
    if (m == Monotonicity::decreasing && v(k + 1) > v(k)) return false;
    if (m == Monotonicity::increasing && v(k + 1) < v(k)) return false;
  }
  return true;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Index(v.size()));
}

/// Cells sorted by |value| descending, ties by ascending cell index.
std::vector<Index> descending_order(const GridFunction& u) {
  std::vector<Index> cells = u.domain().cells();
  std::stable_sort(cells.begin(), cells.end(),
                   [&](Index a, Index b) { return std::abs(u.at(a)) > std::abs(u.at(b)); });
  return cells;
}

}  // namespace

// ---------------------------------------------------------------------------
// StepProfile

StepProfile::StepProfile(Eigen::VectorXd breaks, Eigen::VectorXd values, Monotonicity monotonicity)
    : breaks_(std::move(breaks)), values_(std::move(values)), monotonicity_(monotonicity) {
  if (values_.size() < 1 || breaks_.size() != values_.size() + 1)
    throw PreconditionError("step profile needs K >= 1 values and K+1 breakpoints");
  for (Index k = 0; k + 1 < breaks_.size(); ++k)
    if (!(breaks_(k + 1) > breaks_(k)))
      throw PreconditionError("step profile breakpoints must be strictly increasing");
  if (!values_.allFinite()) throw PreconditionError("step profile values must be finite");
  if (!weakly_monotone(values_, monotonicity_))
    throw PreconditionError("step profile values violate the declared monotonicity");
}

StepProfile StepProfile::uniform(double width, Eigen::VectorXd values, Monotonicity monotonicity) {
  Eigen::VectorXd breaks(values.size() + 1);
  for (Index k = 0; k < breaks.size(); ++k) breaks(k) = double(k) * width;
  return StepProfile(std::move(breaks), std::move(values), monotonicity);
}

Index StepProfile::interval(double s) const {
  if (s < front()) return -1;
  if (s >= back()) return size();
  const double* b = breaks_.data();
  return Index(std::upper_bound(b, b + breaks_.size(), s) - b) - 1;
}

double StepProfile::operator()(double s) const {
  const Index k = interval(s);
  if (k < 0) return values_(0);
  if (k >= size()) return 0.0;
  return values_(k);
}

double StepProfile::integral() const {
  std::vector<double> terms(static_cast<std::size_t>(size()));
  for (Index k = 0; k < size(); ++k) terms[std::size_t(k)] = width(k) * values_(k);
  return exact_sum(terms);
}

double StepProfile::lp_norm(double p) const {
  if (std::isinf(p)) return values_.cwiseAbs().maxCoeff();
  // Uniform profiles are summed as width * Σ|v|^p so that norms agree bit-for-bit with
  // the grid functions they were sorted from.
  const double w0 = width(0);
  bool uniform = true;
  for (Index k = 0; k < size() && uniform; ++k) uniform = breaks_(k) == double(k) * w0 + front();
  std::vector<double> terms(static_cast<std::size_t>(size()));
  for (Index k = 0; k < size(); ++k) {
    const double t = std::pow(std::abs(values_(k)), p);
    terms[std::size_t(k)] = uniform ? t : width(k) * t;
  }
  const double s = exact_sum(terms);
  return std::pow(uniform ? w0 * s : s, 1.0 / p);
}

StepProfile StepProfile::merged() const {
  std::vector<double> b{breaks_(0)}, v;
  for (Index k = 0; k < size(); ++k) {
    if (!v.empty() && v.back() == values_(k)) {
      b.back() = breaks_(k + 1);
      continue;
    }
    v.push_back(values_(k));
    b.push_back(breaks_(k + 1));
  }
  return StepProfile(to_vector(b), to_vector(v), monotonicity_);
}

// ---------------------------------------------------------------------------
// PLProfile

PLProfile::PLProfile(Eigen::VectorXd s, Eigen::VectorXd w) : s_(std::move(s)), w_(std::move(w)) {
  if (s_.size() < 2 || s_.size() != w_.size())
    throw PreconditionError("PL profile needs at least two nodes");
  for (Index k = 0; k + 1 < s_.size(); ++k)
    if (!(s_(k + 1) > s_(k))) throw PreconditionError("PL profile nodes must be strictly increasing");
}

double PLProfile::operator()(double s) const {
  if (s <= s_(0)) return w_(0);
  if (s >= s_(s_.size() - 1)) return w_(w_.size() - 1);
  const double* b = s_.data();
  const Index k = Index(std::upper_bound(b, b + s_.size(), s) - b) - 1;
  const double t = (s - s_(k)) / (s_(k + 1) - s_(k));
  return w_(k) + t * (w_(k + 1) - w_(k));
}

bool PLProfile::is_decreasing() const { return weakly_monotone(w_, Monotonicity::decreasing); }
bool PLProfile::is_increasing() const { return weakly_monotone(w_, Monotonicity::increasing); }

// ---------------------------------------------------------------------------
// Rearrangements

StepProfile distribution_function(const GridFunction& u) {
  std::vector<double> a = u.interior_values();
  for (double& x : a) x = std::abs(x);
  std::sort(a.begin(), a.end());
  const double cell = u.domain().cell_area();
  const std::size_t n = a.size();

  if (a.back() == 0.0) {
    // u ≡ 0: μ vanishes for every t >= 0.
    return StepProfile(Eigen::Vector2d(0.0, 1.0), Eigen::VectorXd::Zero(1), Monotonicity::decreasing);
  }
  std::vector<double> breaks, values;
  if (a.front() > 0.0) {
    breaks.push_back(0.0);
    values.push_back(cell * double(n));
  }
  for (std::size_t k = 0; k < n;) {
    std::size_t next = k;
    while (next < n && a[next] == a[k]) ++next;
    breaks.push_back(a[k]);
    if (next < n) values.push_back(cell * double(n - next));
    k = next;
  }
  return StepProfile(to_vector(breaks), to_vector(values), Monotonicity::decreasing);
}

StepProfile decreasing_rearrangement(const GridFunction& u) {
  const auto order = descending_order(u);
  Eigen::VectorXd v(Index(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) v(Index(k)) = std::abs(u.at(order[k]));
  return StepProfile::uniform(u.domain().cell_area(), std::move(v), Monotonicity::decreasing);
}

StepProfile increasing_rearrangement(const GridFunction& f) {
  const auto order = descending_order(f);
  const Index n = Index(order.size());
  Eigen::VectorXd v(n);
  for (Index k = 0; k < n; ++k) v(k) = std::abs(f.at(order[std::size_t(n - 1 - k)]));
  return StepProfile::uniform(f.domain().cell_area(), std::move(v), Monotonicity::increasing);
}

StepProfile rearrange(const StepProfile& p, Monotonicity order) {
  if (order == Monotonicity::none) return p;
  std::vector<Index> idx(std::size_t(p.size()));
  std::iota(idx.begin(), idx.end(), Index(0));
  const auto& v = p.values();
  if (order == Monotonicity::decreasing)
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) > v(b); });
  else
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) < v(b); });
  Eigen::VectorXd breaks(p.size() + 1), values(p.size());
  breaks(0) = p.front();
  double acc = p.front();
  for (Index k = 0; k < p.size(); ++k) {
    values(k) = v(idx[std::size_t(k)]);
    acc += p.width(idx[std::size_t(k)]);
    breaks(k + 1) = acc;
  }
  breaks(p.size()) = p.back();
  // Rounding in the running sum can collapse a tiny interval; drop it.
  std::vector<double> b{breaks(0)}, w;
  for (Index k = 0; k < p.size(); ++k) {
    if (breaks(k + 1) <= b.back()) continue;
    b.push_back(breaks(k + 1));
    w.push_back(values(k));
  }
  return StepProfile(to_vector(b), to_vector(w), order);
}

double eval_schwarz(const StepProfile& profile, const Vec2& x, int n) {
  const double s = unit_ball_volume(n) * std::pow(x.norm(), n);
  if (s > profile.back()) return 0.0;
  const Index k = std::clamp(profile.interval(s), Index(0), profile.size() - 1);
  return profile.values()(k);
}

// ---------------------------------------------------------------------------
// Piecewise-linear regularization

double profile_resolution(const GridDomain& domain) {
  return 4.0 * domain.spacing() * std::sqrt(domain.measure());
}

PLProfile piecewise_linearize(const StepProfile& p, double min_width, std::optional<double> front_value,
                              std::optional<double> floor, double front_node) {
  const StepProfile m = p.merged();
  const double lo = floor ? std::min(*floor, p.min_value()) : p.min_value();
  const double hi = p.max_value();

  struct Group {
    double a, b, mass;
  };
  std::vector<Group> groups;
  for (Index k = 0; k < m.size(); ++k) {
    const double a = m.breaks()(k), b = m.breaks()(k + 1);
    const double mass = (b - a) * m.values()(k);
    if (!groups.empty() && groups.back().b - groups.back().a < min_width) {
      groups.back().b = b;
      groups.back().mass += mass;
    } else {
      groups.push_back({a, b, mass});
    }
  }
  if (groups.size() > 1 && groups.back().b - groups.back().a < min_width) {
    const Group last = groups.back();
    groups.pop_back();
    groups.back().b = last.b;
    groups.back().mass += last.mass;
  }

  if (groups.size() == 1 && !front_value) {
    const double w = groups[0].mass / (groups[0].b - groups[0].a);
    return PLProfile(Eigen::Vector2d(p.front(), p.back()), Eigen::Vector2d(w, w));
  }

  std::vector<double> s, w;
  for (const auto& g : groups) {
    const double at = s.empty() && front_value ? front_node : 0.5;
    s.push_back(g.a + at * (g.b - g.a));
    w.push_back(g.mass / (g.b - g.a));
  }

  // Linear extension of an end segment, clamped to [lo, hi]; a clamp inserts a node where
  // the line meets the bound.
  auto extend = [&](double s0, double w0, double s1, double w1, double target,
                    std::vector<std::pair<double, double>>& out) {
    const double slope = (w1 - w0) / (s1 - s0);
    const double at = w0 + slope * (target - s0);
    if (at > hi || at < lo) {
      const double bound = at > hi ? hi : lo;
      const double cross = slope != 0.0 ? s0 + (bound - w0) / slope : s0;
      if (std::abs(cross - s0) > 0.0 && (cross - s0) * (target - s0) > 0.0 &&
          std::abs(cross - s0) < std::abs(target - s0))
        out.emplace_back(cross, bound);
      out.emplace_back(target, bound);
    } else {
      out.emplace_back(target, at);
    }
  };

  std::vector<std::pair<double, double>> head, tail;
  const std::size_t n = s.size();
  if (front_value) head.emplace_back(p.front(), *front_value);
  else if (n > 1) extend(s[0], w[0], s[1], w[1], p.front(), head);
  else head.emplace_back(p.front(), w[0]);
  if (n > 1) extend(s[n - 1], w[n - 1], s[n - 2], w[n - 2], p.back(), tail);
  else tail.emplace_back(p.back(), w[0]);

  std::vector<double> ns, nw;
  for (auto it = head.rbegin(); it != head.rend(); ++it) {
    ns.push_back(it->first);
    nw.push_back(it->second);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (s[k] <= ns.back()) continue;
    ns.push_back(s[k]);
    nw.push_back(w[k]);
  }
  for (const auto& [ts, tw] : tail) {
    if (ts <= ns.back()) continue;
    ns.push_back(ts);
    nw.push_back(tw);
  }
  return PLProfile(to_vector(ns), to_vector(nw));
}

PLProfile solution_profile(const StepProfile& u_star, double min_width) {
  // A cone u = max - c r has its mean over the first group {r < ρ} at r = 2ρ/3, i.e. at
  // 4/9 of the group's measure.
  return piecewise_linearize(u_star, min_width, u_star.max_value(), 0.0, 4.0 / 9.0);
}

PLProfile sample_profile(const std::function<double(double)>& fn, const Eigen::VectorXd& nodes) {
  Eigen::VectorXd w(nodes.size());
  for (Index k = 0; k < nodes.size(); ++k) w(k) = fn(nodes(k));
  return PLProfile(nodes, std::move(w));
}

// ---------------------------------------------------------------------------
// Lorentz-type norms

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_decreasing(const PLProfile& hstar) {
  if (!hstar.is_decreasing()) throw PreconditionError("theta_p requires a decreasing h*");
}

double inverse_slope(const PLProfile& hstar, Index k) {
  const double d = -hstar.slope(k);
  return d > 0.0 ? 1.0 / d : kInf;
}

/// ∫_{s_k}^{min(s_{k+1}, s)} (-h*')^{-1/(p-1)} summed over segments.
double theta_integral(const PLProfile& hstar, double p, double s) {
  const auto& nodes = hstar.nodes();
  const double e = 1.0 / (p - 1.0);
  double acc = 0.0;
  for (Index k = 0; k < hstar.segments(); ++k) {
    const double a = nodes(k), b = std::min(nodes(k + 1), s);
    if (b <= a) break;
    const double d = -hstar.slope(k);
    if (!(d > 0.0)) return kInf;
    acc += (b - a) * std::pow(d, -e);
  }
  return acc;
}

}  // namespace

double theta_p(const PLProfile& hstar, double p, double s) {
  if (!(p >= 1.0)) throw PreconditionError("theta_p requires p >= 1");
  require_decreasing(hstar);
  const auto& nodes = hstar.nodes();
  if (p == 1.0) {
    double sup = inverse_slope(hstar, 0);
    for (Index k = 1; k < hstar.segments() && nodes(k) < s; ++k) sup = std::max(sup, inverse_slope(hstar, k));
    return sup;
  }
  const double phi = theta_integral(hstar, p, s);
  return std::isinf(phi) ? kInf : std::pow(phi, 1.0 - 1.0 / p);
}

LorentzNorm lorentz_norm(const StepProfile& g_star, const PLProfile& hstar, const LorentzParams& params) {
  if (!(params.p >= 1.0) || !(params.q >= 1.0)) throw PreconditionError("Lorentz exponents must be >= 1");
  if (g_star.monotonicity() != Monotonicity::decreasing)
    throw PreconditionError("lorentz_norm expects a decreasing rearrangement");
  require_decreasing(hstar);
  const double q = params.q;
  const double sup = g_star.lp_norm(kInf);
  if (sup == 0.0) return {0.0, false};

  const auto& nodes = hstar.nodes();
  std::vector<double> terms;
  if (params.p == 1.0) {
    double running = inverse_slope(hstar, 0);
    if (std::isinf(running)) return {kInf, true};
    terms.push_back(running * std::pow(sup, q));
    for (Index k = 1; k < hstar.segments(); ++k) {
      const double c = inverse_slope(hstar, k);
      if (std::isinf(c)) return {kInf, true};
      if (c > running) {
        terms.push_back((c - running) * std::pow(std::abs(g_star(nodes(k))), q));
        running = c;
      }
    }
  } else {
    // Stieltjes sum over the common refinement of the g* and h* partitions.
    std::vector<double> cuts(g_star.breaks().data(), g_star.breaks().data() + g_star.breaks().size());
    cuts.insert(cuts.end(), nodes.data(), nodes.data() + nodes.size());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double prev = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k] < nodes(0) || cuts[k + 1] > nodes(nodes.size() - 1)) continue;
      const double th = theta_p(hstar, params.p, cuts[k + 1]);
      if (std::isinf(th)) return {kInf, true};
      terms.push_back((th - prev) * std::pow(std::abs(g_star(cuts[k])), q));
      prev = th;
    }
  }
  return {std::pow(exact_sum(terms), 1.0 / q), false};
}

// ---------------------------------------------------------------------------
// Hardy-Littlewood

HardyLittlewood hl_products(const GridFunction& h, const GridFunction& g) {
  require_same_domain(h, g, "hl_products");
  auto hv = h.interior_values(), gv = g.interior_values();
  for (double& x : hv) x = std::abs(x);
  for (double& x : gv) x = std::abs(x);
  const double cell = h.domain().cell_area();
  HardyLittlewood out;
  out.lhs = cell * exact_dot(hv, gv);
  std::sort(hv.begin(), hv.end(), std::greater<>());
  std::sort(gv.begin(), gv.end(), std::greater<>());
  out.rhs = cell * exact_dot(hv, gv);
  return out;
}

QuantitativeHL hl_quantitative_gap(const GridFunction& h, const GridFunction& g,
                                   const LorentzParams& params, const std::optional<PLProfile>& hstar) {
  require_same_domain(h, g, "hl_quantitative_gap");
  const GridDomain& dom = h.domain();
  const double cell = dom.cell_area();

  // μ_h(h(x)) / h^2 = number of cells with strictly larger h.
  std::vector<Index> order = dom.cells();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return h.at(a) > h.at(b); });
  const StepProfile g_star = decreasing_rearrangement(g);
  Eigen::ArrayXXd gh = Eigen::ArrayXXd::Zero(dom.nx(), dom.ny());
  std::size_t first_of_group = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && h.at(order[k]) != h.at(order[k - 1])) first_of_group = k;
    gh.data()[order[k]] = g_star.values()(Index(first_of_group));
  }

  QuantitativeHL out{GridFunction(h.domain_ptr(), std::move(gh)), {}, 0.0, 0.0, 0.0, 0.0, 0.0};
  const PLProfile hs = hstar ? *hstar : piecewise_linearize(decreasing_rearrangement(h), profile_resolution(dom));
  out.lorentz = lorentz_norm(g_star, hs, params);

  const double m = params.m();
  std::vector<double> diff;
  diff.reserve(dom.cell_count());
  for (Index c : dom.cells()) diff.push_back(std::pow(std::abs(g.at(c) - out.g_h.at(c)), m));
  out.distance = std::pow(cell * exact_sum(diff), 1.0 / m);

  if (!out.lorentz.vacuous && out.lorentz.value > 0.0) {
    const double p = params.p, q = params.q;
    out.deficit_term = std::pow(out.lorentz.value, -q * p) * std::pow(out.distance, 1.0 + p * q) /
                       (std::pow(2.0, p + 1.0) * std::numbers::e * q);
  }
  const auto hv = h.interior_values(), gv = g.interior_values();
  out.lhs = cell * exact_dot(hv, gv) + out.deficit_term;
  out.rhs = hl_products(h, g).rhs;
  out.slack = out.rhs - out.lhs;
  return out;
}

// ---------------------------------------------------------------------------
// Pseudo-rearrangement

std::vector<Index> level_ordering(const GridFunction& u, const GridFunction& f) {
  require_same_domain(u, f, "level_ordering");
  std::vector<Index> order = u.domain().cells();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (u.at(a) != u.at(b)) return u.at(a) > u.at(b);
    return f.at(a) > f.at(b);
  });
  return order;
}

StepProfile pseudo_rearrangement(const GridFunction& u, const GridFunction& f) {
  const auto order = level_ordering(u, f);
  Eigen::VectorXd v(Index(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) v(Index(k)) = f.at(order[k]);
  return StepProfile::uniform(u.domain().cell_area(), std::move(v), Monotonicity::none);
}

GridFunction level_relabeling(const GridFunction& u, const GridFunction& f) {
  const auto order = level_ordering(u, f);
  const StepProfile f_inc = increasing_rearrangement(f);
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(u.domain().nx(), u.domain().ny());
  for (std::size_t k = 0; k < order.size(); ++k) out.data()[order[k]] = f_inc.values()(Index(k));
  return GridFunction(u.domain_ptr(), std::move(out));
}

GridFunction level_relabeling_decreasing(const GridFunction& u, const GridFunction& f) {
  require_same_domain(u, f, "level_relabeling_decreasing");
  std::vector<Index> order = u.domain().cells();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return u.at(a) > u.at(b); });
  const StepProfile f_star = decreasing_rearrangement(f);
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(u.domain().nx(), u.domain().ny());
  std::size_t first = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && u.at(order[k]) != u.at(order[k - 1])) first = k;
    out.data()[order[k]] = f_star.values()(Index(first));
  }
  return GridFunction(u.domain_ptr(), std::move(out));
}

}  // namespace hjsym
