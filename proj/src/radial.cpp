#include "hjsym/radial.hpp"

namespace hjsym {

RadialSolution::RadialSolution(StepProfile phi, int n)
    : phi_(std::move(phi)), n_(n), scale_(std::pow(unit_ball_volume(n), -1.0 / n)) {
  if (n < 2) throw PreconditionError("dimension must be at least 2");
  if (phi_.front() != 0.0) throw PreconditionError("radial profile must start at s = 0");
  if (phi_.min_value() < 0.0) throw PreconditionError("radial gradient profile must be non-negative");

  const Index K = phi_.size();
  const double e = 1.0 / n, e1 = 1.0 + 1.0 / n;
  const auto& b = phi_.breaks();
  const auto& v = phi_.values();
  at_breaks_.resize(K + 1);
  at_breaks_(K) = 0.0;
  long double acc = 0.0L;
  for (Index k = K - 1; k >= 0; --k) {
    acc += (long double)(scale_ * v(k) * (std::pow(b(k + 1), e) - std::pow(b(k), e)));
    at_breaks_(k) = double(acc);
  }
  primitive_at_breaks_.resize(K + 1);
  primitive_at_breaks_(0) = 0.0;
  long double p = 0.0L;
  for (Index k = 0; k < K; ++k) {
    const double lo = b(k), hi = b(k + 1);
    const double piece = (hi - lo) * (at_breaks_(k + 1) + scale_ * v(k) * std::pow(hi, e)) -
                         scale_ * v(k) / e1 * (std::pow(hi, e1) - std::pow(lo, e1));
    p += piece;
    primitive_at_breaks_(k + 1) = double(p);
  }
}

double RadialSolution::operator()(double s) const {
  const Index k = phi_.interval(s);
  if (k < 0) return at_breaks_(0);
  if (k >= phi_.size()) return 0.0;
  const double hi = phi_.breaks()(k + 1);
  return at_breaks_(k + 1) + scale_ * phi_.values()(k) * (std::pow(hi, 1.0 / n_) - std::pow(s, 1.0 / n_));
}

double RadialSolution::radius(double s) const { return std::pow(s / unit_ball_volume(n_), 1.0 / n_); }

double RadialSolution::at_radius(double r) const { return (*this)(unit_ball_volume(n_) * std::pow(r, n_)); }

double RadialSolution::l1_norm() const {
  const double e1 = 1.0 + 1.0 / n_;
  const auto& b = phi_.breaks();
  std::vector<double> terms(static_cast<std::size_t>(phi_.size()));
  for (Index k = 0; k < phi_.size(); ++k)
    terms[std::size_t(k)] = phi_.values()(k) * (std::pow(b(k + 1), e1) - std::pow(b(k), e1));
  return exact_sum(terms) / (isoperimetric_constant(n_) * e1);
}

double RadialSolution::l1_norm_direct() const {
  const double e = 1.0 / n_, e1 = 1.0 + 1.0 / n_;
  const auto& b = phi_.breaks();
  std::vector<double> terms;
  terms.reserve(std::size_t(2 * phi_.size()));
  for (Index k = 0; k < phi_.size(); ++k) {
    const double lo = b(k), hi = b(k + 1), c = scale_ * phi_.values()(k);
    terms.push_back((hi - lo) * (at_breaks_(k + 1) + c * std::pow(hi, e)));
    terms.push_back(-c / e1 * (std::pow(hi, e1) - std::pow(lo, e1)));
  }
  return exact_sum(terms);
}

double RadialSolution::primitive(double s) const {
  if (s <= 0.0) return 0.0;
  const Index k = phi_.interval(s);
  if (k >= phi_.size()) return primitive_at_breaks_(phi_.size());
  const double e = 1.0 / n_, e1 = 1.0 + 1.0 / n_;
  const double lo = phi_.breaks()(k), hi = phi_.breaks()(k + 1), c = scale_ * phi_.values()(k);
  return primitive_at_breaks_(k) + (s - lo) * (at_breaks_(k + 1) + c * std::pow(hi, e)) -
         c / e1 * (std::pow(s, e1) - std::pow(lo, e1));
}

double RadialSolution::integral(double s0, double s1) const { return primitive(s1) - primitive(s0); }

double RadialSolution::level_measure(double t) const {
  if (t < 0.0) return measure();
  if (t >= at_breaks_(0)) return 0.0;
  // First breakpoint with U <= t; U is non-increasing along the breakpoints.
  const Index K = phi_.size();
  Index lo = 0, hi = K;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    if (at_breaks_(mid) > t) lo = mid;
    else hi = mid;
  }
  // U(b_lo) > t >= U(b_hi), hi = lo + 1.
  const double b = phi_.breaks()(hi), c = scale_ * phi_.values()(lo);
  if (c <= 0.0) return b;
  const double root = std::pow(b, 1.0 / n_) - (t - at_breaks_(hi)) / c;
  return std::clamp(std::pow(std::max(root, 0.0), double(n_)), phi_.breaks()(lo), b);
}

double RadialSolution::level_measure_integral(double t0, double t1) const {
  if (t1 <= t0) return 0.0;
  // ∫_{t0}^{t1} ν = ∫ clamp(U(s) - t0, 0, t1 - t0) ds.
  const double s1 = level_measure(t1), s0 = level_measure(t0);
  return (t1 - t0) * s1 + (integral(s1, s0) - t0 * (s0 - s1));
}

RadialSolution solve_symmetrized(const StepProfile& f_star_increasing, int n) {
  if (f_star_increasing.monotonicity() != Monotonicity::increasing)
    throw PreconditionError("solve_symmetrized expects an increasing profile");
  return RadialSolution(f_star_increasing, n);
}

RadialSolution solve_pseudo(const StepProfile& F, int n) {
  if (!(F.min_value() > 0.0)) throw PreconditionError("pseudo-rearrangement must be positive");
  return RadialSolution(F, n);
}

StepProfile gradient_profile(const PLProfile& u_star, int n) {
  if (!u_star.is_decreasing()) throw PreconditionError("gradient profile needs a decreasing u*");
  const double c = std::pow(unit_ball_volume(n), 1.0 / n);
  const auto& s = u_star.nodes();
  const auto& w = u_star.node_values();
  Eigen::VectorXd values(u_star.segments());
  for (Index k = 0; k < u_star.segments(); ++k)
    values(k) = c * (w(k) - w(k + 1)) / (std::pow(s(k + 1), 1.0 / n) - std::pow(s(k), 1.0 / n));
  return StepProfile(s, std::move(values), Monotonicity::none);
}

RadialSolution solve_from_gradient_profile(const PLProfile& u_star, int n) {
  return RadialSolution(rearrange(gradient_profile(u_star, n), Monotonicity::increasing), n);
}

double dirichlet_energy_radial(const PLProfile& u_star, int n) {
  const StepProfile phi = gradient_profile(u_star, n);
  std::vector<double> terms(static_cast<std::size_t>(phi.size()));
  for (Index k = 0; k < phi.size(); ++k) terms[std::size_t(k)] = phi.width(k) * phi.values()(k) * phi.values()(k);
  return exact_sum(terms);
}

}  // namespace hjsym
