#pragma once

#include "hjsym/profiles.hpp"

namespace hjsym {

/// Decreasing radial function on the centred ball of measure phi.back(), given by its
/// gradient magnitude phi as a function of s = omega_n r^n:
///   U(s) = (1/(n omega_n^{1/n})) ∫_s^{|Ω|} phi(t) t^{1/n - 1} dt.
/// Every accessor is a closed-form sum over the steps of phi.
class RadialSolution {
 public:
  RadialSolution(StepProfile phi, int n);

  int dimension() const { return n_; }
  double measure() const { return phi_.back(); }
  const StepProfile& phi() const { return phi_; }

  /// U(s); U(s) = U(0) for s < 0 and 0 for s >= |Ω|.
  double operator()(double s) const;
  double at_radius(double r) const;
  double radius(double s) const;
  /// U at every breakpoint of phi.
  const Eigen::VectorXd& breakpoint_values() const { return at_breaks_; }
  double max_value() const { return at_breaks_(0); }

  /// ||U||_1 = (1/(n omega_n^{1/n})) ∫ phi(t) t^{1/n} dt.
  double l1_norm() const;
  /// ∫_0^{|Ω|} U(s) ds integrated directly.
  double l1_norm_direct() const;
  /// ∫_{s0}^{s1} U(s) ds.
  double integral(double s0, double s1) const;

  /// ν(t) = |{U > t}|.
  double level_measure(double t) const;
  /// ∫_{t0}^{t1} ν(t) dt.
  double level_measure_integral(double t0, double t1) const;

 private:
  double primitive(double s) const;

  StepProfile phi_;
  int n_;
  double scale_;  // omega_n^{-1/n}
  Eigen::VectorXd at_breaks_;
  Eigen::VectorXd primitive_at_breaks_;
};

/// u^G from the increasing rearrangement f_* of the source.
RadialSolution solve_symmetrized(const StepProfile& f_star_increasing, int n = 2);

/// g of the pseudo-rearranged problem |grad g| = F(omega_n |x|^n). F need not be monotone.
RadialSolution solve_pseudo(const StepProfile& F, int n = 2);

/// |grad u#| as a function of s. Between consecutive nodes of the PL profile u# is taken
/// linear in the radius (linear in s^{1/n}), so the gradient is the constant
/// omega_n^{1/n} |Δw| / Δ(s^{1/n}) on every segment. Cone-shaped maxima and the boundary
/// layer are then resolved exactly, where interpolation linear in s is singular.
StepProfile gradient_profile(const PLProfile& u_star, int n = 2);

/// (u#)^G: the radial solution whose gradient is the increasing rearrangement of
/// gradient_profile(u_star).
RadialSolution solve_from_gradient_profile(const PLProfile& u_star, int n = 2);

/// ∫ |grad u#|^2 over the ball: ∫ gradient_profile(u_star)^2 ds.
double dirichlet_energy_radial(const PLProfile& u_star, int n = 2);


}  // namespace hjsym
