#pragma once

#include "hjsym/geometry.hpp"

#include <limits>
#include <optional>

namespace hjsym {

enum class Monotonicity { decreasing, increasing, none };

/// Right-continuous piecewise-constant function: value v[k] on [s[k], s[k+1]).
/// Zero beyond the last breakpoint.
class StepProfile {
 public:
  StepProfile() = default;
  StepProfile(Eigen::VectorXd breaks, Eigen::VectorXd values, Monotonicity monotonicity);

  /// Intervals of common width; breakpoints are k * width (no accumulated rounding).
  static StepProfile uniform(double width, Eigen::VectorXd values, Monotonicity monotonicity);

  Index size() const { return values_.size(); }
  const Eigen::VectorXd& breaks() const { return breaks_; }
  const Eigen::VectorXd& values() const { return values_; }
  Monotonicity monotonicity() const { return monotonicity_; }
  double front() const { return breaks_(0); }
  double back() const { return breaks_(breaks_.size() - 1); }
  double length() const { return back() - front(); }
  double width(Index k) const { return breaks_(k + 1) - breaks_(k); }

  /// Interval containing s, or -1 before the first / size() at or past the last breakpoint.
  Index interval(double s) const;
  double operator()(double s) const;

  double integral() const;
  /// (∫ |v|^p)^{1/p}; p = inf gives the max.
  double lp_norm(double p) const;
  double max_value() const { return values_.maxCoeff(); }
  double min_value() const { return values_.minCoeff(); }

  /// Adjacent intervals with equal values joined.
  StepProfile merged() const;

 private:
  Eigen::VectorXd breaks_;
  Eigen::VectorXd values_;
  Monotonicity monotonicity_ = Monotonicity::none;
};

/// Continuous piecewise-linear function through nodes (s_i, w_i); constant beyond the ends.
class PLProfile {
 public:
  PLProfile() = default;
  PLProfile(Eigen::VectorXd s, Eigen::VectorXd w);

  Index segments() const { return s_.size() - 1; }
  const Eigen::VectorXd& nodes() const { return s_; }
  const Eigen::VectorXd& node_values() const { return w_; }
  double slope(Index k) const { return (w_(k + 1) - w_(k)) / (s_(k + 1) - s_(k)); }
  double operator()(double s) const;
  bool is_decreasing() const;
  bool is_increasing() const;

 private:
  Eigen::VectorXd s_;
  Eigen::VectorXd w_;
};

/// t ↦ μ(t) = |{|u| > t}|, a decreasing step profile over t ∈ [0, max|u|].
StepProfile distribution_function(const GridFunction& u);

/// u*: |u| sorted descending (ties by cell index) on intervals of width h^2.
StepProfile decreasing_rearrangement(const GridFunction& u);

/// f_*(s) = f*(|Ω| - s).
StepProfile increasing_rearrangement(const GridFunction& f);

/// Monotone rearrangement of a general step profile by sorting its intervals.
StepProfile rearrange(const StepProfile& p, Monotonicity order);

/// Value of the radial field x ↦ profile(ω_n |x|^n); zero outside the ball of measure profile.back().
double eval_schwarz(const StepProfile& profile, const Vec2& x, int n = 2);

/// Monotone interpolant through interval midpoints of the tie-merged profile, extended
/// linearly to the ends and clamped to the value range. With min_width > 0, consecutive
/// merged intervals are first grouped until each group spans at least min_width, and the
/// node value is the group's mean. A given front value replaces the extension at the left
/// end, and a given floor replaces the profile minimum as the lower clamp. With a front
/// value the first node sits at `front_node` of the first group instead of its midpoint.
PLProfile piecewise_linearize(const StepProfile& p, double min_width = 0.0,
                              std::optional<double> front_value = std::nullopt,
                              std::optional<double> floor = std::nullopt, double front_node = 0.5);

/// PL profile of a solution's u*: u*(0) = max|u| is kept as the left node and the right
/// end extends linearly down to at most 0.
PLProfile solution_profile(const StepProfile& u_star, double min_width);

/// Group width used for gradient-level quantities of grid profiles: 4 h |Ω|^{1/2}.
double profile_resolution(const GridDomain& domain);

/// PL interpolant of a function sampled at the given nodes.
PLProfile sample_profile(const std::function<double(double)>& fn, const Eigen::VectorXd& nodes);

/// θ_p(s) built from the slopes of a decreasing PL profile h*. Returns +inf on plateaus.
double theta_p(const PLProfile& hstar, double p, double s);

struct LorentzParams {
  double p = 1.0;
  double q = 1.0;
  double m() const { return (q * p + 1.0) / (p + 1.0); }
};

struct LorentzNorm {
  double value = 0.0;
  bool vacuous = false;  // θ_p infinite somewhere on [0, |Ω|)
};

/// Λ^q_p norm of g* weighted by θ_p of h*.
LorentzNorm lorentz_norm(const StepProfile& g_star, const PLProfile& hstar, const LorentzParams& params);

struct HardyLittlewood {
  double lhs = 0.0;  // ∫ |h g|
  double rhs = 0.0;  // ∫ h* g*
};

HardyLittlewood hl_products(const GridFunction& h, const GridFunction& g);

struct QuantitativeHL {
  GridFunction g_h;
  LorentzNorm lorentz;
  double distance = 0.0;      // ||g - g_h||_{L^m}
  double deficit_term = 0.0;  // ||g||_Λ^{-qp} ||g - g_h||^{1+pq} / (2^{p+1} e q)
  double lhs = 0.0;           // ∫ h g + deficit_term
  double rhs = 0.0;           // ∫ h* g*
  double slack = 0.0;         // rhs - lhs
};

/// g_h(x) = g*(μ_h(h(x))) and the quantitative Hardy-Littlewood gap. When hstar is not
/// given it is the piecewise-linear h* at profile_resolution.
QuantitativeHL hl_quantitative_gap(const GridFunction& h, const GridFunction& g,
                                   const LorentzParams& params,
                                   const std::optional<PLProfile>& hstar = std::nullopt);

/// Cells ordered by u descending, ties by f descending, then by cell index. This realizes
/// the nested family D(s) following the superlevel sets of u.
std::vector<Index> level_ordering(const GridFunction& u, const GridFunction& f);

/// F: the k-th interval (width h^2) carries f at the k-th cell of level_ordering.
StepProfile pseudo_rearrangement(const GridFunction& u, const GridFunction& f);

/// Relabeling of f along level_ordering: the k-th cell receives the k-th smallest value
/// of f, so large values of f sit where u is small.
GridFunction level_relabeling(const GridFunction& u, const GridFunction& f);

/// Relabeling f*(μ(u(x))): largest values of f where u is largest.
GridFunction level_relabeling_decreasing(const GridFunction& u, const GridFunction& f);

}  // namespace hjsym
