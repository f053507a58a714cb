#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjsym {

using Vec2 = Eigen::Vector2d;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Empty or zero-measure set where a positive-measure set is required.
class DegenerateDomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Volume of the unit ball of R^n.
template <typename Scalar = double>
Scalar unit_ball_volume(int n) {
  return std::pow(std::numbers::pi_v<Scalar>, Scalar(n) / 2) / std::tgamma(Scalar(n) / 2 + 1);
}

/// n * omega_n^{1/n}: the isoperimetric constant in P >= n omega_n^{1/n} |E|^{(n-1)/n}.
template <typename Scalar = double>
Scalar isoperimetric_constant(int n) {
  return Scalar(n) * std::pow(unit_ball_volume<Scalar>(n), Scalar(1) / n);
}

/// Order-independent sum: terms are sorted and accumulated in quad precision, so
/// any permutation of the same multiset yields the same double.
double exact_sum(std::span<const double> terms);

/// Order-independent dot product; each product is formed exactly in quad precision.
double exact_dot(std::span<const double> a, std::span<const double> b);

}  // namespace hjsym
