#include "doctest.h"
#include "support.hpp"

#include <numbers>

using namespace hjsym;

namespace {
constexpr double pi = std::numbers::pi;

StepProfile unit_phi(Index k = 1) {
  return StepProfile::uniform(pi / double(k), Eigen::VectorXd::Ones(k), Monotonicity::increasing);
}
}  // namespace

TEST_CASE("constant gradient on the unit disk is the cone") {
  const RadialSolution g(unit_phi(), 2);
  CHECK(g.measure() == doctest::Approx(pi));
  CHECK(g.max_value() == doctest::Approx(1.0));
  CHECK(g.at_radius(0.25) == doctest::Approx(0.75));
  CHECK(g.radius(pi / 4) == doctest::Approx(0.5));
  CHECK(g(pi) == 0.0);
  CHECK(g(-1.0) == g.max_value());
  CHECK(g.l1_norm() == doctest::Approx(pi / 3));
  CHECK(g.l1_norm_direct() == doctest::Approx(pi / 3));
  CHECK(g.level_measure(0.5) == doctest::Approx(pi / 4));
  // ∫_0^1 π (1 - t)^2 dt
  CHECK(g.level_measure_integral(0.0, 1.0) == doctest::Approx(pi / 3));
}

TEST_CASE("splitting phi does not change U") {
  const RadialSolution a(unit_phi(1), 2), b(unit_phi(7), 2);
  for (double s : {0.0, 0.3, 1.0, 2.5, 3.0}) CHECK(a(s) == doctest::Approx(b(s)));
  CHECK(a.integral(0.5, 2.0) == doctest::Approx(b.integral(0.5, 2.0)));
}

TEST_CASE("affine source has the closed form") {
  // phi at radius r is 1 + r, so U(r) = (1 - r) + (1 - r^2)/2
  const int K = 4000;
  Eigen::VectorXd v(K);
  for (int k = 0; k < K; ++k) {
    const double s = (k + 0.5) * pi / K;
    v(k) = 1 + std::sqrt(s / pi);
  }
  const RadialSolution g(StepProfile::uniform(pi / K, v, Monotonicity::increasing), 2);
  CHECK(g.at_radius(0.0) == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(g.at_radius(0.5) == doctest::Approx(0.5 + 0.375).epsilon(1e-4));
  CHECK(g.l1_norm() == doctest::Approx(2 * pi * (1.0 / 6 + 1.0 / 8)).epsilon(1e-4));
}

TEST_CASE("symmetrized and pseudo solutions") {
  auto d = test::unit_disk(32);
  const auto f = GridFunction::sample(d, [](const Vec2& x) { return 1 + x.norm(); });
  const auto uG = solve_symmetrized(increasing_rearrangement(f));
  CHECK(uG.measure() == doctest::Approx(d->measure()));
  const auto u = test::solve(f);
  const auto g = solve_pseudo(pseudo_rearrangement(u, f));
  CHECK(g.l1_norm() <= uG.l1_norm() + 1e-12);
}

TEST_CASE("gradient profile of a sampled cone is exact") {
  Eigen::VectorXd nodes = Eigen::VectorXd::LinSpaced(17, 0, pi);
  const auto cone = sample_profile([](double s) { return 1 - std::sqrt(s / pi); }, nodes);
  const auto grad = gradient_profile(cone);
  for (Index k = 0; k < grad.size(); ++k) CHECK(grad.values()(k) == doctest::Approx(1.0));
  CHECK(dirichlet_energy_radial(cone) == doctest::Approx(pi));
  CHECK(solve_from_gradient_profile(cone).max_value() == doctest::Approx(1.0));
}
