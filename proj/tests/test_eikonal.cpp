#include "doctest.h"
#include "support.hpp"

using namespace hjsym;

TEST_CASE("disk with unit source approximates the distance") {
  auto d = test::unit_disk(64);
  const auto sol = solve_eikonal(test::constant(d, 1.0), 1.0);
  double err = 0;
  for (Index c : d->cells()) err = std::max(err, std::abs(sol.u.at(c) - (1 - d->center(c).norm())));
  CHECK(err < 0.03);
  CHECK(sol.stats.accepted == d->cell_count());
  CHECK(sol.stats.seeds > 0);
}

TEST_CASE("boundary cells are seeded at h f / 2") {
  auto d = test::unit_square(16);
  const auto f = test::constant(d, 2.0);
  const auto sol = solve_eikonal(f, 2.0);
  Index i = 0;
  const Index j = d->ny() / 2;
  while (!d->inside(i, j)) ++i;  // first column of the square
  REQUIRE(sol.seeds(i, j));
  CHECK(sol.u(i, j) == doctest::Approx(0.5 / 16 * 2.0));
  CHECK(sol.stats.seeds == 4u * 16u - 4u);
}

TEST_CASE("square solution is within h below the boundary distance") {
  // two-sided updates on the diagonals undershoot the distance by at most h(1 - 1/sqrt 2) per step
  const int N = 32;
  auto d = test::unit_square(N);
  const auto u = test::solve(test::constant(d, 1.0));
  const auto dist = test::tent(d);
  for (Index c : d->cells()) {
    CHECK(u.at(c) <= dist.at(c) + 1e-12);
    CHECK(u.at(c) >= dist.at(c) - 1.0 / N);
    const Vec2 x = d->center(c);
    if (std::abs(x.x() - 0.5) < 1e-9 || std::abs(x.y() - 0.5) < 1e-9) continue;
    const double off = std::min(std::abs(x.x() - x.y()), std::abs(x.x() + x.y() - 1));
    if (off > 0.25) CHECK(u.at(c) == doctest::Approx(dist.at(c)).epsilon(1e-12));
  }
}

TEST_CASE("residual vanishes away from seeds") {
  auto d = test::unit_disk(32);
  const auto f = GridFunction::sample(d, [](const Vec2& x) { return 1 + x.norm(); });
  const auto sol = solve_eikonal(f, f.min_interior());
  for (Index c : d->cells()) {
    const Index i = c % d->nx(), j = c / d->nx();
    if (!sol.seeds(i, j)) CHECK(std::abs(sol.residual(i, j)) < 1e-9);
  }
}

TEST_CASE("comparison principle") {
  auto d = test::domain(Ellipse{1.5, 2.0 / 3}, 32);
  const auto f1 = GridFunction::sample(d, [](const Vec2& x) { return 1 + 0.2 * x.x() * x.x(); });
  const auto f2 = GridFunction::sample(d, [](const Vec2& x) { return 1.5 + 0.2 * x.x() * x.x(); });
  const auto u1 = test::solve(f1), u2 = test::solve(f2);
  for (Index c : d->cells()) CHECK(u1.at(c) <= u2.at(c));
}

TEST_CASE("preconditions") {
  auto d = test::unit_square(8);
  CHECK_THROWS_AS(solve_eikonal(test::constant(d, 0.5), 1.0), PreconditionError);
  CHECK_THROWS_AS(solve_eikonal(test::constant(d, 1.0), 0.0), PreconditionError);
}

TEST_CASE("upwind gradient of a linear function") {
  auto d = test::unit_square(16);
  const auto u = GridFunction::sample(d, [](const Vec2& x) { return 3 * x.x() + 4 * x.y() + 10; });
  const auto g = upwind_gradient_norm(u);
  const Index i = Index(std::floor((0.5 - d->origin().x()) * 16)), j = Index(std::floor((0.5 - d->origin().y()) * 16));
  REQUIRE(d->inside(i - 1, j - 1));
  REQUIRE(d->inside(i + 1, j + 1));
  CHECK(g(i, j) == doctest::Approx(5.0));
}

TEST_CASE("solve is deterministic") {
  auto d = test::domain(PerturbedDisk{1, 0.15, 2}, 32);
  const auto f = GridFunction::sample(d, [](const Vec2& x) { return 0.75 + 0.25 * x.x() * x.x(); });
  const auto a = test::solve(f), b = test::solve(f);
  CHECK((a.values() == b.values()).all());
}
