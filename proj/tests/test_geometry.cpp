#include "doctest.h"
#include "support.hpp"

#include <numbers>

using namespace hjsym;
using hjsym::test::domain;

TEST_CASE("exact_sum is order independent") {
  std::vector<double> a{1e16, 1.0, -1e16, 3.0, 0.1, 0.2};
  std::vector<double> b{0.2, -1e16, 3.0, 1e16, 0.1, 1.0};
  CHECK(exact_sum(a) == exact_sum(b));
  CHECK(exact_sum(a) == doctest::Approx(4.3));
  CHECK(exact_dot(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 11.0);
}

TEST_CASE("unit ball constants") {
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3));
  CHECK(isoperimetric_constant(2) == doctest::Approx(2 * std::sqrt(std::numbers::pi)));
}

TEST_CASE("rasterized square is exact") {
  auto d = test::unit_square(64);
  CHECK(d->cell_count() == 64u * 64u);
  CHECK(d->measure() == doctest::Approx(1.0));
  CHECK(d->centroid().x() == doctest::Approx(0.5));
  CHECK(d->diameter() == doctest::Approx(std::sqrt(2.0)));
  // padding ring
  CHECK_FALSE(d->mask().row(0).any());
  CHECK_FALSE(d->mask().col(0).any());
}

TEST_CASE("disk raster measure converges") {
  auto d = test::unit_disk(128);
  CHECK(d->measure() == doctest::Approx(std::numbers::pi).epsilon(2e-3));
  CHECK(analytic_area({Disk{1}, 1.0 / 128}) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("shape containment") {
  ShapeSpec two{TwoDisks{0.5, 0.25, 0.5}, 1.0 / 32};
  CHECK(contains(two, Vec2(-0.75, 0)));
  CHECK_FALSE(contains(two, Vec2(0, 0)));
  ShapeSpec l{Polygon{{Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(1, 1), Vec2(1, 2), Vec2(0, 2)}}, 1.0 / 32};
  CHECK(contains(l, Vec2(0.5, 1.5)));
  CHECK_FALSE(contains(l, Vec2(1.5, 1.5)));
  CHECK(analytic_area(l) == doctest::Approx(3.0));
  ShapeSpec rot{Rectangle{2, 0.5}, 1.0 / 32, Vec2::Zero(), std::numbers::pi / 2};
  CHECK(contains(rot, Vec2(0, 0.9)));
  CHECK_FALSE(contains(rot, Vec2(0.9, 0)));
}

TEST_CASE("empty raster is rejected") {
  ShapeSpec tiny{Disk{1e-4}, 1.0 / 16, Vec2(0.5 / 16, 0.5 / 16)};
  tiny.center = Vec2(0.013, 0.011);
  CHECK_THROWS_AS(rasterize(tiny), DegenerateDomainError);
}

TEST_CASE("perimeter of square and disk") {
  CHECK(domain_perimeter(*test::unit_square(128)) == doctest::Approx(4.0).epsilon(0.02));
  CHECK(domain_perimeter(*test::unit_disk(128)) == doctest::Approx(2 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("contour length of a linear field") {
  Eigen::ArrayXXd field(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) field(i, j) = double(i);
  // vertical line through 9 cell rows of centres
  CHECK(contour_length(field, 4.5, 0.1) == doctest::Approx(0.9));
}

TEST_CASE("ball overlap") {
  auto d = test::unit_disk(64);
  const Ball b{Vec2::Zero(), 1.0};
  CHECK(ball_overlap(*d, b) == doctest::Approx(std::numbers::pi).epsilon(5e-3));
  CHECK(ball_overlap(*d, Ball{Vec2(5, 5), 0.5}) == 0.0);
  CHECK(symmetric_difference(*d, b) < 0.05);
  Index total = 0;
  for (Index j = 0; j < d->ny(); ++j) total += d->count_in_row(j, -5, d->nx() + 5);
  CHECK(total == Index(d->cell_count()));
  CHECK(d->count_in_row(d->ny() / 2, 0, 0) == 0);
}

TEST_CASE("Fraenkel asymmetry of square and disk") {
  const auto sq = fraenkel_asymmetry(*test::unit_square(128));
  CHECK(sq.alpha == doctest::Approx(0.1811).epsilon(0.02));
  CHECK(sq.ball.center.x() == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(fraenkel_asymmetry(*test::unit_disk(128)).alpha < 0.01);
  const auto two = fraenkel_asymmetry(*domain(TwoDisks{0.5, 0.5, 0.5}, 64));
  CHECK(two.alpha > 0.5);
}

TEST_CASE("isoperimetric deficit of a disk is small") {
  const auto r = isoperimetric_deficit(*test::unit_disk(128), 100.0);
  CHECK(r.slack > -0.05);
  CHECK(r.slack < 0.1);
}

TEST_CASE("superlevel sets and grid functions") {
  auto d = test::unit_square(16);
  auto u = test::tent(d);
  CHECK(u.max_interior() == doctest::Approx(0.5 - 0.5 / 16));
  CHECK(u.min_interior() == doctest::Approx(0.5 / 16));
  const auto s = superlevel_set(u, 0.25);
  CHECK(s.measure() < d->measure());
  CHECK(s.same_grid(*d));
  CHECK_THROWS_AS(superlevel_set(u, 10.0), DegenerateDomainError);
  CHECK(u.lp_norm(1) == doctest::Approx(u.integral()));
  CHECK(u.lp_norm(std::numeric_limits<double>::infinity()) == u.max_abs());
  auto other = test::unit_square(32);
  CHECK_THROWS_AS(require_same_domain(u, test::constant(other, 1), "t"), DomainMismatchError);
}

TEST_CASE("scaled domain") {
  auto d = test::unit_square(16);
  const auto big = d->scaled(2.0);
  CHECK(big.measure() == doctest::Approx(4.0));
  CHECK(big.cell_count() == d->cell_count());
}
