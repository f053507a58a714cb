#include "doctest.h"
#include "support.hpp"

#include <numbers>

using namespace hjsym;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("tolerance model") {
  auto d = test::unit_square(64);
  CHECK(tolerance(*d, 2.0, 5.0) == doctest::Approx(5.0 / 64 * (1 + 2 * std::sqrt(2.0))));
}

TEST_CASE("disk with unit source has a small deficit") {
  auto d = test::unit_disk(64);
  const auto f = test::constant(d, 1.0);
  const auto u = test::solve(f);
  const double eps = primary_deficit(u, f);
  CHECK(eps >= -tolerance(*d, 1, 5));
  CHECK(std::abs(eps) < 0.02);
  const auto s = sandwich_check(u, f);
  CHECK(s.uG == doctest::Approx(pi / 3).epsilon(0.01));
  CHECK(s.lower_margin() > -0.01);
  CHECK(s.upper_margin() > -0.01);
}

TEST_CASE("normalization rescales deficits") {
  auto d = test::domain(Rectangle{2, 1}, 32, Vec2(1, 0.5));
  const auto f = GridFunction::sample(d, [](const Vec2& x) { return 2 + x.x(); });
  const auto u = test::solve(f);
  const auto np = normalize(u, f, f.min_interior());
  CHECK(np.measure == doctest::Approx(2.0));
  CHECK(np.f_sup == doctest::Approx(f.max_interior()));
  CHECK(np.u.domain().measure() == doctest::Approx(1.0));
  CHECK(np.f.max_interior() == doctest::Approx(1.0));
  const double lhs = primary_deficit(np.u, np.f);
  const double rhs = primary_deficit(u, f) * np.deficit_scale();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  const auto back = np.original_u();
  for (Index c : d->cells()) CHECK(back.at(c) == doctest::Approx(u.at(c)).epsilon(1e-12));
}

TEST_CASE("distribution integral") {
  auto d = test::unit_square(16);
  const auto u = test::tent(d);
  CHECK(distribution_integral(u, 0, 1) == doctest::Approx(u.integral()));
  CHECK(distribution_integral(u, 1, 2) == 0.0);
}

TEST_CASE("translation of a centred radial solution is small") {
  auto d = test::unit_disk(64);
  const auto u = test::solve(test::constant(d, 1.0));
  const auto t = translation_infimum(u, decreasing_rearrangement(u));
  CHECK(t.T < 0.01);
  CHECK(t.center.norm() < 0.05);
  CHECK(translation_objective(u, decreasing_rearrangement(u), Vec2(0.3, 0)) > t.T);
}

TEST_CASE("flat fractions") {
  auto d = test::unit_square(32);
  const auto f = test::constant(d, 1.0);
  const auto u = test::solve(f);
  CHECK(flat_source_fraction(u, f, 0.5) == 0.0);
  CHECK(flat_source_fraction(u, f, 2.0) > 0.9);
  const auto pl = solution_profile(decreasing_rearrangement(u), profile_resolution(*d));
  CHECK(flat_gradient_fraction(pl, 1e-6) == 0.0);
}

TEST_CASE("s_omega on the square") {
  auto d = test::unit_square(128);
  const auto u = test::solve(test::constant(d, 1.0));
  const auto us = decreasing_rearrangement(u);
  const auto so = s_omega(us, solution_profile(us, profile_resolution(*d)), 0.1811);
  CHECK(so.interpolated == doctest::Approx(0.0113).epsilon(0.1));
  CHECK(so.step <= so.interpolated + 1.0 / 128);
}

TEST_CASE("level weight") {
  auto d = test::unit_square(8);
  const auto u = test::tent(d);
  const auto w = level_weight(u, test::constant(d, 1.0));
  const auto order = level_ordering(u, test::constant(d, 1.0));
  CHECK(w.at(order.front()) == doctest::Approx(std::sqrt(0.5 / 64)));
  CHECK(w.at(order.back()) == doctest::Approx(std::sqrt((64 - 0.5) / 64)));
}

TEST_CASE("report on the unit square") {
  auto d = test::unit_square(64);
  const auto f = test::constant(d, 1.0);
  const auto u = test::solve(f);
  const auto r = build_report(u, f, 1.0, {"sq"});
  CHECK_FALSE(r.failed());
  CHECK(r.quantity("eps") == doctest::Approx(1 / (3 * std::sqrt(pi)) - 1.0 / 6).epsilon(0.03));
  REQUIRE(r.row("gn_inequality") != nullptr);
  CHECK(r.row("gn_inequality")->status == RowStatus::pass);
  CHECK(r.row("no_such_row") == nullptr);
  CHECK(std::is_sorted(r.rows.begin(), r.rows.end(), [](auto& a, auto& b) { return a.name < b.name; }));
  CHECK(to_string(RowStatus::vacuous) == "vacuous");
  CHECK(to_string(RowKind::advisory) == "advisory");
}
