// Randomized properties over shapes and sources drawn from a fixed seed.
#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <random>

using namespace hjsym;

namespace {

struct Case {
  std::string label;
  ExperimentConfig config;
};

std::vector<Case> random_cases(unsigned seed, int count) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Case> out;
  for (int k = 0; k < count; ++k) {
    ExperimentConfig c;
    c.shape.spacing = 1.0 / 32;
    switch (k % 4) {
      case 0: c.shape.shape = Ellipse{1 + U(rng), 0.5 + 0.5 * U(rng)}; break;
      case 1: c.shape.shape = PerturbedDisk{1, 0.2 * U(rng), 2 + int(4 * U(rng))}; break;
      case 2: c.shape.shape = Rectangle{0.5 + U(rng), 0.5 + U(rng)}; break;
      default: c.shape.shape = TwoDisks{0.3 + 0.4 * U(rng), 0.3 + 0.4 * U(rng), 0.1 + U(rng)}; break;
    }
    c.shape.center = Vec2(U(rng) - 0.5, U(rng) - 0.5);
    c.shape.rotation = 3 * U(rng);
    switch (k % 3) {
      case 0: c.source = ConstSource{0.5 + 2 * U(rng)}; break;
      case 1: c.source = LinearSource{0.3 * (U(rng) - 0.5), 0.3 * (U(rng) - 0.5), 1.5}; break;
      default: c.source = RadialAffineSource{1, U(rng) - 0.5}; break;
    }
    c.name = "random_" + std::to_string(seed) + "_" + std::to_string(k);
    out.push_back({c.name + " " + shape_json(c.shape) + " " + source_json(c.source), c});
  }
  return out;
}

}  // namespace

TEST_CASE("exact_sum is invariant under permutation") {
  std::mt19937 rng(7);
  std::lognormal_distribution<double> L(0.0, 6.0);
  std::vector<double> v(5000);
  for (auto& x : v) x = (rng() & 1 ? 1 : -1) * L(rng);
  const double s = exact_sum(v);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(v.begin(), v.end(), rng);
    CHECK(exact_sum(v) == s);
  }
}

TEST_CASE("equimeasurability and Hardy-Littlewood on random problems") {
  for (const auto& rc : random_cases(11, 12)) {
    CAPTURE(rc.label);
    const auto e = prepare(rc.config);
    const auto& u = e.solution.u;
    const auto us = decreasing_rearrangement(u);
    CHECK(us.integral() == u.integral());
    CHECK(us.lp_norm(2) == u.lp_norm(2));
    CHECK(us.max_value() == u.max_abs());
    const auto fi = increasing_rearrangement(e.f);
    CHECK(fi.integral() == e.f.integral());
    const auto hl = hl_products(u, e.f);
    CHECK(hl.lhs <= hl.rhs);
  }
}

TEST_CASE("solver scales with the source and is monotone in it") {
  for (const auto& rc : random_cases(23, 8)) {
    CAPTURE(rc.label);
    const auto e = prepare(rc.config);
    const auto twice = GridFunction(e.domain, 2.0 * e.f.values());
    const auto u2 = test::solve(twice);
    CHECK((u2.values() == 2.0 * e.solution.u.values()).all());
    const auto bigger = GridFunction::sample(e.domain, [&](const Vec2& x) {
      return source_function(rc.config.source, rc.config.shape)(x) + 0.1;
    });
    const auto ub = test::solve(bigger);
    for (Index c : e.domain->cells()) CHECK(ub.at(c) >= e.solution.u.at(c));
  }
}

TEST_CASE("deficit and sandwich hold on random problems") {
  for (const auto& rc : random_cases(37, 8)) {
    CAPTURE(rc.label);
    const auto e = prepare(rc.config);
    const double tol = tolerance(*e.domain, e.f.max_interior(), rc.config.constants.c_tol);
    CHECK(primary_deficit(e.solution.u, e.f) >= -tol);
    const auto s = sandwich_check(e.solution.u, e.f);
    CHECK(s.lower_margin() >= -tol);
    CHECK(s.upper_margin() >= -tol);
  }
}

TEST_CASE("radial solutions are decreasing with consistent integrals") {
  for (const auto& rc : random_cases(41, 6)) {
    CAPTURE(rc.label);
    const auto e = prepare(rc.config);
    const auto uG = solve_symmetrized(increasing_rearrangement(e.f));
    const auto& b = uG.breakpoint_values();
    for (Index k = 1; k < b.size(); ++k) CHECK(b(k) <= b(k - 1));
    CHECK(uG.l1_norm() == doctest::Approx(uG.l1_norm_direct()).epsilon(1e-12));
  }
}

TEST_CASE("report rows pass and rescaling identities are tight") {
  for (const auto& rc : random_cases(53, 4)) {
    CAPTURE(rc.label);
    const auto r = report(prepare(rc.config));
    for (const auto& row : r.rows) {
      CAPTURE(row.name);
      if (row.kind == RowKind::enforced) CHECK(row.status != RowStatus::fail);
      if (row.name.rfind("rescale_", 0) == 0) CHECK(std::abs(row.lhs - row.rhs) <= 1e-10 * std::max(1.0, std::abs(row.rhs)));
    }
  }
}

TEST_CASE("asymmetry is bounded and translation invariant on the lattice") {
  for (const auto& rc : random_cases(61, 6)) {
    CAPTURE(rc.label);
    auto shifted = rc.config;
    shifted.shape.center += Vec2(3, -2) * shifted.shape.spacing;
    const auto a = fraenkel_asymmetry(rasterize(rc.config.shape));
    const auto b = fraenkel_asymmetry(rasterize(shifted.shape));
    CHECK(a.alpha >= 0.0);
    CHECK(a.alpha <= 2.0);
    CHECK(b.alpha == doctest::Approx(a.alpha).epsilon(0.02));
  }
}
