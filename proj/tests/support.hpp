#pragma once

#include "hjsym/harness.hpp"

namespace hjsym::test {

inline std::shared_ptr<const GridDomain> domain(Shape shape, int N, Vec2 center = Vec2::Zero()) {
  ShapeSpec s;
  s.shape = std::move(shape);
  s.spacing = 1.0 / N;
  s.center = center;
  return std::make_shared<const GridDomain>(rasterize(s));
}

inline std::shared_ptr<const GridDomain> unit_square(int N) { return domain(Rectangle{1, 1}, N, Vec2(0.5, 0.5)); }
inline std::shared_ptr<const GridDomain> unit_disk(int N) { return domain(Disk{1}, N); }

inline GridFunction constant(const std::shared_ptr<const GridDomain>& d, double c) {
  return GridFunction::sample(d, [c](const Vec2&) { return c; });
}

inline GridFunction solve(const GridFunction& f) { return solve_eikonal(f, f.min_interior()).u; }

/// Distance to the boundary of the unit square [0,1]^2.
inline GridFunction tent(const std::shared_ptr<const GridDomain>& d) {
  return GridFunction::sample(d, [](const Vec2& x) {
    return std::min({x.x(), 1.0 - x.x(), x.y(), 1.0 - x.y()});
  });
}

}  // namespace hjsym::test
