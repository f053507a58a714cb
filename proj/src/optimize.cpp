#include "hjsym/optimize.hpp"

#include <array>

namespace hjsym {

CenterSearchResult minimize_center(const std::function<double(const Vec2&)>& objective,
                                   const Vec2& seed, const CenterSearchOptions& options) {
  CenterSearchResult result;
  auto eval = [&](const Vec2& x) {
    ++result.evaluations;
    return objective(x);
  };

  result.center = seed;
  result.value = eval(seed);
  result.seed_value = result.value;

  if (options.lattice_step > 0.0) {
    const int k = options.lattice_radius;
    for (int j = -k; j <= k; ++j) {
      for (int i = -k; i <= k; ++i) {
        if (i == 0 && j == 0) continue;
        const Vec2 x = seed + options.lattice_step * Vec2(i, j);
        const double v = eval(x);
        if (v < result.value) {
          result.value = v;
          result.center = x;
        }
      }
    }
  }

  double size = options.simplex_size > 0.0 ? options.simplex_size : options.lattice_step;
  if (size <= 0.0 || options.max_iterations <= 0) return result;

  std::array<Vec2, 3> pts = {result.center, result.center + Vec2(size, 0.0),
                             result.center + Vec2(0.0, size)};
  std::array<double, 3> val = {result.value, eval(pts[1]), eval(pts[2])};

  auto order = [&] {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2 - a; ++b)
        if (val[b + 1] < val[b]) {
          std::swap(val[b], val[b + 1]);
          std::swap(pts[b], pts[b + 1]);
        }
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    order();
    const double diam = std::max({(pts[0] - pts[1]).norm(), (pts[0] - pts[2]).norm(),
                                  (pts[1] - pts[2]).norm()});
    if (diam < options.tolerance) break;

    const Vec2 centroid = 0.5 * (pts[0] + pts[1]);
    const Vec2 reflected = centroid + (centroid - pts[2]);
    const double fr = eval(reflected);
    if (fr < val[0]) {
      const Vec2 expanded = centroid + 2.0 * (centroid - pts[2]);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[2] = expanded;
        val[2] = fe;
      } else {
        pts[2] = reflected;
        val[2] = fr;
      }
      continue;
    }
    if (fr < val[1]) {
      pts[2] = reflected;
      val[2] = fr;
      continue;
    }
    const bool outside = fr < val[2];
    const Vec2 contracted =
        outside ? centroid + 0.5 * (reflected - centroid) : centroid + 0.5 * (pts[2] - centroid);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : val[2])) {
      pts[2] = contracted;
      val[2] = fc;
      continue;
    }
    for (int v = 1; v < 3; ++v) {
      pts[v] = pts[0] + 0.5 * (pts[v] - pts[0]);
      val[v] = eval(pts[v]);
    }
  }
  order();
  if (val[0] < result.value) {
    result.value = val[0];
    result.center = pts[0];
  }
  return result;
}

}  // namespace hjsym
