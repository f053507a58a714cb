#pragma once

#include "hjsym/core.hpp"

#include <functional>

namespace hjsym {

struct CenterSearchOptions {
  double lattice_step = 0.0;  // 0 disables the lattice seed
  int lattice_radius = 8;     // (2k+1)^2 lattice points
  double simplex_size = 0.0;  // initial simplex edge; defaults to lattice_step
  double tolerance = 0.0;     // stop when the simplex diameter drops below this
  int max_iterations = 200;
};

struct CenterSearchResult {
  Vec2 center = Vec2::Zero();
  double value = 0.0;
  double seed_value = 0.0;
  int evaluations = 0;
};

/// Lattice scan around `seed` followed by Nelder-Mead refinement. Deterministic; the
/// returned value never exceeds the value at `seed`.
CenterSearchResult minimize_center(const std::function<double(const Vec2&)>& objective,
                                   const Vec2& seed, const CenterSearchOptions& options);

}  // namespace hjsym
