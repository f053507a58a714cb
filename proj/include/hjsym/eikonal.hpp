#pragma once

#include "hjsym/geometry.hpp"

namespace hjsym {

struct EikonalStats {
  std::size_t seeds = 0;
  std::size_t accepted = 0;
  std::size_t pushes = 0;
  std::size_t max_queue = 0;
};

struct EikonalSolution {
  GridFunction u;
  /// |upwind gradient of u| - f per interior cell.
  GridFunction residual;
  /// Interior cells with an exterior 4-neighbour; u = (h/2) f there.
  GridDomain::Mask seeds;
  EikonalStats stats;
};

/// Maximal solution of |grad u| = f, u = 0 on the boundary, by fast marching with the
/// first-order upwind quadratic. Queue ties are broken by linear cell index.
///
/// Throws PreconditionError when f < m (or m <= 0) on some interior cell and SolverError
/// when an interior cell is never reached.
EikonalSolution solve_eikonal(const GridFunction& f, double m);

/// sqrt(a^2 + b^2) with a = max(u - u_W, u - u_E, 0)/h and b likewise in y; exterior
/// neighbours count as 0.
GridFunction upwind_gradient_norm(const GridFunction& u);

}  // namespace hjsym
