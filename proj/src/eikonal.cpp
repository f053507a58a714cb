#include "hjsym/eikonal.hpp"

#include <limits>
#include <queue>
#include <sstream>

namespace hjsym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Larger root of (u-a)^2 + (u-b)^2 = (h f)^2, or the one-sided value when that root
/// does not exceed both neighbours.
double upwind_update(double a, double b, double hf) {
  if (a > b) std::swap(a, b);
  if (std::isinf(b) || b - a >= hf) return a + hf;
  const double d = 2.0 * hf * hf - (b - a) * (b - a);
  return 0.5 * (a + b + std::sqrt(d));
}

}  // namespace

EikonalSolution solve_eikonal(const GridFunction& f, double m) {
  const GridDomain& dom = f.domain();
  if (!(m > 0.0)) throw PreconditionError("lower bound m must be positive");
  for (Index c : dom.cells()) {
    if (!(f.at(c) >= m) || !std::isfinite(f.at(c))) {
      std::ostringstream msg;
      msg << "source value " << f.at(c) << " below m = " << m << " at cell " << c;
      throw PreconditionError(msg.str());
    }
  }

  const Index nx = dom.nx(), ny = dom.ny();
  const double h = dom.spacing();
  enum : unsigned char { far, trial, accepted };
  Eigen::ArrayXXd u = Eigen::ArrayXXd::Constant(nx, ny, kInf);
  Eigen::Array<unsigned char, Eigen::Dynamic, Eigen::Dynamic> state =
      Eigen::Array<unsigned char, Eigen::Dynamic, Eigen::Dynamic>::Constant(nx, ny, far);
  GridDomain::Mask seeds = GridDomain::Mask::Constant(nx, ny, false);

  using Entry = std::pair<double, Index>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  EikonalStats stats;

  const Index di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
  for (Index c : dom.cells()) {
    const Index i = c % nx, j = c / nx;
    bool boundary = false;
    for (int k = 0; k < 4; ++k) boundary = boundary || !dom.inside(i + di[k], j + dj[k]);
    if (!boundary) continue;
    seeds(i, j) = true;
    u(i, j) = 0.5 * h * f(i, j);
    state(i, j) = trial;
    queue.emplace(u(i, j), c);
    ++stats.seeds;
    ++stats.pushes;
  }

  while (!queue.empty()) {
    stats.max_queue = std::max(stats.max_queue, queue.size());
    const auto [value, c] = queue.top();
    queue.pop();
    const Index i = c % nx, j = c / nx;
    if (state(i, j) == accepted || value != u(i, j)) continue;
    state(i, j) = accepted;
    ++stats.accepted;

    for (int k = 0; k < 4; ++k) {
      const Index ni = i + di[k], nj = j + dj[k];
      if (!dom.inside(ni, nj) || state(ni, nj) == accepted || seeds(ni, nj)) continue;
      auto known = [&](Index a, Index b) {
        return dom.inside(a, b) && state(a, b) == accepted ? u(a, b) : kInf;
      };
      const double ax = std::min(known(ni - 1, nj), known(ni + 1, nj));
      const double ay = std::min(known(ni, nj - 1), known(ni, nj + 1));
      const double cand = upwind_update(ax, ay, h * f(ni, nj));
      if (cand < u(ni, nj)) {
        u(ni, nj) = cand;
        state(ni, nj) = trial;
        queue.emplace(cand, dom.linear(ni, nj));
        ++stats.pushes;
      }
    }
  }

  std::vector<Index> unreached;
  for (Index c : dom.cells())
    if (state.data()[c] != accepted) unreached.push_back(c);
  if (!unreached.empty()) {
    std::ostringstream msg;
    msg << unreached.size() << " interior cells unreachable from the boundary, first:";
    for (std::size_t k = 0; k < std::min<std::size_t>(unreached.size(), 8); ++k)
      msg << " (" << unreached[k] % nx << "," << unreached[k] / nx << ")";
    throw SolverError(msg.str());
  }

  for (Index k = 0; k < u.size(); ++k)
    if (!dom.mask().data()[k]) u.data()[k] = 0.0;

  GridFunction sol(f.domain_ptr(), std::move(u));
  GridFunction grad = upwind_gradient_norm(sol);
  GridFunction residual(f.domain_ptr(), grad.values() - f.values());
  return {std::move(sol), std::move(residual), std::move(seeds), stats};
}

GridFunction upwind_gradient_norm(const GridFunction& u) {
  const GridDomain& dom = u.domain();
  const double h = dom.spacing();
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(dom.nx(), dom.ny());
  auto val = [&](Index i, Index j) { return dom.inside(i, j) ? u(i, j) : 0.0; };
  for (Index c : dom.cells()) {
    const Index i = c % dom.nx(), j = c / dom.nx();
    const double v = u(i, j);
    const double a = std::max({v - val(i - 1, j), v - val(i + 1, j), 0.0}) / h;
    const double b = std::max({v - val(i, j - 1), v - val(i, j + 1), 0.0}) / h;
    out(i, j) = std::sqrt(a * a + b * b);
  }
  return GridFunction(u.domain_ptr(), std::move(out));
}

}  // namespace hjsym
