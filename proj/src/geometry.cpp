#include "hjsym/geometry.hpp"

#include "hjsym/optimize.hpp"

#include <Eigen/Geometry>

#include <array>
#include <limits>
#include <sstream>

namespace hjsym {

namespace {

constexpr int kRasterPadding = 4;
constexpr double kBlurWidth = 1.5;  // Gaussian sigma in cells
constexpr int kBlurRadius = 6;

}  // namespace

// ---------------------------------------------------------------------------
// GridDomain / GridFunction

GridDomain::GridDomain(double spacing, Vec2 origin, Mask mask)
    : spacing_(spacing), origin_(std::move(origin)), mask_(std::move(mask)) {
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
    throw PreconditionError("grid spacing must be positive and finite");
  for (Index j = 0; j < ny(); ++j)
    for (Index i = 0; i < nx(); ++i)
      if (mask_(i, j)) cells_.push_back(linear(i, j));
  if (cells_.empty()) throw DegenerateDomainError("domain mask is empty");
  row_prefix_.assign(std::size_t((nx() + 1) * ny()), 0);
  for (Index j = 0; j < ny(); ++j) {
    Index* row = row_prefix_.data() + j * (nx() + 1);
    for (Index i = 0; i < nx(); ++i) row[i + 1] = row[i] + (mask_(i, j) ? 1 : 0);
  }
}

Index GridDomain::count_in_row(Index j, Index i0, Index i1) const {
  if (j < 0 || j >= ny()) return 0;
  i0 = std::clamp<Index>(i0, 0, nx());
  i1 = std::clamp<Index>(i1, 0, nx());
  if (i1 <= i0) return 0;
  const Index* row = row_prefix_.data() + j * (nx() + 1);
  return row[i1] - row[i0];
}

Vec2 GridDomain::centroid() const {
  Vec2 sum = Vec2::Zero();
  for (Index c : cells_) sum += center(c);
  return sum / double(cells_.size());
}

double GridDomain::diameter() const {
  Index imin = nx(), imax = -1, jmin = ny(), jmax = -1;
  for (Index c : cells_) {
    const Index i = c % nx(), j = c / nx();
    imin = std::min(imin, i);
    imax = std::max(imax, i);
    jmin = std::min(jmin, j);
    jmax = std::max(jmax, j);
  }
  return spacing_ * std::hypot(double(imax - imin + 1), double(jmax - jmin + 1));
}

GridDomain GridDomain::scaled(double b) const {
  if (!(b > 0.0)) throw PreconditionError("scale factor must be positive");
  return GridDomain(spacing_ * b, origin_ * b, mask_);
}

GridDomain GridDomain::with_mask(Mask mask) const {
  if (mask.rows() != nx() || mask.cols() != ny())
    throw DomainMismatchError("mask dimensions differ from the grid");
  return GridDomain(spacing_, origin_, std::move(mask));
}

bool GridDomain::same_grid(const GridDomain& other) const {
  return spacing_ == other.spacing_ && origin_ == other.origin_ && nx() == other.nx() &&
         ny() == other.ny();
}

GridFunction::GridFunction(std::shared_ptr<const GridDomain> domain, Eigen::ArrayXXd values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw PreconditionError("grid function without a domain");
  if (values_.rows() != domain_->nx() || values_.cols() != domain_->ny())
    throw DomainMismatchError("grid function dimensions differ from the domain");
  values_ = domain_->mask().select(values_, 0.0);
}

GridFunction GridFunction::zeros(std::shared_ptr<const GridDomain> domain) {
  Eigen::ArrayXXd v = Eigen::ArrayXXd::Zero(domain->nx(), domain->ny());
  return GridFunction(std::move(domain), std::move(v));
}

GridFunction GridFunction::sample(std::shared_ptr<const GridDomain> domain,
                                  const std::function<double(const Vec2&)>& fn) {
  Eigen::ArrayXXd v = Eigen::ArrayXXd::Zero(domain->nx(), domain->ny());
  for (Index c : domain->cells()) v.data()[c] = fn(domain->center(c));
  return GridFunction(std::move(domain), std::move(v));
}

std::vector<double> GridFunction::interior_values() const {
  std::vector<double> out;
  out.reserve(domain_->cell_count());
  for (Index c : domain_->cells()) out.push_back(at(c));
  return out;
}

double GridFunction::integral() const {
  const auto v = interior_values();
  return domain_->cell_area() * exact_sum(v);
}

double GridFunction::lp_norm(double p) const {
  if (std::isinf(p)) return max_abs();
  auto v = interior_values();
  for (double& x : v) x = std::pow(std::abs(x), p);
  return std::pow(domain_->cell_area() * exact_sum(v), 1.0 / p);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (Index c : domain_->cells()) m = std::max(m, std::abs(at(c)));
  return m;
}

double GridFunction::min_interior() const {
  double m = std::numeric_limits<double>::infinity();
  for (Index c : domain_->cells()) m = std::min(m, at(c));
  return m;
}

double GridFunction::max_interior() const {
  double m = -std::numeric_limits<double>::infinity();
  for (Index c : domain_->cells()) m = std::max(m, at(c));
  return m;
}

void require_same_domain(const GridFunction& a, const GridFunction& b, const char* what) {
  if (a.domain_ptr() == b.domain_ptr()) return;
  if (!a.domain().same_grid(b.domain()) || (a.domain().mask() != b.domain().mask()).any())
    throw DomainMismatchError(std::string(what) + ": functions live on different domains");
}

// ---------------------------------------------------------------------------
// Shapes

namespace {

Vec2 to_local(const ShapeSpec& spec, const Vec2& p) {
  return Eigen::Rotation2Dd(-spec.rotation) * (p - spec.center);
}

bool polygon_contains(const std::vector<Vec2>& v, const Vec2& p) {
  bool in = false;
  for (std::size_t a = 0, b = v.size() - 1; a < v.size(); b = a++) {
    if ((v[a].y() > p.y()) != (v[b].y() > p.y())) {
      const double x = v[a].x() + (p.y() - v[a].y()) * (v[b].x() - v[a].x()) / (v[b].y() - v[a].y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

double polygon_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t k = 0, l = v.size() - 1; k < v.size(); l = k++)
    a += v[l].x() * v[k].y() - v[k].x() * v[l].y();
  return 0.5 * std::abs(a);
}

struct Overloaded {
  template <class... Fs>
  struct Set : Fs... {
    using Fs::operator()...;
  };
};
template <class... Fs>
Overloaded::Set<Fs...> overloaded(Fs... fs) {
  return {fs...};
}

double bounding_radius(const Shape& shape) {
  return std::visit(
      overloaded([](const Disk& d) { return d.radius; },
                 [](const Ellipse& e) { return std::max(e.a, e.b); },
                 [](const Rectangle& r) { return 0.5 * std::hypot(r.width, r.length); },
                 [](const PerturbedDisk& p) { return p.radius * (1.0 + std::abs(p.amplitude)); },
                 [](const TwoDisks& t) {
                   return 0.5 * t.gap + 2.0 * std::max(t.r1, t.r2);
                 },
                 [](const Polygon& p) {
                   double r = 0.0;
                   for (const auto& v : p.vertices) r = std::max(r, v.norm());
                   return r;
                 }),
      shape);
}

void validate(const ShapeSpec& spec) {
  if (!(spec.spacing > 0.0) || !std::isfinite(spec.spacing))
    throw PreconditionError("shape spacing h must be positive");
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw PreconditionError(std::string("shape parameter '") + what + "' must be positive");
  };
  std::visit(overloaded([&](const Disk& d) { positive(d.radius, "radius"); },
                        [&](const Ellipse& e) {
                          positive(e.a, "a");
                          positive(e.b, "b");
                        },
                        [&](const Rectangle& r) {
                          positive(r.width, "width");
                          positive(r.length, "length");
                        },
                        [&](const PerturbedDisk& p) {
                          positive(p.radius, "radius");
                          if (!(std::abs(p.amplitude) < 1.0))
                            throw PreconditionError("perturbed disk amplitude must lie in (-1, 1)");
                          if (p.mode < 0) throw PreconditionError("perturbed disk mode must be >= 0");
                        },
                        [&](const TwoDisks& t) {
                          positive(t.r1, "r1");
                          positive(t.r2, "r2");
                          if (!(t.gap >= 0.0)) throw PreconditionError("two-disk gap must be >= 0");
                        },
                        [&](const Polygon& p) {
                          if (p.vertices.size() < 3)
                            throw PreconditionError("polygon needs at least three vertices");
                          positive(polygon_area(p.vertices), "polygon area");
                        }),
             spec.shape);
}

}  // namespace

bool contains(const ShapeSpec& spec, const Vec2& p) {
  const Vec2 q = to_local(spec, p);
  return std::visit(
      overloaded(
          [&](const Disk& d) { return q.squaredNorm() < d.radius * d.radius; },
          [&](const Ellipse& e) {
            const double x = q.x() / e.a, y = q.y() / e.b;
            return x * x + y * y < 1.0;
          },
          [&](const Rectangle& r) {
            return std::abs(q.x()) < 0.5 * r.width && std::abs(q.y()) < 0.5 * r.length;
          },
          [&](const PerturbedDisk& pd) {
            const double rho = q.norm();
            if (rho == 0.0) return true;
            const double theta = std::atan2(q.y(), q.x());
            return rho < pd.radius * (1.0 + pd.amplitude * std::cos(pd.mode * theta));
          },
          [&](const TwoDisks& t) {
            const Vec2 c1(-(0.5 * t.gap + t.r1), 0.0), c2(0.5 * t.gap + t.r2, 0.0);
            return (q - c1).squaredNorm() < t.r1 * t.r1 || (q - c2).squaredNorm() < t.r2 * t.r2;
          },
          [&](const Polygon& poly) { return polygon_contains(poly.vertices, q); }),
      spec.shape);
}

double analytic_area(const ShapeSpec& spec) {
  constexpr double pi = std::numbers::pi;
  return std::visit(
      overloaded([](const Disk& d) { return pi * d.radius * d.radius; },
                 [](const Ellipse& e) { return pi * e.a * e.b; },
                 [](const Rectangle& r) { return r.width * r.length; },
                 [](const PerturbedDisk& p) {
                   // mode 0 is a plain rescaled disk
                   if (p.mode == 0) return pi * std::pow(p.radius * (1.0 + p.amplitude), 2);
                   return pi * p.radius * p.radius * (1.0 + 0.5 * p.amplitude * p.amplitude);
                 },
                 [](const TwoDisks& t) { return pi * (t.r1 * t.r1 + t.r2 * t.r2); },
                 [](const Polygon& p) { return polygon_area(p.vertices); }),
      spec.shape);
}

std::string shape_name(const Shape& shape) {
  return std::visit(overloaded([](const Disk&) { return std::string("disk"); },
                               [](const Ellipse&) { return std::string("ellipse"); },
                               [](const Rectangle&) { return std::string("rectangle"); },
                               [](const PerturbedDisk&) { return std::string("perturbed_disk"); },
                               [](const TwoDisks&) { return std::string("two_disks"); },
                               [](const Polygon&) { return std::string("polygon"); }),
                    shape);
}

GridDomain rasterize(const ShapeSpec& spec) {
  validate(spec);
  const double h = spec.spacing;
  const double R = bounding_radius(spec.shape);
  const Index i0 = Index(std::floor((spec.center.x() - R) / h)) - kRasterPadding;
  const Index i1 = Index(std::ceil((spec.center.x() + R) / h)) + kRasterPadding;
  const Index j0 = Index(std::floor((spec.center.y() - R) / h)) - kRasterPadding;
  const Index j1 = Index(std::ceil((spec.center.y() + R) / h)) + kRasterPadding;
  const Vec2 origin(double(i0) * h, double(j0) * h);

  GridDomain::Mask mask(i1 - i0, j1 - j0);
  for (Index j = 0; j < mask.cols(); ++j)
    for (Index i = 0; i < mask.rows(); ++i)
      mask(i, j) = contains(spec, origin + h * Vec2(double(i) + 0.5, double(j) + 0.5));
  if (!mask.any())
    throw DegenerateDomainError("shape '" + shape_name(spec.shape) +
                                "' covers no cell center at this spacing");
  return GridDomain(h, origin, std::move(mask));
}

// ---------------------------------------------------------------------------
// Perimeters

double contour_length(const Eigen::ArrayXXd& field, double level, double spacing) {
  const Index nx = field.rows(), ny = field.cols();
  double length = 0.0;
  // Corner order: 0=(0,0) 1=(1,0) 2=(1,1) 3=(0,1); edge e joins corner e and e+1.
  static constexpr std::array<std::array<double, 2>, 4> corner = {
      {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
  for (Index j = 0; j + 1 < ny; ++j) {
    for (Index i = 0; i + 1 < nx; ++i) {
      const std::array<double, 4> v = {field(i, j), field(i + 1, j), field(i + 1, j + 1),
                                       field(i, j + 1)};
      std::array<bool, 4> in{};
      int count = 0;
      for (int k = 0; k < 4; ++k) {
        in[k] = v[k] > level;
        count += in[k];
      }
      if (count == 0 || count == 4) continue;

      std::array<Vec2, 4> cross;
      std::array<bool, 4> has{};
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if (in[a] == in[b]) continue;
        const double t = (level - v[a]) / (v[b] - v[a]);
        cross[e] = Vec2(corner[a][0] + t * (corner[b][0] - corner[a][0]),
                        corner[a][1] + t * (corner[b][1] - corner[a][1]));
        has[e] = true;
      }
      const bool saddle = has[0] && has[1] && has[2] && has[3];
      if (!saddle) {
        std::array<Vec2, 2> ends;
        int n = 0;
        for (int e = 0; e < 4; ++e)
          if (has[e]) ends[n++] = cross[e];
        length += (ends[0] - ends[1]).norm();
        continue;
      }
      // Saddle: the corners cut off are those whose state differs from the cell center.
      const bool center_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
      for (int k = 0; k < 4; ++k) {
        if (in[k] == center_in) continue;
        const int e_prev = (k + 3) % 4, e_next = k;
        length += (cross[e_prev] - cross[e_next]).norm();
      }
    }
  }
  return length * spacing;
}

double domain_perimeter(const GridDomain& domain) {
  const Index pad = kBlurRadius + 2;
  const Index nx = domain.nx() + 2 * pad, ny = domain.ny() + 2 * pad;
  Eigen::ArrayXXd ind = Eigen::ArrayXXd::Zero(nx, ny);
  ind.block(pad, pad, domain.nx(), domain.ny()) = domain.mask().cast<double>();

  std::array<double, 2 * kBlurRadius + 1> w{};
  double norm = 0.0;
  for (int k = -kBlurRadius; k <= kBlurRadius; ++k) {
    w[k + kBlurRadius] = std::exp(-0.5 * k * k / (kBlurWidth * kBlurWidth));
    norm += w[k + kBlurRadius];
  }
  for (double& x : w) x /= norm;

  Eigen::ArrayXXd tmp = Eigen::ArrayXXd::Zero(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = kBlurRadius; i < nx - kBlurRadius; ++i) {
      double s = 0.0;
      for (int k = -kBlurRadius; k <= kBlurRadius; ++k) s += w[k + kBlurRadius] * ind(i + k, j);
      tmp(i, j) = s;
    }
  Eigen::ArrayXXd blurred = Eigen::ArrayXXd::Zero(nx, ny);
  for (Index j = kBlurRadius; j < ny - kBlurRadius; ++j)
    for (Index i = 0; i < nx; ++i) {
      double s = 0.0;
      for (int k = -kBlurRadius; k <= kBlurRadius; ++k) s += w[k + kBlurRadius] * tmp(i, j + k);
      blurred(i, j) = s;
    }
  return contour_length(blurred, 0.5, domain.spacing());
}

double level_set_perimeter(const GridFunction& u, double t) {
  if (t < 0.0) throw PreconditionError("level must be non-negative");
  if (t == 0.0) return domain_perimeter(u.domain());
  return contour_length(u.values().abs(), t, u.domain().spacing());
}

GridDomain superlevel_set(const GridFunction& u, double t) {
  GridDomain::Mask mask = u.domain().mask() && (u.values().abs() > t);
  if (!mask.any()) {
    std::ostringstream os;
    os << "superlevel set {|u| > " << t << "} is empty";
    throw DegenerateDomainError(os.str());
  }
  return u.domain().with_mask(std::move(mask));
}

// ---------------------------------------------------------------------------
// Asymmetry

double ball_overlap(const GridDomain& set, const Ball& ball) {
  const double h = set.spacing();
  const double half_diag = h * std::numbers::sqrt2 / 2.0;
  const double r = ball.radius, r2 = r * r;
  const double inner = r - half_diag;
  const double inner2 = inner > 0.0 ? inner * inner : -1.0;
  const double outer2 = (r + half_diag) * (r + half_diag);
  const double reach = r + half_diag;
  const Vec2& o = set.origin();
  const auto cx = [&](Index i) { return o.x() + h * (double(i) + 0.5) - ball.center.x(); };
  std::size_t full = 0, partial16 = 0;
  // Row by row: cells whose centers are within r - h/sqrt(2) are counted from the row
  // prefix sums; the remaining cells within r + h/sqrt(2) are subsampled 4x4.
  const Index j0 = std::max<Index>(0, Index(std::floor((ball.center.y() - reach - o.y()) / h)) - 1);
  const Index j1 = std::min<Index>(set.ny() - 1, Index(std::ceil((ball.center.y() + reach - o.y()) / h)) + 1);
  for (Index j = j0; j <= j1; ++j) {
    const double dy = o.y() + h * (double(j) + 0.5) - ball.center.y();
    const double rest = outer2 - dy * dy;
    if (rest <= 0.0) continue;
    const double span = std::sqrt(rest);
    Index a = std::max<Index>(0, Index(std::floor((ball.center.x() - span - o.x()) / h)) - 1);
    Index b = std::min<Index>(set.nx() - 1, Index(std::ceil((ball.center.x() + span - o.x()) / h)) + 1);
    // Exact full range [fa, fb) under the same predicate as the cell loop.
    Index fa = 0, fb = 0;
    if (inner2 > dy * dy) {
      const double fspan = std::sqrt(inner2 - dy * dy);
      const auto is_full = [&](Index i) { return cx(i) * cx(i) + dy * dy <= inner2; };
      fa = std::max<Index>(a, Index(std::floor((ball.center.x() - fspan - o.x()) / h)) - 1);
      while (fa <= b && !is_full(fa)) ++fa;
      fb = fa;
      if (fa <= b) {
        fb = std::min<Index>(b + 1, Index(std::ceil((ball.center.x() + fspan - o.x()) / h)) + 2);
        while (fb > fa && !is_full(fb - 1)) --fb;
      }
      full += std::size_t(set.count_in_row(j, fa, fb));
    }
    const auto subsample = [&](Index i) {
      if (!set.mask()(i, j)) return;
      const double qx = cx(i);
      if (qx * qx + dy * dy >= outer2) return;
      for (int sa = 0; sa < 4; ++sa) {
        const double dx = qx + h * ((sa + 0.5) / 4.0 - 0.5);
        for (int sb = 0; sb < 4; ++sb) {
          const double ddy = dy + h * ((sb + 0.5) / 4.0 - 0.5);
          if (dx * dx + ddy * ddy < r2) ++partial16;
        }
      }
    };
    if (fb > fa) {
      for (Index i = a; i < fa; ++i) subsample(i);
      for (Index i = fb; i <= b; ++i) subsample(i);
    } else {
      for (Index i = a; i <= b; ++i) subsample(i);
    }
  }
  return set.cell_area() * (double(full) + double(partial16) / 16.0);
}

double symmetric_difference(const GridDomain& set, const Ball& ball) {
  return set.measure() + ball.measure() - 2.0 * ball_overlap(set, ball);
}

AsymmetryResult fraenkel_asymmetry(const GridDomain& set, const AsymmetryOptions& options) {
  const double measure = set.measure();
  if (!(measure > 0.0)) throw DegenerateDomainError("asymmetry of a zero-measure set");
  const double radius = std::sqrt(measure / std::numbers::pi);
  const double h = set.spacing();

  auto objective = [&](const Vec2& c) {
    return std::max(0.0, symmetric_difference(set, Ball{c, radius}) / measure);
  };

  const Vec2 centroid = set.centroid();
  CenterSearchOptions search;
  search.tolerance = h / 4.0;
  search.max_iterations = options.max_iterations;
  if (options.lattice) {
    const double extent = 0.5 * set.diameter();
    search.lattice_radius = 8;
    search.lattice_step = std::max(8.0 * h, extent / search.lattice_radius);
    search.simplex_size = search.lattice_step;
  } else {
    search.lattice_step = 0.0;
    search.simplex_size = 4.0 * h;
  }
  const Vec2 seed = options.start.value_or(centroid);
  const auto found = minimize_center(objective, seed, search);

  AsymmetryResult out;
  out.centroid_alpha = options.start ? objective(centroid) : found.seed_value;
  out.alpha = std::min(found.value, out.centroid_alpha);
  out.ball = Ball{out.alpha == found.value ? found.center : centroid, radius};
  out.evaluations = found.evaluations;
  return out;
}

IsoperimetricDeficit isoperimetric_deficit(const GridDomain& set, double gamma_n) {
  if (!(gamma_n > 0.0)) throw PreconditionError("gamma_n must be positive");
  IsoperimetricDeficit d;
  d.perimeter = domain_perimeter(set);
  d.measure = set.measure();
  d.alpha = fraenkel_asymmetry(set).alpha;
  d.lower_bound = isoperimetric_constant(2) * std::sqrt(d.measure) * (1.0 + d.alpha * d.alpha / gamma_n);
  d.slack = d.perimeter - d.lower_bound;
  return d;
}

IsoperimetricDeficit isoperimetric_deficit(const GridFunction& u, double t, double gamma_n) {
  if (!(gamma_n > 0.0)) throw PreconditionError("gamma_n must be positive");
  const GridDomain set = t == 0.0 ? u.domain() : superlevel_set(u, t);
  IsoperimetricDeficit d;
  d.perimeter = level_set_perimeter(u, t);
  d.measure = set.measure();
  d.alpha = fraenkel_asymmetry(set).alpha;
  d.lower_bound = isoperimetric_constant(2) * std::sqrt(d.measure) * (1.0 + d.alpha * d.alpha / gamma_n);
  d.slack = d.perimeter - d.lower_bound;
  return d;
}

}  // namespace hjsym
