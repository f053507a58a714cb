#pragma once

#include "hjsym/core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>

namespace hjsym {

/// Open bounded planar set stored as a cell mask on a uniform grid.
///
/// Cell (i, j) covers [x0 + i h, x0 + (i+1) h) x [y0 + j h, y0 + (j+1) h); it belongs
/// to the set when its center does. The linear cell index is j * nx + i (row-major in
/// rows of constant y), which coincides with the storage offset of the column-major
/// Eigen arrays used for grid fields.
class GridDomain {
 public:
  using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  GridDomain(double spacing, Vec2 origin, Mask mask);

  double spacing() const { return spacing_; }
  const Vec2& origin() const { return origin_; }
  Index nx() const { return mask_.rows(); }
  Index ny() const { return mask_.cols(); }
  const Mask& mask() const { return mask_; }

  bool inside(Index i, Index j) const {
    return i >= 0 && j >= 0 && i < nx() && j < ny() && mask_(i, j);
  }
  Vec2 center(Index i, Index j) const {
    return origin_ + spacing_ * Vec2(double(i) + 0.5, double(j) + 0.5);
  }
  Vec2 center(Index linear) const { return center(linear % nx(), linear / nx()); }
  Index linear(Index i, Index j) const { return j * nx() + i; }

  double cell_area() const { return spacing_ * spacing_; }
  /// Interior cells, ascending linear index.
  const std::vector<Index>& cells() const { return cells_; }
  std::size_t cell_count() const { return cells_.size(); }
  /// h^2 times the interior cell count.
  double measure() const { return cell_area() * double(cells_.size()); }
  Vec2 centroid() const;
  /// Diagonal of the bounding box of the interior cells.
  double diameter() const;

  /// Same mask on the grid dilated by factor b about the coordinate origin.
  GridDomain scaled(double b) const;
  /// A subset on the same grid (level sets); throws DegenerateDomainError when empty.
  GridDomain with_mask(Mask mask) const;
  bool same_grid(const GridDomain& other) const;

  /// Interior cells (i, j) with i0 <= i < i1; indices are clamped to the grid.
  Index count_in_row(Index j, Index i0, Index i1) const;

 private:
  double spacing_;
  Vec2 origin_;
  Mask mask_;
  std::vector<Index> cells_;
  std::vector<Index> row_prefix_;  // (nx + 1) running counts per row
};

/// Real values on the interior cells of a GridDomain, zero outside.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const GridDomain> domain, Eigen::ArrayXXd values);

  static GridFunction zeros(std::shared_ptr<const GridDomain> domain);
  static GridFunction sample(std::shared_ptr<const GridDomain> domain,
                             const std::function<double(const Vec2&)>& fn);

  const GridDomain& domain() const { return *domain_; }
  const std::shared_ptr<const GridDomain>& domain_ptr() const { return domain_; }
  const Eigen::ArrayXXd& values() const { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  double at(Index linear) const { return values_.data()[linear]; }

  /// Values of the interior cells in linear-index order.
  std::vector<double> interior_values() const;
  /// h^2 * sum of values.
  double integral() const;
  double lp_norm(double p) const;
  double max_abs() const;
  double min_interior() const;
  double max_interior() const;

 private:
  std::shared_ptr<const GridDomain> domain_;
  Eigen::ArrayXXd values_;
};

void require_same_domain(const GridFunction& a, const GridFunction& b, const char* what);

struct Ball {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;

  double measure() const { return std::numbers::pi * radius * radius; }
  static Ball with_measure(const Vec2& center, double measure) {
    return {center, std::sqrt(measure / std::numbers::pi)};
  }
};

struct Disk {
  double radius = 1.0;
};
struct Ellipse {
  double a = 1.0, b = 1.0;
};
struct Rectangle {
  double width = 1.0, length = 1.0;
};
/// r(theta) = R (1 + amplitude cos(mode theta)).
struct PerturbedDisk {
  double radius = 1.0, amplitude = 0.1;
  int mode = 3;
};
/// Two disks on the x-axis whose closest points are `gap` apart, symmetric about the center.
struct TwoDisks {
  double r1 = 0.5, r2 = 0.5, gap = 0.5;
};
struct Polygon {
  std::vector<Vec2> vertices;
};

using Shape = std::variant<Disk, Ellipse, Rectangle, PerturbedDisk, TwoDisks, Polygon>;

struct ShapeSpec {
  Shape shape = Disk{};
  double spacing = 1.0 / 64;
  Vec2 center = Vec2::Zero();
  double rotation = 0.0;  // radians, about `center`
};

bool contains(const ShapeSpec& spec, const Vec2& p);
double analytic_area(const ShapeSpec& spec);
std::string shape_name(const Shape& shape);

/// Cells whose centers lie in the shape. Grid lines sit on integer multiples of h and
/// the mask carries a ring of exterior padding cells.
GridDomain rasterize(const ShapeSpec& spec);

/// Marching-squares length of the isoline {field = level} over cell centers, with
/// values strictly above `level` counted inside.
double contour_length(const Eigen::ArrayXXd& field, double level, double spacing);

/// Boundary length of a cell mask: marching squares at 1/2 on the indicator smoothed
/// by a Gaussian of width 1.5 h, which removes the staircase bias of the raw mask.
double domain_perimeter(const GridDomain& domain);

/// Perimeter of {u > t}; t = 0 gives the boundary of the domain.
double level_set_perimeter(const GridFunction& u, double t);

/// {|u| > t} as a mask on the grid of u.
GridDomain superlevel_set(const GridFunction& u, double t);

/// |set ∩ B| with fully covered cells resolved exactly and boundary cells by 4x4 subsampling.
double ball_overlap(const GridDomain& set, const Ball& ball);
double symmetric_difference(const GridDomain& set, const Ball& ball);

struct AsymmetryOptions {
  bool lattice = true;
  std::optional<Vec2> start;
  int max_iterations = 200;
};

struct AsymmetryResult {
  double alpha = 0.0;
  Ball ball;
  double centroid_alpha = 0.0;
  int evaluations = 0;
};

/// Fraenkel asymmetry min_x |set Δ B_r(x)| / |B_r| with |B_r| = |set|.
AsymmetryResult fraenkel_asymmetry(const GridDomain& set, const AsymmetryOptions& options = {});

struct IsoperimetricDeficit {
  double perimeter = 0.0;
  double measure = 0.0;
  double alpha = 0.0;
  double lower_bound = 0.0;  // n omega_n^{1/n} |E|^{(n-1)/n} (1 + alpha^2 / gamma_n)
  double slack = 0.0;        // perimeter - lower_bound
};

IsoperimetricDeficit isoperimetric_deficit(const GridDomain& set, double gamma_n);
IsoperimetricDeficit isoperimetric_deficit(const GridFunction& u, double t, double gamma_n);

}  // namespace hjsym
