#pragma once

#include "hjsym/deficits.hpp"

#include <filesystem>
#include <iosfwd>

namespace hjsym {

/// %.17g; non-finite values print as inf, -inf, nan.
std::string format_double(double x);

/// i,j,x,y,value for the interior cells in linear-index order.
void write_grid_csv(const GridFunction& u, std::ostream& out);

/// Raw grid: "HJGRID01", nx and ny as uint32 LE, h as float64 LE, then nx*ny float64 LE
/// values row by row (i fastest). Exterior cells are written as 0.
void write_grid_binary(const GridFunction& u, std::ostream& out);

struct GridBinary {
  Index nx = 0, ny = 0;
  double h = 0.0;
  Eigen::ArrayXXd values;
};
GridBinary read_grid_binary(std::istream& in);
/// Values of a binary grid on a domain with the same dimensions and spacing.
GridFunction to_grid_function(const GridBinary& grid, std::shared_ptr<const GridDomain> domain);

/// s_left,s_right,value.
void write_step_profile_csv(const StepProfile& p, std::ostream& out);
StepProfile read_step_profile_csv(std::istream& in, Monotonicity monotonicity);

/// s,w per node.
void write_pl_profile_csv(const PLProfile& p, std::ostream& out);

/// s,r,phi,U at the breakpoints of phi; phi is the value on the interval starting there
/// (the last value is repeated at s = |Ω|).
void write_radial_csv(const RadialSolution& g, std::ostream& out);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string report_to_json(const DeficitReport& report);
DeficitReport report_from_json(const std::string& text);

/// One line per ledger row: name,kind,status,lhs,rhs,margin,tol,note.
std::string report_to_csv(const DeficitReport& report);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hjsym
