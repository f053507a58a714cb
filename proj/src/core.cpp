#include "hjsym/core.hpp"

namespace hjsym {

namespace {

double sorted_quad_sum(std::vector<__float128>& terms) {
  std::sort(terms.begin(), terms.end());
  __float128 acc = 0;
  for (const auto& t : terms) acc += t;
  return static_cast<double>(acc);
}

}  // namespace

double exact_sum(std::span<const double> terms) {
  std::vector<__float128> q(terms.begin(), terms.end());
  return sorted_quad_sum(q);
}

double exact_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("exact_dot: length mismatch");
  std::vector<__float128> q(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) q[k] = static_cast<__float128>(a[k]) * b[k];
  return sorted_quad_sum(q);
}

}  // namespace hjsym
