#pragma once

#include "lasekk/kk_transform.hpp"

namespace testing {

/// Relative L2 error of chi'' -> chi' -> chi'' on a Lorentzian pair. The
/// second pass runs on the central span returned by the first.
inline double involution_error(double eta, const lasekk::UniformGrid<double>& grid) {
  using namespace lasekk;
  const auto s = lorentzian_pair(eta, grid);
  const auto [first, last] = grid.central_range(kCentralFraction);
  const auto once = hilbert_pv(grid, s.chi_double_prime, first, last, 2);
  const UniformGrid<double> inner{grid.point(first), grid.point(last), last - first + 1};
  const auto [f2, l2] = inner.central_range(kCentralFraction);
  const auto twice = hilbert_pv(inner, once.values, f2, l2, 1);
  const VectorX<double> back = -twice.values;
  const VectorX<double> target = s.chi_double_prime.segment(first + f2, l2 - f2 + 1);
  return (back - target).norm() / target.norm();
}

}  // namespace testing
