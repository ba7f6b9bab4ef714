#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

#include "lasekk/errors.hpp"
#include "lasekk/grid.hpp"

namespace lasekk {

/// Power-law decay hints for the spectrum tails, |f| ~ C / |x|^p.
/// An exponent of 0 disables the analytic tail correction for that part.
struct TailExponents {
  int chi_prime = 1;
  int chi_double_prime = 2;
};

/// Complex spectrum chi' + i chi'' sampled on a uniform detuning grid.
template <typename Scalar>
struct SampledSpectrum {
  UniformGrid<Scalar> grid;
  VectorX<Scalar> chi_prime;
  VectorX<Scalar> chi_double_prime;
  TailExponents tails{};

  void validate() const {
    grid.validate();
    if (grid.count < 64) throw ValidationError("spectrum needs at least 64 samples");
    if (chi_prime.size() != grid.count || chi_double_prime.size() != grid.count)
      throw ValidationError("spectrum arrays do not match the grid");
    if (!chi_prime.allFinite() || !chi_double_prime.allFinite())
      throw ValidationError("spectrum contains non-finite samples");
    for (int p : {tails.chi_prime, tails.chi_double_prime})
      if (p < 0 || p > 2) throw ValidationError("tail exponent must be 0, 1 or 2");
  }
};

using SampledSpectrumd = SampledSpectrum<double>;

/// Indices of strict interior local extrema (sign change of the forward difference).
template <typename Scalar>
std::vector<Eigen::Index> local_extrema(const VectorX<Scalar>& values) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 1; i + 1 < values.size(); ++i) {
    const Scalar left = values(i) - values(i - 1);
    const Scalar right = values(i + 1) - values(i);
    if (left * right < Scalar(0)) out.push_back(i);
  }
  return out;
}

/// Local extremum of `values` whose grid location is closest to `target`.
template <typename Scalar>
std::optional<Eigen::Index> nearest_extremum(const UniformGrid<Scalar>& grid,
                                             const VectorX<Scalar>& values, Scalar target) {
  std::optional<Eigen::Index> best;
  Scalar best_dist{};
  for (const auto i : local_extrema(values)) {
    const Scalar d = std::abs(grid.point(i) - target);
    if (!best || d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace lasekk
