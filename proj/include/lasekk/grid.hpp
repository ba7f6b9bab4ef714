#pragma once

#include <Eigen/Core>

#include <cmath>
#include <utility>

#include "lasekk/errors.hpp"

namespace lasekk {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniformly spaced detuning grid [lo, hi] with `count` points, endpoints included.
///
/// Points are generated as mid + (i - (count-1)/2) * step so that a window
/// symmetric about zero yields exactly antisymmetric samples.
template <typename Scalar>
struct UniformGrid {
  Scalar lo{};
  Scalar hi{};
  Eigen::Index count{};

  void validate() const {
    detail::require_finite(lo, "grid min");
    detail::require_finite(hi, "grid max");
    if (!(hi > lo)) throw ValidationError("grid max must exceed grid min");
    if (count < 2) throw ValidationError("grid needs at least 2 points");
  }

  Scalar step() const { return (hi - lo) / Scalar(count - 1); }
  Scalar mid() const { return (hi + lo) / Scalar(2); }

  Scalar point(Eigen::Index i) const {
    return mid() + (Scalar(i) - Scalar(count - 1) / Scalar(2)) * step();
  }

  VectorX<Scalar> points() const {
    VectorX<Scalar> x(count);
    for (Eigen::Index i = 0; i < count; ++i) x(i) = point(i);
    return x;
  }

  /// Inclusive index range of the central `fraction` of the window.
  std::pair<Eigen::Index, Eigen::Index> central_range(double fraction = 0.6) const {
    const double margin = 0.5 * (1.0 - fraction) * double(count - 1);
    const auto first = static_cast<Eigen::Index>(std::ceil(margin - 1e-9));
    const auto last = static_cast<Eigen::Index>(std::floor(double(count - 1) - margin + 1e-9));
    return {first, last};
  }

  /// Symmetric grid [-half_span, half_span].
  static UniformGrid symmetric(Scalar half_span, Eigen::Index count) {
    return UniformGrid{-half_span, half_span, count};
  }
};

}  // namespace lasekk
