#pragma once

// Principal-value Hilbert transforms on uniformly sampled spectra and the
// Kramers-Kronig consistency check built on them:
//
//   chi'(x)  =  (1/pi) PV int chi''(x') / (x' - x) dx'
//   chi''(x) = -(1/pi) PV int chi'(x')  / (x' - x) dx'
//
// The window [a, b] is integrated by singularity subtraction and the
// trapezoid rule; the tails beyond it use an asymptotic power series
// C0/x^p + C1/x^(p+1) + C2/x^(p+2) fitted to the outer 10% of samples on
// each side and integrated analytically.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <algorithm>
#include <string>
#include <vector>

#include "lasekk/errors.hpp"
#include "lasekk/grid.hpp"
#include "lasekk/spectrum.hpp"

namespace lasekk {

inline constexpr int kTailTerms = 3;
inline constexpr double kCentralFraction = 0.6;
inline constexpr double kTailFitFraction = 0.1;
inline constexpr double kMaxTailMisfit = 0.2;

/// Tail model on one side: f(x) ~ sum_k coeff[k] * (edge / x)^(exponent + k).
template <typename Scalar>
struct TailSide {
  std::array<Scalar, kTailTerms> coeff{};
  Scalar misfit{};  // relative L2 misfit over the fitting samples
};

template <typename Scalar>
struct TailFit {
  int exponent{};  // 0: tails ignored
  TailSide<Scalar> left;
  TailSide<Scalar> right;
};

namespace detail {

/// edge^q * int_edge^inf s^-q / (s - x) ds as a function of t = x / edge < 1.
template <typename Scalar>
Scalar tail_kernel(int q, Scalar t) {
  using std::abs;
  if (abs(t) < Scalar(0.5)) {
    Scalar sum{};
    Scalar power(1);
    for (int m = 0; m < 200; ++m) {
      const Scalar term = power / Scalar(m + q);
      sum += term;
      if (abs(term) < std::numeric_limits<Scalar>::epsilon() * abs(sum) * Scalar(1e-2)) break;
      power *= t;
    }
    return sum;
  }
  using std::log1p;
  Scalar value = -log1p(-t) / t;
  for (int k = 2; k <= q; ++k) value = (value - Scalar(1) / Scalar(k - 1)) / t;
  return value;
}

template <typename Scalar>
TailSide<Scalar> fit_tail_side(const VectorX<Scalar>& x, const VectorX<Scalar>& f, Scalar edge,
                               int exponent) {
  const Eigen::Index m = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, kTailTerms> basis(m, kTailTerms);
  for (Eigen::Index j = 0; j < m; ++j) {
    using std::pow;
    const Scalar ratio = edge / x(j);
    for (int k = 0; k < kTailTerms; ++k) basis(j, k) = pow(ratio, exponent + k);
  }
  TailSide<Scalar> side;
  const Scalar norm = f.norm();
  if (norm == Scalar(0)) return side;
  const Eigen::Matrix<Scalar, kTailTerms, 1> c = basis.colPivHouseholderQr().solve(f);
  for (int k = 0; k < kTailTerms; ++k) side.coeff[k] = c(k);
  side.misfit = (f - basis * c).norm() / norm;
  return side;
}

}  // namespace detail

template <typename Scalar>
TailFit<Scalar> fit_tails(const UniformGrid<Scalar>& grid, const VectorX<Scalar>& f, int exponent) {
  TailFit<Scalar> fit;
  fit.exponent = exponent;
  if (exponent == 0) return fit;
  const Eigen::Index n = grid.count;
  const Eigen::Index m =
      std::max<Eigen::Index>(2 * kTailTerms, static_cast<Eigen::Index>(std::lround(kTailFitFraction * double(n))));
  const VectorX<Scalar> x = grid.points();
  if (!(x(m - 1) < Scalar(0) && x(n - m) > Scalar(0)))
    throw ValidationError("tail model needs a window whose outer 10% on each side excludes zero detuning");
  fit.left = detail::fit_tail_side<Scalar>(x.head(m), f.head(m), grid.lo, exponent);
  fit.right = detail::fit_tail_side<Scalar>(x.tail(m), f.tail(m), grid.hi, exponent);
  for (const auto* side : {&fit.left, &fit.right})
    if (side->misfit > Scalar(kMaxTailMisfit))
      throw BadTailFit("tail model misfit " + std::to_string(double(side->misfit)) +
                       " exceeds 20%; widen the sample window");
  return fit;
}

template <typename Scalar>
struct HilbertResult {
  VectorX<Scalar> values;  // one per evaluation index
  TailFit<Scalar> tails;
};

/// (1/pi) PV int f(x') / (x' - x) dx' at grid nodes first..last (inclusive),
/// which must lie in the central 60% of the window.
template <typename Scalar>
HilbertResult<Scalar> hilbert_pv(const UniformGrid<Scalar>& grid, const VectorX<Scalar>& f,
                                 Eigen::Index first, Eigen::Index last, int tail_exponent) {
  grid.validate();
  const Eigen::Index n = grid.count;
  if (f.size() != n) throw ValidationError("hilbert_pv: samples/grid size mismatch");
  if (tail_exponent < 0 || tail_exponent > 2) throw ValidationError("tail exponent must be 0, 1 or 2");
  const auto [lo_ok, hi_ok] = grid.central_range(kCentralFraction);
  if (first > last || first < lo_ok || last > hi_ok)
    throw EdgeEvaluation("hilbert_pv: evaluation points must lie in the central 60% of the window");

  HilbertResult<Scalar> out;
  out.tails = fit_tails(grid, f, tail_exponent);

  // 1/(j - i) laid out so that segment(n-1-i, n) lines up with j = 0..n-1.
  VectorX<Scalar> inv_offset(2 * n - 1);
  for (Eigen::Index k = -(n - 1); k <= n - 1; ++k)
    inv_offset(k + n - 1) = k == 0 ? Scalar(0) : Scalar(1) / Scalar(k);
  VectorX<Scalar> weights = VectorX<Scalar>::Ones(n);
  weights(0) = weights(n - 1) = Scalar(0.5);
  const VectorX<Scalar> weighted = weights.cwiseProduct(f);

  const Scalar pi = std::numbers::pi_v<Scalar>;
  out.values.resize(last - first + 1);
  for (Eigen::Index i = first; i <= last; ++i) {
    const auto kernel = inv_offset.segment(n - 1 - i, n);
    const Scalar fi = f(i);
    // Trapezoid of [f(x') - f(x)] / (x' - x); grid steps cancel. The removable
    // point contributes f'(x) * h, with f' from a centered difference.
    Scalar sum = weighted.dot(kernel) - fi * weights.dot(kernel);
    sum += (f(i + 1) - f(i - 1)) / Scalar(2);
    using std::log;
    sum += fi * log(Scalar(n - 1 - i) / Scalar(i));
    if (tail_exponent > 0) {
      const Scalar x = grid.point(i);
      for (int k = 0; k < kTailTerms; ++k) {
        const int q = tail_exponent + k;
        sum += out.tails.right.coeff[k] * detail::tail_kernel(q, x / grid.hi);
        sum -= out.tails.left.coeff[k] * detail::tail_kernel(q, x / grid.lo);
      }
    }
    out.values(i - first) = sum / pi;
  }
  return out;
}

template <typename Scalar>
struct KKReport {
  UniformGrid<Scalar> grid;
  Eigen::Index first{};  // evaluated index range (inclusive); NaN outside
  Eigen::Index last{};
  VectorX<Scalar> chi_prime_from_kk;         // forward: from chi''
  VectorX<Scalar> chi_double_prime_from_kk;  // backward: from chi'
  VectorX<Scalar> residual_forward;
  VectorX<Scalar> residual_backward;
  Scalar rel_l2_forward{};
  Scalar rel_l2_backward{};
  TailFit<Scalar> tail_forward;   // fitted to chi''
  TailFit<Scalar> tail_backward;  // fitted to chi'
};

namespace detail {

template <typename Scalar>
Scalar relative_l2(const VectorX<Scalar>& residual, const VectorX<Scalar>& target) {
  const Scalar t = target.norm();
  return t > Scalar(0) ? residual.norm() / t : residual.norm();
}

}  // namespace detail

/// Reconstructs each part of the spectrum from the other over the central
/// 60% of the window and reports pointwise and relative L2 residuals.
template <typename Scalar>
KKReport<Scalar> kk_check(const SampledSpectrum<Scalar>& s) {
  s.validate();
  const auto [first, last] = s.grid.central_range(kCentralFraction);
  const Eigen::Index len = last - first + 1;
  auto fwd = hilbert_pv(s.grid, s.chi_double_prime, first, last, s.tails.chi_double_prime);
  auto bwd = hilbert_pv(s.grid, s.chi_prime, first, last, s.tails.chi_prime);
  bwd.values = -bwd.values;

  const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  const Eigen::Index n = s.grid.count;
  KKReport<Scalar> r;
  r.grid = s.grid;
  r.first = first;
  r.last = last;
  r.chi_prime_from_kk = VectorX<Scalar>::Constant(n, nan);
  r.chi_double_prime_from_kk = VectorX<Scalar>::Constant(n, nan);
  r.residual_forward = VectorX<Scalar>::Constant(n, nan);
  r.residual_backward = VectorX<Scalar>::Constant(n, nan);
  r.chi_prime_from_kk.segment(first, len) = fwd.values;
  r.chi_double_prime_from_kk.segment(first, len) = bwd.values;
  const VectorX<Scalar> res_f = fwd.values - s.chi_prime.segment(first, len);
  const VectorX<Scalar> res_b = bwd.values - s.chi_double_prime.segment(first, len);
  r.residual_forward.segment(first, len) = res_f;
  r.residual_backward.segment(first, len) = res_b;
  r.rel_l2_forward = detail::relative_l2<Scalar>(res_f, s.chi_prime.segment(first, len));
  r.rel_l2_backward = detail::relative_l2<Scalar>(res_b, s.chi_double_prime.segment(first, len));
  r.tail_forward = fwd.tails;
  r.tail_backward = bwd.tails;
  return r;
}

/// Indices of the `count` largest local maxima of |values| within
/// [first, last], strongest first.
template <typename Scalar>
std::vector<Eigen::Index> largest_peaks(const VectorX<Scalar>& values, Eigen::Index first,
                                        Eigen::Index last, std::size_t count) {
  std::vector<Eigen::Index> peaks;
  for (Eigen::Index i = std::max<Eigen::Index>(first, 1); i <= last && i + 1 < values.size(); ++i) {
    const Scalar v = std::abs(values(i));
    if (v > std::abs(values(i - 1)) && v >= std::abs(values(i + 1))) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(values(a)) > std::abs(values(b));
  });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

/// Exact Hilbert pair of 1/(x + i eta): chi' = x/(x^2+eta^2), chi'' = -eta/(x^2+eta^2).
template <typename Scalar>
SampledSpectrum<Scalar> lorentzian_pair(Scalar eta, const UniformGrid<Scalar>& grid) {
  detail::require_positive(eta, "eta");
  grid.validate();
  SampledSpectrum<Scalar> s{grid, VectorX<Scalar>(grid.count), VectorX<Scalar>(grid.count),
                            TailExponents{1, 2}};
  for (Eigen::Index i = 0; i < grid.count; ++i) {
    const Scalar x = grid.point(i);
    const Scalar d = x * x + eta * eta;
    s.chi_prime(i) = x / d;
    s.chi_double_prime(i) = -eta / d;
  }
  return s;
}

}  // namespace lasekk
