#pragma once

// Steady-state gain-clamped single-mode ring laser.
//
// Inside the lasing band the saturated gain pins to the cavity loss
// (chi'' = -1/Q) and the field intensity takes whatever value makes that
// true. Outside the band the field is zero and the medium shows its
// unsaturated Lorentzian response. The two branches meet continuously but
// with a slope discontinuity at the band edges.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lasekk/errors.hpp"
#include "lasekk/grid.hpp"
#include "lasekk/integrators.hpp"
#include "lasekk/medium.hpp"

namespace lasekk {

template <typename Scalar>
struct CavityParams {
  Scalar q_factor{};
  Scalar nu0{};  // rad/s, shared with the medium

  void validate() const {
    detail::require_positive(q_factor, "q_factor");
    detail::require_positive(nu0, "nu0");
  }

  /// Empty-cavity linewidth nu0 / Q (rad/s).
  Scalar linewidth() const { return nu0 / q_factor; }
};

using CavityParamsd = CavityParams<double>;

template <typename Scalar>
struct LasingBand {
  Scalar half_width{};  // rad/s

  Scalar nu1_offset() const { return -half_width; }
  Scalar nu2_offset() const { return half_width; }
  bool contains(Scalar detuning) const { return std::abs(detuning) < half_width; }
};

/// Band of detunings where unsaturated gain exceeds cavity loss.
/// Returns nullopt at or below threshold (Q G <= 1).
template <typename Scalar>
std::optional<LasingBand<Scalar>> lasing_band(const MediumParams<Scalar>& m,
                                              const CavityParams<Scalar>& c) {
  m.validate();
  c.validate();
  const Scalar qg = c.q_factor * m.gain_g;
  if (!(qg > Scalar(1))) return std::nullopt;
  using std::sqrt;
  return LasingBand<Scalar>{m.gamma_medium * sqrt(qg - Scalar(1)) / Scalar(2)};
}

template <typename Scalar>
struct ClampedPoint {
  Scalar detuning{};
  Scalar chi_prime{};
  Scalar chi_double_prime{};
  Scalar omega_sq{};  // lasing-field Rabi frequency squared, rad^2/s^2

  /// 2 Omega^2 = Q G Gamma^2 - Gamma^2 - 4 x^2 inside the band: the saturation
  /// term as it appears in the medium denominator.
  Scalar saturation() const { return Scalar(2) * omega_sq; }
};

template <typename Scalar>
ClampedPoint<Scalar> clamped_susceptibility(const MediumParams<Scalar>& m,
                                            const CavityParams<Scalar>& c, Scalar detuning) {
  detail::require_finite(detuning, "detuning");
  const auto band = lasing_band(m, c);
  if (band && band->contains(detuning)) {
    const Scalar q = c.q_factor;
    const Scalar g = m.gamma_medium;
    // chi''(x, Omega^2) = -1/Q  <=>  2 Omega^2 = Q G Gamma^2 - Gamma^2 - 4 x^2
    const Scalar omega_sq =
        (g * g * (q * m.gain_g - Scalar(1)) - Scalar(4) * detuning * detuning) / Scalar(2);
    return {detuning, Scalar(2) * detuning / (q * g), Scalar(-1) / q,
            std::max(omega_sq, Scalar(0))};
  }
  const auto chi = susceptibility(m, detuning, Scalar(0));
  return {detuning, chi.chi_prime, chi.chi_double_prime, Scalar(0)};
}

/// Size of the jump in d chi'/d(detuning) across either band edge:
/// |2/(Q Gamma) - d chi'_unsat/d nu at the edge|.
template <typename Scalar>
Scalar dispersion_slope_jump(const MediumParams<Scalar>& m, const CavityParams<Scalar>& c) {
  const auto band = lasing_band(m, c);
  if (!band) return Scalar(0);
  const Scalar inside = Scalar(2) / (c.q_factor * m.gamma_medium);
  return std::abs(inside - unsaturated_dispersion_slope(m, band->half_width));
}

template <typename Scalar>
struct SampledProfile {
  UniformGrid<Scalar> grid;
  VectorX<Scalar> chi_prime;
  VectorX<Scalar> chi_double_prime;
  VectorX<Scalar> omega_sq;
};

template <typename Scalar>
SampledProfile<Scalar> sample_clamped_profile(const MediumParams<Scalar>& m,
                                              const CavityParams<Scalar>& c,
                                              const UniformGrid<Scalar>& grid) {
  grid.validate();
  SampledProfile<Scalar> out{grid, VectorX<Scalar>(grid.count), VectorX<Scalar>(grid.count),
                             VectorX<Scalar>(grid.count)};
  for (Eigen::Index i = 0; i < grid.count; ++i) {
    const auto p = clamped_susceptibility(m, c, grid.point(i));
    out.chi_prime(i) = p.chi_prime;
    out.chi_double_prime(i) = p.chi_double_prime;
    out.omega_sq(i) = p.omega_sq;
  }
  return out;
}

template <typename Scalar>
struct RelaxResult {
  Scalar omega_sq{};
  Scalar elapsed{};  // s
  long steps{};
  bool decayed{};  // field died out instead of settling on a lasing fixed point
};

/// Time-domain relaxation of the field amplitude equation, written for the
/// Rabi frequency squared:
///   d(Omega^2)/dt = -(nu0/Q) Omega^2 - nu0 Omega^2 chi''(detuning, Omega^2).
/// The optical-frequency prefactor is evaluated at nu0; the relative error
/// is at most half_width/nu0.
template <typename Scalar>
RelaxResult<Scalar> relax_field(const MediumParams<Scalar>& m, const CavityParams<Scalar>& c,
                                Scalar detuning, Scalar seed_rabi_sq, Scalar dt, Scalar t_max) {
  m.validate();
  c.validate();
  detail::require_finite(detuning, "detuning");
  detail::require_positive(seed_rabi_sq, "seed rabi_sq");
  detail::require_positive(dt, "dt");
  detail::require_positive(t_max, "t_max");
  const Scalar fastest = std::max(c.linewidth(), m.nu0 * m.gain_g / Scalar(2));
  if (!(dt * fastest < Scalar(0.1)))
    throw ValidationError("relax_field: dt too large for the cavity/gain rates");

  const Scalar loss = c.linewidth();
  const auto rhs = [&](Scalar, Scalar w) {
    const Scalar ws = std::max(w, Scalar(0));
    return -loss * ws - m.nu0 * ws * susceptibility(m, detuning, ws).chi_double_prime;
  };

  constexpr Scalar kSteadyTol = Scalar(1e-10);
  constexpr Scalar kDecayFloor = Scalar(1e-12);
  Scalar w = seed_rabi_sq;
  long steps = 0;
  const long max_steps = static_cast<long>(std::ceil(t_max / dt));
  while (steps < max_steps) {
    const Scalar next = std::max(rk4_step(rhs, Scalar(steps) * dt, w, dt), Scalar(0));
    ++steps;
    const Scalar change = std::abs(next - w);
    w = next;
    if (w < kDecayFloor * seed_rabi_sq) return {w, Scalar(steps) * dt, steps, true};
    if (change < kSteadyTol * w) return {w, Scalar(steps) * dt, steps, false};
  }
  throw NonConvergence("relax_field: neither settled nor decayed within t_max (Omega^2 = " +
                       std::to_string(double(w)) + ")");
}

enum class Component { ChiPrime, ChiDoublePrime };

/// Locations of slope discontinuities in uniformly sampled data.
///
/// For smooth data the centered second difference d2 is O(h^2) and varies
/// smoothly along the grid; a kink injects an isolated O(h) spike. A point
/// is flagged when d2 departs from the average of d2[i-2] and d2[i+2] by
/// more than `threshold` times the local d2 level (i+-2, i+-3). Adjacent
/// flags are merged and the strongest spike in each run is reported.
template <typename Scalar>
std::vector<Scalar> detect_kinks(const UniformGrid<Scalar>& grid, const VectorX<Scalar>& values,
                                 Scalar threshold = Scalar(20)) {
  grid.validate();
  const Eigen::Index n = values.size();
  if (n != grid.count) throw ValidationError("detect_kinks: values/grid size mismatch");
  if (n < 9) throw ValidationError("detect_kinks: need at least 9 grid points");

  VectorX<Scalar> d2 = VectorX<Scalar>::Zero(n);
  d2.segment(1, n - 2) = values.head(n - 2) - Scalar(2) * values.segment(1, n - 2) + values.tail(n - 2);
  const Scalar floor =
      Scalar(1000) * std::numeric_limits<Scalar>::epsilon() * values.cwiseAbs().maxCoeff();

  VectorX<Scalar> score = VectorX<Scalar>::Zero(n);
  for (Eigen::Index i = 4; i <= n - 5; ++i) {
    const Scalar spike = std::abs(d2(i) - (d2(i - 2) + d2(i + 2)) / Scalar(2));
    const Scalar level = std::max({std::abs(d2(i - 3)), std::abs(d2(i - 2)), std::abs(d2(i + 2)),
                                   std::abs(d2(i + 3))});
    if (spike > threshold * (level + floor)) score(i) = spike;
  }

  std::vector<Scalar> kinks;
  Eigen::Index i = 0;
  while (i < n) {
    if (score(i) == Scalar(0)) {
      ++i;
      continue;
    }
    Eigen::Index best = i;
    Eigen::Index j = i;
    // a kink between two nodes lights up both of them
    while (j < n && (score(j) > Scalar(0) || (j + 1 < n && score(j + 1) > Scalar(0)))) {
      if (score(j) > score(best)) best = j;
      ++j;
    }
    kinks.push_back(grid.point(best));
    i = j;
  }
  return kinks;
}

template <typename Scalar>
std::vector<Scalar> detect_kinks(const SampledProfile<Scalar>& p, Component which) {
  return detect_kinks(p.grid, which == Component::ChiPrime ? p.chi_prime : p.chi_double_prime);
}

}  // namespace lasekk
