#pragma once

// Saturable two-level gain medium.
//
// Sign convention used throughout the library: chi = chi' + i chi'', and
// chi'' < 0 means gain. All spectral arguments are detunings from line
// center in rad/s, never absolute optical frequencies.

#include <cmath>
#include <complex>

#include "lasekk/errors.hpp"

namespace lasekk {

template <typename Scalar>
struct PhysicalConstants {
  static constexpr Scalar hbar = Scalar(1.054571817e-34);    // J s
  static constexpr Scalar epsilon0 = Scalar(8.8541878128e-12);  // F/m
};

template <typename Scalar>
struct MediumParams {
  Scalar gamma_medium{};  // two-level linewidth, rad/s
  Scalar nu0{};           // line center, rad/s
  Scalar gain_g{};        // dimensionless gain parameter

  void validate() const {
    detail::require_positive(gamma_medium, "gamma_medium");
    detail::require_positive(nu0, "nu0");
    detail::require_positive(gain_g, "gain_g");
  }

  static MediumParams from_microscopic(Scalar n_density, Scalar dipole, Scalar gamma_medium,
                                       Scalar nu0);
};

using MediumParamsd = MediumParams<double>;

template <typename Scalar>
struct Susceptibility {
  Scalar chi_prime{};
  Scalar chi_double_prime{};

  std::complex<Scalar> value() const { return {chi_prime, chi_double_prime}; }
};

/// Microscopic coupling: xi = p^2 / (hbar^2 Gamma) and G = hbar N xi / eps0.
template <typename Scalar>
struct Coupling {
  Scalar xi{};
  Scalar gain_g{};
  Scalar gamma_medium{};

  /// Rabi frequency squared produced by a field amplitude E (V/m): Gamma E^2 xi.
  Scalar rabi_sq(Scalar field) const { return gamma_medium * field * field * xi; }
};

template <typename Scalar>
Coupling<Scalar> derive_coupling(Scalar n_density, Scalar dipole, Scalar gamma_medium) {
  detail::require_positive(n_density, "atom density");
  detail::require_positive(dipole, "dipole moment");
  detail::require_positive(gamma_medium, "gamma_medium");
  using C = PhysicalConstants<Scalar>;
  // Divide before squaring; hbar^2 alone underflows in single precision.
  const Scalar ratio = dipole / C::hbar;
  const Scalar xi = ratio * ratio / gamma_medium;
  const Scalar gain = C::hbar * n_density * xi / C::epsilon0;
  return {xi, gain, gamma_medium};
}

template <typename Scalar>
MediumParams<Scalar> MediumParams<Scalar>::from_microscopic(Scalar n_density, Scalar dipole,
                                                            Scalar gamma_medium, Scalar nu0) {
  const auto coupling = derive_coupling(n_density, dipole, gamma_medium);
  MediumParams m{gamma_medium, nu0, coupling.gain_g};
  m.validate();
  return m;
}

/// Saturated susceptibility at a detuning and Rabi frequency squared.
template <typename Scalar>
Susceptibility<Scalar> susceptibility(const MediumParams<Scalar>& m, Scalar detuning,
                                      Scalar rabi_sq) {
  detail::require_finite(detuning, "detuning");
  detail::require_non_negative(rabi_sq, "rabi_sq");
  const Scalar gamma = m.gamma_medium;
  const Scalar denom = Scalar(2) * rabi_sq + gamma * gamma + Scalar(4) * detuning * detuning;
  const Scalar lineshape = gamma * gamma / denom;
  const Scalar chi2 = -m.gain_g * lineshape;
  // chi' / chi'' = -2 x / Gamma on the same denominator.
  const Scalar chi1 = m.gain_g * (Scalar(2) * detuning / gamma) * lineshape;
  return {chi1, chi2};
}

/// Unsaturated dispersion slope d chi' / d(detuning).
template <typename Scalar>
Scalar unsaturated_dispersion_slope(const MediumParams<Scalar>& m, Scalar detuning) {
  const Scalar g2 = m.gamma_medium * m.gamma_medium;
  const Scalar x2 = detuning * detuning;
  const Scalar denom = g2 + Scalar(4) * x2;
  return Scalar(2) * m.gain_g * m.gamma_medium * (g2 - Scalar(4) * x2) / (denom * denom);
}

}  // namespace lasekk
