#pragma once

// Weak-probe susceptibility of an incoherently pumped two-level atom driven
// by a strong pump, computed three independent ways:
//
//   probe_chi_closed      closed-form expression
//   probe_chi_solve       steady harmonic-balance equations, 3x3 complex LU
//   probe_chi_timedomain  RK4 integration of the density-matrix equations
//                         followed by projection onto the probe harmonic
//
// Interaction picture at the pump frequency; Delta = nu_pump - omega_ba and
// delta = nu_probe - nu_pump. chi'' > 0 is absorption. The pump Rabi
// frequency is taken real and non-negative (its phase is a gauge choice).
//
// Harmonic bookkeeping: rho_ba = rho0 + rho1 e^{-i delta t} + rho_m1 e^{+i delta t}
// and n = n0 + n1 e^{-i delta t} + n_m1 e^{+i delta t}; rho_ab = conj(rho_ba),
// so the e^{-i delta t} coefficient of rho_ab is conj(rho_m1).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "lasekk/errors.hpp"
#include "lasekk/grid.hpp"
#include "lasekk/integrators.hpp"
#include "lasekk/spectrum.hpp"

namespace lasekk {

template <typename Scalar>
struct PumpProbeParams {
  Scalar gamma_parallel{};  // longitudinal decay Gamma, rad/s
  Scalar gamma_ba{};        // transverse decay, rad/s
  Scalar r_op{};            // incoherent pump rate, rad/s
  Scalar delta_pump{};      // pump detuning Delta, rad/s
  Scalar omega1{};          // pump Rabi frequency, rad/s
  Scalar gain_g{1};         // G = N |mu_ba|^2 / (eps0 hbar gamma_ba)

  /// Coherence decay including pump broadening.
  Scalar eta() const { return gamma_ba + r_op / Scalar(2); }
  /// Population relaxation including the pump.
  Scalar theta() const { return r_op + gamma_parallel; }

  void validate() const {
    detail::require_positive(gamma_parallel, "gamma (longitudinal)");
    detail::require_positive(gamma_ba, "gamma_ba");
    detail::require_non_negative(r_op, "r_op");
    detail::require_finite(delta_pump, "delta_pump");
    detail::require_non_negative(omega1, "omega1");
    detail::require_finite(gain_g, "gain_g");
  }
};

using PumpProbeParamsd = PumpProbeParams<double>;

template <typename Scalar>
struct ZerothOrder {
  Scalar n0{};                      // rho_bb - rho_aa with the pump alone
  std::complex<Scalar> rho_ba_0{};  // pump-driven coherence
};

template <typename Scalar>
struct HarmonicState {
  std::complex<Scalar> rho_ba_p1{};  // coefficient of e^{-i delta t} in rho_ba
  std::complex<Scalar> rho_ba_m1{};  // coefficient of e^{+i delta t} in rho_ba
  std::complex<Scalar> n1{};
  std::complex<Scalar> n_m1{};  // from the e^{+i delta t} balance; equals conj(n1) for real n
  Scalar perturbation_ratio{};  // |rho_ba_p1| / |rho_ba_0|, diagnostic only
};

template <typename Scalar>
Scalar effective_rabi(const PumpProbeParams<Scalar>& p) {
  using std::hypot;
  return hypot(p.omega1, p.delta_pump);
}

template <typename Scalar>
ZerothOrder<Scalar> zeroth_order(const PumpProbeParams<Scalar>& p) {
  p.validate();
  using Complex = std::complex<Scalar>;
  const Scalar eta = p.eta();
  const Scalar d = p.delta_pump;
  const Scalar o2 = p.omega1 * p.omega1;
  const Scalar n0 = (p.r_op - p.gamma_parallel) / (p.theta() + o2 * eta / (d * d + eta * eta));
  const Complex rho0 = Complex(0, Scalar(-0.5)) * p.omega1 * n0 / Complex(eta, -d);
  return {n0, rho0};
}

/// Linear (pump-free) response G n0 gamma_ba / (Delta + delta + i eta) with the
/// supplied n0; the Omega1 -> 0 limit of the full probe susceptibility.
template <typename Scalar>
std::complex<Scalar> linear_limit_chi(const PumpProbeParams<Scalar>& p, Scalar delta) {
  const auto z = zeroth_order(p);
  return p.gain_g * z.n0 * p.gamma_ba / std::complex<Scalar>(p.delta_pump + delta, p.eta());
}

namespace detail {

/// Cubic whose zeros are the probe-response poles, in the variable delta.
template <typename Scalar>
std::complex<Scalar> response_denominator(const PumpProbeParams<Scalar>& p, Scalar delta,
                                          Scalar* scale = nullptr) {
  using Complex = std::complex<Scalar>;
  const Scalar eta = p.eta();
  const Complex a(delta, p.theta());
  const Complex b(p.delta_pump + delta, eta);
  const Complex c(delta - p.delta_pump, eta);
  const Complex e(delta, eta);
  const Scalar o2 = p.omega1 * p.omega1;
  if (scale) *scale = std::abs(a) * std::abs(b) * std::abs(c) + o2 * std::abs(e);
  return a * b * c - o2 * e;
}

}  // namespace detail

/// Closed-form probe susceptibility with an explicit zeroth-order inversion.
/// The expression is linear in n0; every other quantity comes from `p`.
template <typename Scalar>
std::complex<Scalar> probe_chi_closed(const PumpProbeParams<Scalar>& p, Scalar delta, Scalar n0) {
  p.validate();
  detail::require_finite(delta, "delta");
  using Complex = std::complex<Scalar>;
  const Scalar eta = p.eta();
  const Scalar d = p.delta_pump;
  const Scalar o2 = p.omega1 * p.omega1;

  Scalar scale{};
  const Complex den = detail::response_denominator(p, delta, &scale);
  if (!(std::abs(den) >= Scalar(1e-12) * scale))
    throw PoleOnRealAxis("probe response denominator vanishes at delta = " +
                         std::to_string(double(delta)) + " rad/s");

  const Complex coupling = (o2 / Scalar(2)) * Complex(delta, Scalar(2) * eta) *
                           Complex(delta - d, eta) / (Complex(d, -eta) * den);
  return p.gain_g * n0 * p.gamma_ba / Complex(d + delta, eta) * (Scalar(1) - coupling);
}

template <typename Scalar>
std::complex<Scalar> probe_chi_closed(const PumpProbeParams<Scalar>& p, Scalar delta) {
  return probe_chi_closed(p, delta, zeroth_order(p).n0);
}

template <typename Scalar>
struct ProbeSolution {
  std::complex<Scalar> chi;
  HarmonicState<Scalar> state;
};

/// Probe susceptibility from the first-order harmonic-balance equations.
///
/// Unknowns (rho1, conj(rho_m1), n1):
///   [eta - i(Delta+delta)] rho1          = -(i/2)(Omega1 n1 + Omega2 n0)
///   [eta + i(Delta-delta)] conj(rho_m1)  = +(i/2) Omega1 n1
///   (theta - i delta) n1 = i Omega1 conj(rho_m1) - i Omega1 rho1 + i Omega2 conj(rho0)
/// and chi = 2 G gamma_ba rho1 / Omega2. The system is linear in Omega2, so the
/// result does not depend on the value used.
template <typename Scalar>
ProbeSolution<Scalar> probe_chi_solve(const PumpProbeParams<Scalar>& p, Scalar delta,
                                      Scalar omega2 = Scalar(1)) {
  p.validate();
  detail::require_finite(delta, "delta");
  detail::require_positive(omega2, "omega2");
  using Complex = std::complex<Scalar>;
  using Matrix3c = Eigen::Matrix<Complex, 3, 3>;
  using Vector3c = Eigen::Matrix<Complex, 3, 1>;
  const Complex i(0, 1);
  const Scalar eta = p.eta();
  const Scalar theta = p.theta();
  const Scalar d = p.delta_pump;
  const Scalar o1 = p.omega1;
  const auto zero = zeroth_order(p);

  Matrix3c m;
  m << Complex(eta, -(d + delta)), Complex(0), i * (o1 / Scalar(2)),
       Complex(0), Complex(eta, d - delta), -i * (o1 / Scalar(2)),
       i * o1, -i * o1, Complex(theta, -delta);
  Vector3c rhs;
  rhs << -i * (omega2 / Scalar(2)) * zero.n0, Complex(0), i * omega2 * std::conj(zero.rho_ba_0);

  const Eigen::FullPivLU<Matrix3c> lu(m);
  const Scalar row_scale = m.row(0).norm() * m.row(1).norm() * m.row(2).norm();
  const Scalar det = std::abs(lu.determinant());
  using std::isfinite;
  if (!isfinite(det) || !(det > Scalar(1e-14) * row_scale))
    throw SingularSystem("harmonic-balance system is numerically singular");
  const Vector3c x = lu.solve(rhs);

  HarmonicState<Scalar> s;
  s.rho_ba_p1 = x(0);
  s.rho_ba_m1 = std::conj(x(1));
  s.n1 = x(2);
  // e^{+i delta t} balance of the inversion equation, solved independently.
  s.n_m1 = (i * o1 * std::conj(s.rho_ba_p1) - i * o1 * s.rho_ba_m1 - i * omega2 * zero.rho_ba_0) /
           Complex(theta, delta);
  const Scalar r0 = std::abs(zero.rho_ba_0);
  s.perturbation_ratio = r0 > Scalar(0) ? std::abs(s.rho_ba_p1) / r0
                                        : std::numeric_limits<Scalar>::infinity();
  return {Scalar(2) * p.gain_g * p.gamma_ba * s.rho_ba_p1 / omega2, s};
}

template <typename Scalar>
struct TimeDomainOptions {
  Scalar omega2{};       // probe Rabi frequency; 0 selects 1e-4 max(Omega1, eta)
  Scalar dt{};           // 0 selects 0.02 / fastest rate
  int n_settle = 30;     // characteristic times 1/min(theta, eta) before projecting
  int n_project = 16;    // probe periods projected, split into two comparison windows
};

template <typename Scalar>
struct TimeDomainResult {
  std::complex<Scalar> chi;
  Scalar window_disagreement{};  // relative difference between the two projection windows
  Scalar trace_drift{};
  long steps{};
};

/// Brute-force probe susceptibility: integrate the density-matrix equations
/// from the ground state with both fields on, wait for the transient to die,
/// then project rho_ba(t) onto e^{-i delta t} over whole probe periods.
template <typename Scalar>
TimeDomainResult<Scalar> probe_chi_timedomain(const PumpProbeParams<Scalar>& p, Scalar delta,
                                              TimeDomainOptions<Scalar> opt = {}) {
  p.validate();
  detail::require_finite(delta, "delta");
  if (delta == Scalar(0))
    throw ValidationError("time-domain projection needs a nonzero probe detuning");
  if (opt.n_settle < 1) throw ValidationError("n_settle must be >= 1");
  if (opt.n_project < 2 || opt.n_project % 2 != 0)
    throw ValidationError("n_project must be an even count >= 2");

  using std::abs;
  using Complex = std::complex<Scalar>;
  using State = Eigen::Matrix<Scalar, 4, 1>;  // rho_aa, rho_bb, Re rho_ba, Im rho_ba
  const Scalar eta = p.eta();
  const Scalar theta = p.theta();
  const Scalar pump_scale = std::max(p.omega1, eta);
  if (opt.omega2 == Scalar(0)) opt.omega2 = Scalar(1e-4) * pump_scale;
  detail::require_positive(opt.omega2, "omega2");
  if (opt.omega2 > Scalar(1e-3) * pump_scale)
    throw ValidationError("omega2 too large for the first-order probe regime");

  const Scalar fastest = std::max({p.gamma_parallel, p.gamma_ba, p.r_op, eta, theta,
                                   effective_rabi(p), abs(delta)});
  if (opt.dt == Scalar(0)) opt.dt = Scalar(0.02) / fastest;
  detail::require_positive(opt.dt, "dt");
  if (!(opt.dt * fastest < Scalar(0.05)))
    throw ValidationError("time step too large: dt * fastest rate must be < 0.05");

  // Whole number of steps per probe period so the projection is exact trapezoid.
  const Scalar period = Scalar(2) * std::numbers::pi_v<Scalar> / abs(delta);
  const long per_period = static_cast<long>(std::ceil(period / opt.dt));
  const Scalar h = period / Scalar(per_period);
  const long settle_steps =
      static_cast<long>(std::ceil(Scalar(opt.n_settle) / std::min(theta, eta) / h));
  const long window_steps = per_period * (opt.n_project / 2);

  const Scalar d = p.delta_pump;
  const Scalar o1 = p.omega1;
  const Scalar o2 = opt.omega2;
  const auto rhs = [&](Scalar t, const State& y) -> State {
    const Complex field = o1 + o2 * std::exp(Complex(0, -delta * t));
    const Complex rho_ba(y(2), y(3));
    const Scalar inversion = y(1) - y(0);
    const Complex drho = -Complex(eta, -d) * rho_ba - Complex(0, Scalar(0.5)) * field * inversion;
    // (i/2)(field rho_ab - conj(field) rho_ba) = -Im(field conj(rho_ba))
    const Scalar exchange = -std::imag(field * std::conj(rho_ba));
    const Scalar pump = p.r_op * y(0) - p.gamma_parallel * y(1);
    State dy;
    dy << -pump - exchange, pump + exchange, drho.real(), drho.imag();
    return dy;
  };

  State y(1, 0, 0, 0);
  long step = 0;
  for (; step < settle_steps; ++step) y = rk4_step(rhs, Scalar(step) * h, y, h);

  std::array<Complex, 2> windows{};
  Scalar drift{};
  for (auto& acc : windows) {
    for (long k = 0; k < window_steps; ++k, ++step) {
      const Scalar t = Scalar(step) * h;
      acc += Complex(y(2), y(3)) * std::exp(Complex(0, delta * t));
      y = rk4_step(rhs, t, y, h);
    }
    acc /= Scalar(window_steps);
    drift = std::max(drift, abs(y(0) + y(1) - Scalar(1)));
  }
  if (drift > Scalar(1e-9)) throw NumericalError("density-matrix trace drifted by " + std::to_string(double(drift)));

  const Complex rho1 = (windows[0] + windows[1]) / Scalar(2);
  const Scalar disagreement = abs(windows[1] - windows[0]) / abs(rho1);
  if (!(disagreement <= Scalar(1e-3)))
    throw NonConvergence("time-domain projection windows disagree by " +
                         std::to_string(double(disagreement)));
  return {Scalar(2) * p.gain_g * p.gamma_ba * rho1 / o2, disagreement, drift, step};
}

template <typename Scalar>
struct ResponsePoles {
  std::array<std::complex<Scalar>, 3> roots;  // sorted by (imag, real)
  bool stable{};                              // all poles strictly in the lower half plane
};

/// Zeros of (delta + i theta)(Delta + delta + i eta)(delta - Delta + i eta) - Omega1^2 (delta + i eta).
///
/// Solved in u = delta + i eta, where the cubic reads
///   u^3 + i kappa u^2 - (Delta^2 + Omega1^2) u - i kappa Delta^2,  kappa = theta - eta,
/// via the companion matrix plus Newton polishing; when the constant term
/// vanishes u = 0 is deflated and the quadratic is solved directly.
template <typename Scalar>
ResponsePoles<Scalar> response_poles(const PumpProbeParams<Scalar>& p) {
  p.validate();
  using Complex = std::complex<Scalar>;
  const Scalar eta = p.eta();
  const Scalar kappa = p.theta() - eta;
  const Scalar d2 = p.delta_pump * p.delta_pump;
  const Complex a2(0, kappa);
  const Complex a1(-(d2 + p.omega1 * p.omega1), 0);
  const Complex a0(0, -kappa * d2);

  std::array<Complex, 3> u{};
  if (a0 == Complex(0)) {
    // u^2 + a2 u + a1 = 0, cancellation-free form
    const Complex root_disc = std::sqrt(a2 * a2 - Scalar(4) * a1);
    const Complex sum = std::real(std::conj(a2) * root_disc) >= Scalar(0) ? a2 + root_disc
                                                                           : a2 - root_disc;
    const Complex q = -sum / Scalar(2);
    u = {Complex(0), q, q == Complex(0) ? Complex(0) : a1 / q};
  } else {
    Eigen::Matrix<Complex, 3, 3> companion;
    companion << Complex(0), Complex(0), -a0,
                 Complex(1), Complex(0), -a1,
                 Complex(0), Complex(1), -a2;
    const Eigen::ComplexEigenSolver<Eigen::Matrix<Complex, 3, 3>> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericalError("companion eigen-solve failed");
    const auto poly = [&](Complex z) { return ((z + a2) * z + a1) * z + a0; };
    const auto dpoly = [&](Complex z) { return (Scalar(3) * z + Scalar(2) * a2) * z + a1; };
    for (int k = 0; k < 3; ++k) {
      Complex z = solver.eigenvalues()(k);
      for (int it = 0; it < 3; ++it) {
        const Complex slope = dpoly(z);
        if (slope == Complex(0)) break;
        const Complex next = z - poly(z) / slope;
        if (!(std::abs(poly(next)) < std::abs(poly(z)))) break;
        z = next;
      }
      u[k] = z;
    }
  }

  ResponsePoles<Scalar> out;
  for (int k = 0; k < 3; ++k) out.roots[k] = u[k] - Complex(0, eta);
  std::sort(out.roots.begin(), out.roots.end(), [](const Complex& l, const Complex& r) {
    return l.imag() != r.imag() ? l.imag() < r.imag() : l.real() < r.real();
  });
  out.stable = std::all_of(out.roots.begin(), out.roots.end(),
                           [](const Complex& z) { return z.imag() < Scalar(0); });
  return out;
}

/// Closed-form probe spectrum on a uniform grid, ready for the KK engine.
template <typename Scalar>
SampledSpectrum<Scalar> spectrum_sweep(const PumpProbeParams<Scalar>& p,
                                       const UniformGrid<Scalar>& grid) {
  grid.validate();
  const Scalar n0 = zeroth_order(p).n0;
  SampledSpectrum<Scalar> s{grid, VectorX<Scalar>(grid.count), VectorX<Scalar>(grid.count),
                            TailExponents{1, 2}};
  for (Eigen::Index i = 0; i < grid.count; ++i) {
    const auto chi = probe_chi_closed(p, grid.point(i), n0);
    s.chi_prime(i) = chi.real();
    s.chi_double_prime(i) = chi.imag();
  }
  return s;
}

}  // namespace lasekk
