#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lasekk/medium.hpp"
#include "support.hpp"

using namespace lasekk;

namespace {
const double kTwoPi = 2 * std::numbers::pi;
const MediumParamsd kFig1{kTwoPi * 1e9, kTwoPi * 3.8e14, 3.0 / 3.8e8};
}  // namespace

TEST_CASE("line center, unsaturated: pure gain of magnitude G") {
  const auto chi = susceptibility(kFig1, 0.0, 0.0);
  CHECK(chi.chi_prime == 0.0);
  CHECK(chi.chi_double_prime == doctest::Approx(-kFig1.gain_g).epsilon(1e-15));
}

TEST_CASE("half-maximum of the gain line sits at x = Gamma/2") {
  const double g = kFig1.gamma_medium;
  const auto chi = susceptibility(kFig1, g / 2, 0.0);
  CHECK(chi.chi_double_prime == doctest::Approx(-kFig1.gain_g / 2).epsilon(1e-14));
  // dispersion peaks there too
  CHECK(chi.chi_prime == doctest::Approx(kFig1.gain_g / 2).epsilon(1e-14));
}

TEST_CASE("property: chi'/chi'' = -2x/Gamma and saturation only shrinks the response") {
  testing::Gen gen(11);
  for (int k = 0; k < 500; ++k) {
    const MediumParamsd m{gen.log_uniform(1e5, 1e12), 1e15, gen.log_uniform(1e-9, 1.0)};
    const double x = gen.uniform(-10, 10) * m.gamma_medium;
    const double w = gen.log_uniform(1e-4, 1e2) * m.gamma_medium * m.gamma_medium;
    const auto a = susceptibility(m, x, 0.0);
    const auto b = susceptibility(m, x, w);
    CHECK(a.chi_double_prime < 0);
    if (x != 0) CHECK(testing::rel(a.chi_prime / a.chi_double_prime, -2 * x / m.gamma_medium) < 1e-13);
    CHECK(std::abs(b.chi_double_prime) < std::abs(a.chi_double_prime));
    CHECK(std::abs(b.chi_prime) <= std::abs(a.chi_prime));
    // symmetry in detuning
    const auto c = susceptibility(m, -x, w);
    CHECK(c.chi_double_prime == b.chi_double_prime);
    CHECK(c.chi_prime == -b.chi_prime);
  }
}

TEST_CASE("dispersion slope matches a centered finite difference") {
  testing::Gen gen(5);
  for (int k = 0; k < 200; ++k) {
    const MediumParamsd m{gen.log_uniform(1e6, 1e10), 1e15, gen.log_uniform(1e-6, 1.0)};
    const double x = gen.uniform(-3, 3) * m.gamma_medium;
    const double h = 1e-5 * m.gamma_medium;
    const double fd = (susceptibility(m, x + h, 0.0).chi_prime - susceptibility(m, x - h, 0.0).chi_prime) / (2 * h);
    const double scale = m.gain_g / m.gamma_medium;
    CHECK(std::abs(unsaturated_dispersion_slope(m, x) - fd) < 1e-8 * scale);
  }
}

TEST_CASE("microscopic coupling: xi = p^2/(hbar^2 Gamma), G = hbar N xi / eps0, Omega^2 = Gamma E^2 xi") {
  const long double hbar = 1.054571817e-34L, eps0 = 8.8541878128e-12L;
  const long double n = 1e17L, p = 2.5e-29L, gamma = 6.283185307179586e8L;
  const long double xi = p * p / (hbar * hbar * gamma);
  const auto c = derive_coupling<double>(double(n), double(p), double(gamma));
  CHECK(testing::rel(c.xi, double(xi)) < 1e-14);
  CHECK(testing::rel(c.gain_g, double(hbar * n * xi / eps0)) < 1e-14);
  const double field = 3e3;
  CHECK(testing::rel(c.rabi_sq(field), double(gamma * field * field * xi)) < 1e-14);

  // G ties to the same quantity written as N p^2 / (eps0 hbar Gamma)
  CHECK(testing::rel(c.gain_g, double(n * p * p / (eps0 * hbar * gamma))) < 1e-14);

  const auto m = MediumParamsd::from_microscopic(double(n), double(p), double(gamma), 1e15);
  CHECK(m.gain_g == c.gain_g);
}

TEST_CASE("single precision does not underflow in the coupling") {
  const auto c = derive_coupling<float>(1e17f, 2.5e-29f, 6.2831853e8f);
  CHECK(std::isfinite(c.xi));
  CHECK(c.gain_g > 0);
  const auto ref = derive_coupling<double>(1e17, 2.5e-29, 6.2831853e8);
  CHECK(testing::rel(double(c.gain_g), ref.gain_g) < 1e-5);
}

TEST_CASE("long double instantiation agrees with double") {
  const MediumParams<long double> m{6.283185307179586e9L, 2.4e15L, 7.9e-9L};
  const auto a = susceptibility(m, 1.3e9L, 2e18L);
  const auto b = susceptibility(MediumParamsd{double(m.gamma_medium), double(m.nu0), double(m.gain_g)}, 1.3e9, 2e18);
  CHECK(testing::rel(double(a.chi_double_prime), b.chi_double_prime) < 1e-15);
  CHECK(testing::rel(double(a.chi_prime), b.chi_prime) < 1e-15);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS((MediumParamsd{-1, 1, 1}.validate()), ValidationError);
  CHECK_THROWS_AS((MediumParamsd{1, 1, 0}.validate()), ValidationError);
  CHECK_THROWS_AS(susceptibility(kFig1, std::nan(""), 0.0), ValidationError);
  CHECK_THROWS_AS(susceptibility(kFig1, 0.0, -1.0), ValidationError);
  CHECK_THROWS_AS(derive_coupling(0.0, 1e-29, 1e9), ValidationError);
}
