#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ambi/special.hpp"

using namespace ambi;

TEST_CASE("closed forms at n = 0") {
  CHECK(spherical_bessel_j(0, 1.0) == doctest::Approx(std::sin(1.0)));

  // h_0(x) = -i e^{ix} / x
  const std::complex<double> h0 = spherical_hankel(0, 1.0);
  const std::complex<double> expected =
      std::complex<double>(0, -1) * std::exp(std::complex<double>(0, 1.0));
  CHECK(std::abs(h0 - expected) < 1e-14);
  CHECK(h0.real() == doctest::Approx(0.8414710).epsilon(1e-6));
  CHECK(h0.imag() == doctest::Approx(-0.5403023).epsilon(1e-6));
}

TEST_CASE("Wronskian j_n h_n' - j_n' h_n = i/x^2") {
  for (int n = 0; n <= 40; ++n) {
    for (double x : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 25.0, 50.0}) {
      const std::complex<double> w =
          spherical_bessel_j(n, x) * spherical_hankel_deriv(n, x) -
          spherical_bessel_j_deriv(n, x) * spherical_hankel(n, x);
      const std::complex<double> expected(0.0, 1.0 / (x * x));
      CHECK(std::abs(w - expected) <= 1e-8 * std::abs(expected));
    }
  }
}

TEST_CASE("range checks") {
  CHECK_THROWS_AS(spherical_bessel_j(41, 1.0), std::out_of_range);
  CHECK_THROWS_AS(spherical_bessel_j(-1, 1.0), std::out_of_range);
  CHECK_THROWS_AS(spherical_hankel(0, 0.0), std::out_of_range);
  CHECK_THROWS_AS(spherical_radial(0, -1.0, RadialKind::BesselJ),
                  std::out_of_range);
}

TEST_CASE("dispatch matches named functions") {
  CHECK(spherical_radial(3, 2.0, RadialKind::BesselJ).real() ==
        spherical_bessel_j(3, 2.0));
  CHECK(spherical_radial(3, 2.0, RadialKind::Hankel) ==
        spherical_hankel(3, 2.0));
  CHECK(spherical_radial(3, 2.0, RadialKind::BesselJDeriv).real() ==
        spherical_bessel_j_deriv(3, 2.0));
  CHECK(spherical_radial(3, 2.0, RadialKind::HankelDeriv) ==
        spherical_hankel_deriv(3, 2.0));
}
