#pragma once

#include <complex>

namespace ambi {

/// Hard cap on special-function and steering order.
constexpr int kMaxOrder = 40;

enum class RadialKind { BesselJ, Hankel, BesselJDeriv, HankelDeriv };

/// Spherical Bessel j_n, spherical Hankel h_n of the first kind, or their
/// derivatives. Requires x > 0 and 0 <= n <= kMaxOrder.
std::complex<double> spherical_radial(int n, double x, RadialKind which);

double spherical_bessel_j(int n, double x);
double spherical_bessel_j_deriv(int n, double x);
std::complex<double> spherical_hankel(int n, double x);
std::complex<double> spherical_hankel_deriv(int n, double x);

}  // namespace ambi
