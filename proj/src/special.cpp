#include "ambi/special.hpp"

#include <cmath>
#include <stdexcept>

namespace ambi {

namespace {

void check_args(int n, double x) {
  if (n < 0 || n > kMaxOrder) {
    throw std::out_of_range("spherical_radial: order outside [0, 40]");
  }
  if (!(x > 0.0)) {
    throw std::out_of_range("spherical_radial: argument must be positive");
  }
}

}  // namespace

double spherical_bessel_j(int n, double x) {
  check_args(n, x);
  return std::sph_bessel(static_cast<unsigned>(n), x);
}

double spherical_bessel_j_deriv(int n, double x) {
  check_args(n, x);
  if (n == 0) return -std::sph_bessel(1, x);
  // f_n' = f_{n-1} - (n+1)/x * f_n, valid for j and y alike
  return std::sph_bessel(n - 1, x) - (n + 1.0) / x * std::sph_bessel(n, x);
}

std::complex<double> spherical_hankel(int n, double x) {
  check_args(n, x);
  return {std::sph_bessel(static_cast<unsigned>(n), x),
          std::sph_neumann(static_cast<unsigned>(n), x)};
}

std::complex<double> spherical_hankel_deriv(int n, double x) {
  check_args(n, x);
  if (n == 0) return -spherical_hankel(1, x);
  return spherical_hankel(n - 1, x) -
         (n + 1.0) / x * spherical_hankel(n, x);
}

std::complex<double> spherical_radial(int n, double x, RadialKind which) {
  switch (which) {
    case RadialKind::BesselJ:
      return spherical_bessel_j(n, x);
    case RadialKind::BesselJDeriv:
      return spherical_bessel_j_deriv(n, x);
    case RadialKind::Hankel:
      return spherical_hankel(n, x);
    case RadialKind::HankelDeriv:
      return spherical_hankel_deriv(n, x);
  }
  throw std::invalid_argument("spherical_radial: unknown kind");
}

}  // namespace ambi
