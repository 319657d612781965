#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ambi {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

/// Plane-wave or microphone direction in spherical coordinates.
/// theta is colatitude in [0, pi], phi is azimuth normalized to [0, 2*pi).
struct Direction {
  double theta = 0.0;
  double phi = 0.0;

  Direction() = default;
  Direction(double theta_, double phi_);
};

/// Angle between two directions, in [0, pi].
double angle_between(const Direction& a, const Direction& b);

/// Spherical-harmonic channel (n, m) with its ACN linear index n^2 + n + m.
struct ChannelIndex {
  int n = 0;
  int m = 0;

  ChannelIndex() = default;
  ChannelIndex(int n_, int m_);

  int acn() const { return n * n + n + m; }
  static ChannelIndex from_acn(int acn);
  bool operator==(const ChannelIndex&) const = default;
};

/// Number of SH channels for orders 0..order.
inline int num_channels(int order) { return (order + 1) * (order + 1); }

enum class GridKind { GaussLegendre, Fibonacci };

/// Q directions on the sphere with quadrature weights summing to 4*pi.
struct SamplingGrid {
  std::vector<Direction> directions;
  VectorXd weights;
  GridKind kind = GridKind::Fibonacci;
  /// Highest order the grid is alias-free for; -1 if none is claimed.
  int alias_free_order = -1;

  int size() const { return static_cast<int>(directions.size()); }
};

/// Equiangular-azimuth x Gauss-Legendre-colatitude grid with 2*(N+1)^2
/// points; quadrature is exact for SH products up to order N.
SamplingGrid make_gauss_legendre_grid(int order);

/// Near-uniform golden-angle spiral of `count` points with equal weights.
SamplingGrid make_fibonacci_grid(int count);

/// Fibonacci grid declared alias-free at `order`; rejects count < (N+1)^2.
SamplingGrid make_fibonacci_grid(int count, int order);

/// Complex orthonormal spherical harmonic Y_nm(theta, phi) with
/// Condon-Shortley phase.
Complex sh_eval(const ChannelIndex& idx, const Direction& dir);

/// Q x (N+1)^2 matrix, entry (q, acn(n,m)) = Y_nm at grid direction q.
MatrixXcd sh_matrix(const SamplingGrid& grid, int order);

/// Same layout for an arbitrary direction list.
MatrixXcd sh_matrix(const std::vector<Direction>& dirs, int order);

/// Signed permutation T with entry (acn(n,m), acn(n,-m)) = (-1)^m, so that
/// Y^T = T * Y^H for any direction set. Symmetric and self-inverse.
Eigen::MatrixXd conjugation_matrix(int order);

/// Legendre polynomial P_n(x), x in [-1, 1].
double legendre_p(int n, double x);

}  // namespace ambi
