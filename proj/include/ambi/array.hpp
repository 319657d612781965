#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ambi/sh.hpp"

namespace ambi {

constexpr double kSpeedOfSound = 343.0;  // m/s

inline double wavenumber(double freq_hz) {
  return 2.0 * kPi * freq_hz / kSpeedOfSound;
}

enum class ArrayKind { Spherical, Circular, Semicircular, Custom };

struct MicPosition {
  double r = 0.0;  // meters from origin
  Direction dir;
};

/// M microphones on or around a rigid sphere of radius `scatterer_radius`.
struct ArrayGeometry {
  std::vector<MicPosition> mics;
  double scatterer_radius = 0.0;
  ArrayKind kind = ArrayKind::Custom;

  int num_mics() const { return static_cast<int>(mics.size()); }
};

/// Canonical 4-ish mic layouts from the simulation study: spherical mics
/// maximally spread on the sphere (tetrahedron for M=4), circular mics
/// uniform on the equator, semicircular mics uniform on the closed
/// half-equator arc [0, pi].
ArrayGeometry make_array(ArrayKind kind, int num_mics, double radius);

/// Per-frequency SH-domain steering matrix, (N_v+1)^2 x M.
struct ShSteeringMatrix {
  double freq_hz = 0.0;
  int order = 0;
  MatrixXcd entries;
};

/// Per-frequency space-domain steering matrix, M x Q over a direction grid.
struct SteeringMatrix {
  double freq_hz = 0.0;
  MatrixXcd entries;
  const SamplingGrid* grid = nullptr;
};

/// Rigid-sphere modal weight for a unit plane wave arriving from a
/// direction (e^{-i omega t} time convention, outgoing h_n^(1)):
///   b_n = 4 pi (-i)^n (j_n(kr) - j_n'(ka)/h_n'(ka) h_n(kr));
/// pass a = 0 for the free-field variant 4 pi (-i)^n j_n(kr).
Complex radial_response(int n, double k, double r, double a);

/// Pressure on/near a rigid sphere of radius a due to a unit plane wave,
/// evaluated by the scattering series over Legendre polynomials up to
/// `order`. cos_gamma is the cosine of the angle between the observation
/// point and the wave's arrival direction.
Complex rigid_sphere_pressure(double k, double r, double a, double cos_gamma,
                              int order);

/// Steering order large enough that the b_n tail is below numerical floor:
/// min(ceil(e*ka/2) + 8, kMaxOrder).
int auto_order(double freq_hz, double radius);

/// SH-domain steering: entry (acn(n,m), i) = b_n(k; r_i, a) Y_nm*(mic_i).
ShSteeringMatrix steering_sh(const ArrayGeometry& geom, double freq_hz,
                             int order);

/// Space-domain steering V = V_nm^T Y^T over the grid. An explicitly
/// requested order needs Q >= (order+1)^2; the automatic order is clamped
/// to what the grid supports.
SteeringMatrix steering_matrix(const ArrayGeometry& geom,
                               const SamplingGrid& grid, double freq_hz,
                               std::optional<int> order = std::nullopt);

/// Plain-text geometry table: header with scatterer radius, one row per mic
/// (r, theta, phi in SI units / radians).
void save_geometry(const ArrayGeometry& geom, const std::string& path);
ArrayGeometry load_geometry(const std::string& path);

}  // namespace ambi
