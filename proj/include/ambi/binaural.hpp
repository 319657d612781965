#pragma once

#include <string>
#include <vector>

#include "ambi/encoding.hpp"
#include "ambi/sh.hpp"

namespace ambi {

/// Default analytic head: rigid sphere with ears on the horizontal plane.
constexpr double kDefaultHeadRadius = 0.0875;  // meters

Direction left_ear_direction();
Direction right_ear_direction();

/// Space-domain HRTF sampled over a direction grid, one vector per ear.
struct HrtfSamples {
  double freq_hz = 0.0;
  const SamplingGrid* grid = nullptr;
  VectorXcd left;
  VectorXcd right;
};

/// SH-domain HRTF coefficients up to order N_h, one vector per ear.
struct HrtfSh {
  double freq_hz = 0.0;
  int order = 0;
  VectorXcd left;
  VectorXcd right;
};

/// Per-frequency HRTF coefficient sets sharing one order.
struct HrtfSet {
  int order = 0;
  std::vector<HrtfSh> entries;
};

struct BinauralPair {
  Complex left;
  Complex right;
};

/// Rigid-sphere head model: surface pressure at each ear for unit plane
/// waves from the grid directions (unit free-field pressure at the origin).
HrtfSamples sphere_hrtf(double head_radius, const SamplingGrid& grid,
                        double freq_hz);

/// Single-ear variant for an arbitrary ear position on the sphere surface.
VectorXcd sphere_hrtf_ear(double head_radius, const Direction& ear,
                          const SamplingGrid& grid, double freq_hz);

/// Forward SH transform h_nm = Y^H diag(w) h; the grid must be a
/// Gauss-Legendre grid alias-free at the requested order.
HrtfSh hrtf_to_sh(const HrtfSamples& samples, int order);

/// Ambisonics rendering p = h_nm^T T^N a_nm per ear; HRTF and signal are
/// truncated or zero-padded to the common order.
BinauralPair render_ambisonics(const HrtfSh& hrtf, const VectorXcd& ambisonics,
                               int order);

/// Decomposed rendering p = (h_ASM)^T T^{N_a} a_hat + (h_RES)^T T^RES r.
/// The HRTF must cover the partition's full order.
BinauralPair render_decomposed(const HrtfSh& hrtf,
                               const ChannelPartition& partition,
                               const VectorXcd& ambisonics,
                               const VectorXcd& residual);

/// Conjugation matrix restricted to the residual rows/columns of a
/// partition (closed under m -> -m, so itself a signed permutation).
Eigen::MatrixXd residual_conjugation(const ChannelPartition& partition);

/// Plain-text HRTF coefficient format: header (order, frequency count),
/// then per frequency per ear the (N_h+1)^2 coefficients in ACN order as
/// re,im pairs. Round-trips bit-identically.
void save_hrtf(const HrtfSet& set, const std::string& path);
HrtfSet load_hrtf(const std::string& path);

}  // namespace ambi
