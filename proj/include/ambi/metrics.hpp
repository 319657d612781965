#pragma once

#include <cstdint>

#include "ambi/array.hpp"
#include "ambi/sh.hpp"

namespace ambi {

/// Diffuse-field model: uncorrelated equal-power plane waves over a
/// near-uniform direction set, with white microphone noise.
struct DiffuseModel {
  const SamplingGrid* grid = nullptr;
  double sigma_s2 = 1.0;
  double sigma_n2 = 0.01;  // 20 dB SNR

  static DiffuseModel from_snr(const SamplingGrid& grid, double snr_db);
};

struct NmseResult {
  double value_db = 0.0;
  double mismatch_energy = 0.0;  // sigma_s^2 ||V^H c - y||^2
  double noise_energy = 0.0;     // sigma_n^2 ||c||^2
  double denominator = 0.0;      // sigma_s^2 ||y||^2
};

/// Closed-form diffuse-field NMSE of one encoding filter against its SH
/// target pattern over the model grid. Clamped below at -200 dB.
NmseResult nmse_ambisonics(const SteeringMatrix& steering,
                           const VectorXcd& filter, const VectorXcd& target,
                           const DiffuseModel& model);

/// Closed-form binaural NMSE of a per-ear rendering filter w against the
/// reference gains d (p = d^T s, p_hat = w^H x); both ears pooled.
NmseResult nmse_binaural(const SteeringMatrix& steering,
                         const VectorXcd& w_left, const VectorXcd& w_right,
                         const VectorXcd& d_left, const VectorXcd& d_right,
                         const DiffuseModel& model);

struct McNmseResult : NmseResult {
  double stderr_db = 0.0;
  int trials = 0;
};

/// Monte Carlo oracle for the closed forms: draws circular complex Gaussian
/// source and noise vectors, forms x = V s + n, and accumulates the
/// empirical NMSE of filters^H x against targets^H s. Column c of `targets`
/// is the reference combining vector of output channel c. Deterministic for
/// a fixed seed.
McNmseResult monte_carlo_nmse(const SteeringMatrix& steering,
                              const MatrixXcd& filters,
                              const MatrixXcd& targets,
                              const DiffuseModel& model, int trials,
                              uint64_t seed);

}  // namespace ambi
