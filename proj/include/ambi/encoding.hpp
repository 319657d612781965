#pragma once

#include <string>
#include <vector>

#include "ambi/array.hpp"
#include "ambi/sh.hpp"

namespace ambi {

/// Output channel of a filter bank: an Ambisonics channel, a residual
/// channel (orders above N_a), or one ear of a binaural renderer.
struct ChannelLabel {
  enum class Kind { Ambisonic, Residual, EarLeft, EarRight };
  Kind kind = Kind::Ambisonic;
  ChannelIndex idx;

  std::string to_string() const;
  static ChannelLabel parse(const std::string& text);
  bool operator==(const ChannelLabel&) const = default;
};

/// Per-frequency complex filters mapping M microphone signals to output
/// channels; output channel j is entries.col(j)^H * x.
struct FilterBank {
  double freq_hz = 0.0;
  MatrixXcd entries;  // M x C
  std::vector<ChannelLabel> labels;
  double lambda = 0.0;  // sigma_n^2 / sigma_s^2

  int num_mics() const { return static_cast<int>(entries.rows()); }
  int num_channels() const { return static_cast<int>(entries.cols()); }
};

inline double snr_to_lambda(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

/// Regularized least-squares encoding filters, one column per target:
/// C = (V V^H + lambda I)^{-1} V Y. Solved by LDLT of the regularized Gram
/// matrix; with lambda = 0 an SVD route is used and rank deficiency is an
/// error naming the deficient rank.
MatrixXcd regularized_solve(const MatrixXcd& steering, const MatrixXcd& targets,
                            double lambda);

/// Ambisonics signal-matching filters for all channels up to the order of
/// `sh_targets` (Q x (N_a+1)^2 target SH matrix on the steering grid).
/// (N_a+1)^2 > M violates the sampling condition and only warns.
FilterBank asm_filters(const SteeringMatrix& steering,
                       const MatrixXcd& sh_targets, double snr_db);

/// Applies a bank to one microphone snapshot: output_j = col_j^H x.
VectorXcd apply_filters(const FilterBank& bank, const VectorXcd& mic_signals);

/// SH-domain truncated pseudo-inverse encoder,
///   a_hat = T V_nm^* (V_nm^T T^T T V_nm^*)^{-1} x,
/// truncated to output orders <= N_a. Requires (N_v+1)^2 >= M.
FilterBank truncated_sh_encoder(const ShSteeringMatrix& steering_sh,
                                int ambisonics_order);

/// Null-space encodability of a target pattern, in dB:
///   10 log10(||P_null y||^2 / ||y||^2),
/// where the null space of V^T is taken across left singular vectors with
/// sigma < rank_tol * sigma_max. Clamped below at -200 dB.
double encodability(const SteeringMatrix& steering, const VectorXcd& target,
                    double rank_tol = 1e-6);

/// Ambisonic channels (orders 0..N_a) and residual channels (N_a+1..N_h).
struct ChannelPartition {
  int ambisonics_order = 0;
  int full_order = 0;
  std::vector<ChannelIndex> ambisonic;
  std::vector<ChannelIndex> residual;
};

ChannelPartition channel_partition(int ambisonics_order, int full_order);

/// Residual-channel filters r = (Y_res)^H V^H (V V^H + lambda I)^{-1} x,
/// one column per residual channel in `partition`.
FilterBank residual_filters(const SteeringMatrix& steering,
                            const MatrixXcd& sh_residual_targets,
                            const ChannelPartition& partition, double snr_db);

/// Binaural signal-matching filters, one column per ear; `gain_left/right`
/// are the reference space-domain HRTF gains over the steering grid.
FilterBank bsm_filters(const SteeringMatrix& steering,
                       const VectorXcd& gain_left, const VectorXcd& gain_right,
                       double snr_db);

/// Structured-text filter bank format, round-trip stable to 1e-15.
void save_filter_bank(const FilterBank& bank, const std::string& path);
FilterBank load_filter_bank(const std::string& path);

}  // namespace ambi
