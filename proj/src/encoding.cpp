#include "ambi/encoding.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace ambi {

std::string ChannelLabel::to_string() const {
  switch (kind) {
    case Kind::EarLeft:
      return "ear_left";
    case Kind::EarRight:
      return "ear_right";
    case Kind::Residual:
      return "res_" + std::to_string(idx.n) + "_" + std::to_string(idx.m);
    case Kind::Ambisonic:
      break;
  }
  return "amb_" + std::to_string(idx.n) + "_" + std::to_string(idx.m);
}

ChannelLabel ChannelLabel::parse(const std::string& text) {
  ChannelLabel label;
  if (text == "ear_left") {
    label.kind = Kind::EarLeft;
    return label;
  }
  if (text == "ear_right") {
    label.kind = Kind::EarRight;
    return label;
  }
  const bool residual = text.rfind("res_", 0) == 0;
  const bool ambisonic = text.rfind("amb_", 0) == 0;
  if (!residual && !ambisonic) {
    throw std::runtime_error("ChannelLabel: unrecognized label " + text);
  }
  label.kind = residual ? Kind::Residual : Kind::Ambisonic;
  const std::string rest = text.substr(4);
  const auto sep = rest.find('_');
  if (sep == std::string::npos) {
    throw std::runtime_error("ChannelLabel: malformed label " + text);
  }
  label.idx = ChannelIndex(std::stoi(rest.substr(0, sep)),
                           std::stoi(rest.substr(sep + 1)));
  return label;
}

MatrixXcd regularized_solve(const MatrixXcd& steering, const MatrixXcd& targets,
                            double lambda) {
  const auto m = steering.rows();
  const MatrixXcd rhs = steering * targets;
  if (lambda > 0.0) {
    MatrixXcd gram = steering * steering.adjoint();
    gram += lambda * MatrixXcd::Identity(m, m);
    return gram.ldlt().solve(rhs);
  }
  // lambda = 0: rank-checked SVD route
  Eigen::JacobiSVD<MatrixXcd> svd(steering,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd sigma = svd.singularValues();
  const double tol = 1e-12 * sigma(0);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol) ++rank;
  if (rank < m) {
    throw std::runtime_error(
        "regularized_solve: singular steering Gram matrix with lambda = 0 "
        "(rank " + std::to_string(rank) + " of " + std::to_string(m) + ")");
  }
  // (V V^H)^{-1} V = U Sigma^{-1} W^H
  return svd.matrixU() * sigma.cwiseInverse().asDiagonal() *
         svd.matrixV().adjoint() * targets;
}

FilterBank asm_filters(const SteeringMatrix& steering,
                       const MatrixXcd& sh_targets, double snr_db) {
  const int num_targets = static_cast<int>(sh_targets.cols());
  if (sh_targets.rows() != steering.entries.cols()) {
    throw std::invalid_argument("asm_filters: target/grid size mismatch");
  }
  if (num_targets > steering.entries.rows()) {
    std::cerr << "asm_filters: warning: " << num_targets
              << " channels from " << steering.entries.rows()
              << " microphones violates the sampling condition "
                 "(N_a+1)^2 <= M\n";
  }
  FilterBank bank;
  bank.freq_hz = steering.freq_hz;
  bank.lambda = snr_to_lambda(snr_db);
  bank.entries = regularized_solve(steering.entries, sh_targets, bank.lambda);
  bank.labels.reserve(num_targets);
  for (int c = 0; c < num_targets; ++c) {
    bank.labels.push_back({ChannelLabel::Kind::Ambisonic,
                           ChannelIndex::from_acn(c)});
  }
  return bank;
}

VectorXcd apply_filters(const FilterBank& bank, const VectorXcd& mic_signals) {
  if (mic_signals.size() != bank.entries.rows()) {
    throw std::invalid_argument("apply_filters: microphone count mismatch");
  }
  return bank.entries.adjoint() * mic_signals;
}

FilterBank truncated_sh_encoder(const ShSteeringMatrix& steering_sh,
                                int ambisonics_order) {
  const MatrixXcd& v = steering_sh.entries;
  const auto m = v.cols();
  if (v.rows() < m) {
    throw std::invalid_argument(
        "truncated_sh_encoder: requires (N_v+1)^2 >= M");
  }
  if (ambisonics_order > steering_sh.order) {
    throw std::invalid_argument(
        "truncated_sh_encoder: output order exceeds steering order");
  }
  const Eigen::MatrixXd t = conjugation_matrix(steering_sh.order);
  const MatrixXcd tv = t * v.conjugate();          // (N_v+1)^2 x M
  const MatrixXcd inner = v.transpose() * t.transpose() * tv;  // M x M

  // a_hat = (T V^*) inner^{+} x, rows truncated to orders <= N_a. A
  // pseudo-inverse with a relative threshold keeps the encoder defined at
  // low frequencies, where the inner matrix loses rank numerically.
  Eigen::JacobiSVD<MatrixXcd> svd(inner,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-13);
  const MatrixXcd encoder = tv * svd.solve(MatrixXcd::Identity(m, m));

  const int out_channels = num_channels(ambisonics_order);
  FilterBank bank;
  bank.freq_hz = steering_sh.freq_hz;
  bank.lambda = 0.0;
  bank.entries = encoder.topRows(out_channels).conjugate().transpose();
  bank.labels.reserve(out_channels);
  for (int c = 0; c < out_channels; ++c) {
    bank.labels.push_back({ChannelLabel::Kind::Ambisonic,
                           ChannelIndex::from_acn(c)});
  }
  return bank;
}

double encodability(const SteeringMatrix& steering, const VectorXcd& target,
                    double rank_tol) {
  const double energy = target.squaredNorm();
  if (energy == 0.0) {
    throw std::invalid_argument("encodability: zero target pattern");
  }
  // left singular vectors of V^T with sigma >= rank_tol * sigma_max span the
  // row space; the rest is the null space of V^T
  Eigen::JacobiSVD<MatrixXcd> svd(steering.entries.transpose(),
                                  Eigen::ComputeThinU);
  const VectorXd sigma = svd.singularValues();
  const double cutoff = rank_tol * sigma(0);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) >= cutoff) ++rank;
  const double in_range =
      (svd.matrixU().leftCols(rank).adjoint() * target).squaredNorm();
  const double in_null = std::max(energy - in_range, 0.0);
  const double xi = 10.0 * std::log10(in_null / energy);
  return std::clamp(std::isfinite(xi) ? xi : -200.0, -200.0, 0.0);
}

ChannelPartition channel_partition(int ambisonics_order, int full_order) {
  if (ambisonics_order < 0 || full_order < ambisonics_order) {
    throw std::invalid_argument("channel_partition: need N_h >= N_a >= 0");
  }
  ChannelPartition part;
  part.ambisonics_order = ambisonics_order;
  part.full_order = full_order;
  for (int acn = 0; acn < num_channels(full_order); ++acn) {
    const ChannelIndex idx = ChannelIndex::from_acn(acn);
    (idx.n <= ambisonics_order ? part.ambisonic : part.residual).push_back(idx);
  }
  return part;
}

FilterBank residual_filters(const SteeringMatrix& steering,
                            const MatrixXcd& sh_residual_targets,
                            const ChannelPartition& partition, double snr_db) {
  if (sh_residual_targets.cols() !=
      static_cast<Eigen::Index>(partition.residual.size())) {
    throw std::invalid_argument(
        "residual_filters: target columns do not match partition");
  }
  FilterBank bank;
  bank.freq_hz = steering.freq_hz;
  bank.lambda = snr_to_lambda(snr_db);
  bank.entries =
      regularized_solve(steering.entries, sh_residual_targets, bank.lambda);
  for (const ChannelIndex& idx : partition.residual) {
    bank.labels.push_back({ChannelLabel::Kind::Residual, idx});
  }
  return bank;
}

FilterBank bsm_filters(const SteeringMatrix& steering,
                       const VectorXcd& gain_left, const VectorXcd& gain_right,
                       double snr_db) {
  if (gain_left.size() != steering.entries.cols() ||
      gain_right.size() != steering.entries.cols()) {
    throw std::invalid_argument("bsm_filters: gain/grid size mismatch");
  }
  MatrixXcd targets(steering.entries.cols(), 2);
  targets.col(0) = gain_left.conjugate();
  targets.col(1) = gain_right.conjugate();

  FilterBank bank;
  bank.freq_hz = steering.freq_hz;
  bank.lambda = snr_to_lambda(snr_db);
  bank.entries = regularized_solve(steering.entries, targets, bank.lambda);
  bank.labels = {{ChannelLabel::Kind::EarLeft, ChannelIndex()},
                 {ChannelLabel::Kind::EarRight, ChannelIndex()}};
  return bank;
}

void save_filter_bank(const FilterBank& bank, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_filter_bank: cannot open " + path);
  out.precision(17);
  out << "filterbank " << bank.freq_hz << " " << bank.num_mics() << " "
      << bank.num_channels() << " " << bank.lambda << "\n";
  for (int c = 0; c < bank.num_channels(); ++c) {
    out << bank.labels[c].to_string();
    for (int i = 0; i < bank.num_mics(); ++i) {
      out << " " << bank.entries(i, c).real() << "," << bank.entries(i, c).imag();
    }
    out << "\n";
  }
}

FilterBank load_filter_bank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_filter_bank: cannot open " + path);
  std::string magic;
  int mics = 0, channels = 0;
  FilterBank bank;
  in >> magic >> bank.freq_hz >> mics >> channels >> bank.lambda;
  if (!in || magic != "filterbank" || mics < 1 || channels < 0) {
    throw std::runtime_error("load_filter_bank: malformed header in " + path);
  }
  bank.entries.resize(mics, channels);
  for (int c = 0; c < channels; ++c) {
    std::string label;
    in >> label;
    bank.labels.push_back(ChannelLabel::parse(label));
    for (int i = 0; i < mics; ++i) {
      std::string pair;
      in >> pair;
      const auto comma = pair.find(',');
      if (!in || comma == std::string::npos) {
        throw std::runtime_error("load_filter_bank: bad entry for channel " +
                                 label + " in " + path);
      }
      bank.entries(i, c) = Complex(std::stod(pair.substr(0, comma)),
                                   std::stod(pair.substr(comma + 1)));
    }
  }
  return bank;
}

}  // namespace ambi
