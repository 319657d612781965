#include "ambi/metrics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ambi/encoding.hpp"

namespace ambi {

DiffuseModel DiffuseModel::from_snr(const SamplingGrid& grid, double snr_db) {
  DiffuseModel model;
  model.grid = &grid;
  model.sigma_s2 = 1.0;
  model.sigma_n2 = snr_to_lambda(snr_db);
  return model;
}

namespace {

double to_db(double num, double den) {
  const double db = 10.0 * std::log10(num / den);
  return std::isfinite(db) ? std::max(db, -200.0) : -200.0;
}

NmseResult closed_form(const MatrixXcd& steering, const VectorXcd& filter,
                       const VectorXcd& target, const DiffuseModel& model) {
  NmseResult r;
  r.mismatch_energy =
      model.sigma_s2 * (steering.adjoint() * filter - target).squaredNorm();
  r.noise_energy = model.sigma_n2 * filter.squaredNorm();
  r.denominator = model.sigma_s2 * target.squaredNorm();
  r.value_db = to_db(r.mismatch_energy + r.noise_energy, r.denominator);
  return r;
}

}  // namespace

NmseResult nmse_ambisonics(const SteeringMatrix& steering,
                           const VectorXcd& filter, const VectorXcd& target,
                           const DiffuseModel& model) {
  if (target.squaredNorm() == 0.0) {
    throw std::invalid_argument("nmse_ambisonics: zero target");
  }
  if (filter.size() != steering.entries.rows() ||
      target.size() != steering.entries.cols()) {
    throw std::invalid_argument("nmse_ambisonics: dimension mismatch");
  }
  return closed_form(steering.entries, filter, target, model);
}

NmseResult nmse_binaural(const SteeringMatrix& steering,
                         const VectorXcd& w_left, const VectorXcd& w_right,
                         const VectorXcd& d_left, const VectorXcd& d_right,
                         const DiffuseModel& model) {
  if (d_left.squaredNorm() + d_right.squaredNorm() == 0.0) {
    throw std::invalid_argument("nmse_binaural: zero reference");
  }
  const NmseResult l =
      closed_form(steering.entries, w_left, d_left.conjugate(), model);
  const NmseResult r =
      closed_form(steering.entries, w_right, d_right.conjugate(), model);
  NmseResult pooled;
  pooled.mismatch_energy = l.mismatch_energy + r.mismatch_energy;
  pooled.noise_energy = l.noise_energy + r.noise_energy;
  pooled.denominator = l.denominator + r.denominator;
  pooled.value_db = to_db(pooled.mismatch_energy + pooled.noise_energy,
                          pooled.denominator);
  return pooled;
}

McNmseResult monte_carlo_nmse(const SteeringMatrix& steering,
                              const MatrixXcd& filters,
                              const MatrixXcd& targets,
                              const DiffuseModel& model, int trials,
                              uint64_t seed) {
  if (trials < 100) {
    throw std::invalid_argument("monte_carlo_nmse: trials < 100");
  }
  if (filters.rows() != steering.entries.rows() ||
      targets.rows() != steering.entries.cols() ||
      filters.cols() != targets.cols()) {
    throw std::invalid_argument("monte_carlo_nmse: dimension mismatch");
  }
  const auto q = steering.entries.cols();
  const auto m = steering.entries.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double s_scale = std::sqrt(model.sigma_s2 / 2.0);
  const double n_scale = std::sqrt(model.sigma_n2 / 2.0);

  double err_sum = 0.0, err_sq = 0.0;
  double ref_sum = 0.0, ref_sq = 0.0;
  double cross = 0.0;
  VectorXcd s(q), n(m);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < q; ++i) {
      s(i) = Complex(gauss(rng), gauss(rng)) * s_scale;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      n(i) = Complex(gauss(rng), gauss(rng)) * n_scale;
    }
    const VectorXcd x = steering.entries * s + n;
    const double err = (filters.adjoint() * x - targets.adjoint() * s)
                           .squaredNorm();
    const double ref = (targets.adjoint() * s).squaredNorm();
    err_sum += err;
    err_sq += err * err;
    ref_sum += ref;
    ref_sq += ref * ref;
    cross += err * ref;
  }
  const double err_mean = err_sum / trials;
  const double ref_mean = ref_sum / trials;
  const double ratio = err_mean / ref_mean;

  McNmseResult r;
  r.trials = trials;
  r.mismatch_energy = err_mean;  // noise not separable empirically
  r.noise_energy = 0.0;
  r.denominator = ref_mean;
  r.value_db = to_db(err_mean, ref_mean);

  // delta-method standard error of the ratio of means, propagated to dB
  const double var_err = (err_sq / trials - err_mean * err_mean);
  const double var_ref = (ref_sq / trials - ref_mean * ref_mean);
  const double cov = (cross / trials - err_mean * ref_mean);
  const double var_ratio =
      (var_err - 2.0 * ratio * cov + ratio * ratio * var_ref) /
      (trials * ref_mean * ref_mean);
  if (var_ratio > 0.0 && ratio > 0.0) {
    r.stderr_db = 10.0 / std::log(10.0) * std::sqrt(var_ratio) / ratio;
  }
  return r;
}

}  // namespace ambi
