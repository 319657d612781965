#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ambi/encoding.hpp"
#include "oracles.hpp"

using namespace ambi;

namespace {

SteeringMatrix identity_steering(const SamplingGrid& grid) {
  SteeringMatrix v;
  v.freq_hz = 1000.0;
  v.grid = &grid;
  v.entries = MatrixXcd::Identity(grid.size(), grid.size());
  return v;
}

}  // namespace

TEST_CASE("identity steering with no regularization recovers targets") {
  const SamplingGrid grid = make_fibonacci_grid(16, 1);
  const SteeringMatrix v = identity_steering(grid);
  const MatrixXcd y = sh_matrix(grid, 1);
  const FilterBank bank = asm_filters(v, y, 1e9);  // lambda ~ 0
  CHECK((bank.entries - y).norm() < 1e-6 * y.norm());

  const MatrixXcd exact = regularized_solve(v.entries, y, 0.0);
  CHECK((exact - y).norm() < 1e-12 * y.norm());
}

TEST_CASE("strong regularization shrinks filters toward zero") {
  const SamplingGrid grid = make_fibonacci_grid(100, 4);
  const ArrayGeometry geom = make_array(ArrayKind::Spherical, 4, 0.1);
  const SteeringMatrix v = steering_matrix(geom, grid, 1000.0);
  const MatrixXcd y = sh_matrix(grid, 1);
  const FilterBank tight = asm_filters(v, y, -80.0);  // lambda = 1e8
  CHECK(tight.entries.norm() < 1e-4);
}

TEST_CASE("normal-equations residual and regularization monotonicity") {
  const SamplingGrid grid = make_fibonacci_grid(200, 8);
  const ArrayGeometry geom = make_array(ArrayKind::Circular, 4, 0.1);
  const SteeringMatrix v = steering_matrix(geom, grid, 2000.0);
  const MatrixXcd y = sh_matrix(grid, 1);

  double prev_norm = -1.0;
  for (double snr : {40.0, 20.0, 0.0}) {
    const FilterBank bank = asm_filters(v, y, snr);
    const double lambda = snr_to_lambda(snr);
    const MatrixXcd gram =
        v.entries * v.entries.adjoint() +
        lambda * MatrixXcd::Identity(4, 4);
    for (int c = 0; c < bank.num_channels(); ++c) {
      const VectorXcd rhs = v.entries * y.col(c);
      CHECK((gram * bank.entries.col(c) - rhs).norm() <= 1e-9 * rhs.norm());
    }
    if (prev_norm >= 0.0) CHECK(bank.entries.norm() <= prev_norm);
    prev_norm = bank.entries.norm();
  }
}

TEST_CASE("apply_filters") {
  const SamplingGrid grid = make_fibonacci_grid(4, 0);
  FilterBank bank;
  bank.entries = MatrixXcd::Identity(4, 4);
  bank.labels.assign(4, {ChannelLabel::Kind::Ambisonic, ChannelIndex(0, 0)});

  std::mt19937_64 rng(3);
  const VectorXcd x = testing::random_complex_vector(4, rng);
  CHECK((apply_filters(bank, x) - x).norm() == 0.0);
  CHECK(apply_filters(bank, VectorXcd::Zero(4)).norm() == 0.0);
  CHECK_THROWS(apply_filters(bank, VectorXcd::Zero(5)));
}

TEST_CASE("noiseless plane wave encodes to conjugate harmonics") {
  // V = I, lambda = 0: a_hat = Y^H x, so a single unit wave from direction q
  // yields a_hat_nm = Y_nm*(dir_q)
  const SamplingGrid grid = make_fibonacci_grid(25, 2);
  const SteeringMatrix v = identity_steering(grid);
  const MatrixXcd y = sh_matrix(grid, 2);
  FilterBank bank;
  bank.entries = regularized_solve(v.entries, y, 0.0);
  bank.labels.assign(y.cols(), {});

  VectorXcd x = VectorXcd::Zero(grid.size());
  const int q = 7;
  x(q) = 1.0;
  const VectorXcd a_hat = apply_filters(bank, x);
  for (int acn = 0; acn < y.cols(); ++acn) {
    CHECK(std::abs(a_hat(acn) - std::conj(y(q, acn))) < 1e-10);
  }
}

TEST_CASE("truncated SH encoder agrees with unregularized matching") {
  const ArrayGeometry geom = make_array(ArrayKind::Spherical, 4, 0.1);
  const double f = 150.0;
  const int n_v = auto_order(f, 0.1);
  const SamplingGrid grid = make_gauss_legendre_grid(n_v);
  const SteeringMatrix v = steering_matrix(geom, grid, f, n_v);

  // absorb the quadrature weights so the grid's SH Gram is the identity;
  // that is the alias-free sampling under which the two routes coincide
  const VectorXd sqrt_w = grid.weights.cwiseSqrt();
  const MatrixXcd v_bar = v.entries * sqrt_w.asDiagonal();
  const MatrixXcd y_bar = sqrt_w.asDiagonal() * sh_matrix(grid, 1);

  const MatrixXcd exact = regularized_solve(v_bar, y_bar, 0.0);
  const FilterBank truncated =
      truncated_sh_encoder(steering_sh(geom, f, n_v), 1);
  std::mt19937_64 rng(5);
  const VectorXcd x = testing::random_complex_vector(4, rng);
  const VectorXcd via_truncated = truncated.entries.adjoint() * x;
  const VectorXcd via_exact = exact.adjoint() * x;
  CHECK((via_truncated - via_exact).norm() <= 1e-6 * via_exact.norm());
}

TEST_CASE("truncated SH encoder rejects (N_v+1)^2 < M") {
  const ArrayGeometry geom = make_array(ArrayKind::Spherical, 6, 0.1);
  CHECK_THROWS(truncated_sh_encoder(steering_sh(geom, 1000.0, 1), 1));
}

TEST_CASE("encodability clamps for an invertible square system") {
  const SamplingGrid grid = make_fibonacci_grid(4, 0);
  const SteeringMatrix v = identity_steering(grid);
  std::mt19937_64 rng(9);
  const VectorXcd y = testing::random_complex_vector(4, rng);
  CHECK(encodability(v, y) == -200.0);
}

TEST_CASE("encodability of a pattern outside the row space is 0 dB") {
  SamplingGrid grid = make_fibonacci_grid(4, 0);
  SteeringMatrix v;
  v.grid = &grid;
  v.entries = MatrixXcd::Zero(2, 4);
  v.entries(0, 0) = 1.0;
  v.entries(1, 1) = 1.0;
  VectorXcd y = VectorXcd::Zero(4);
  y(2) = 1.0;
  y(3) = Complex(0.0, 2.0);
  CHECK(encodability(v, y) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS(encodability(v, VectorXcd::Zero(4)));
}

TEST_CASE("encodability is scale invariant") {
  const SamplingGrid grid = make_fibonacci_grid(200, 8);
  const ArrayGeometry geom = make_array(ArrayKind::Circular, 4, 0.1);
  const SteeringMatrix v = steering_matrix(geom, grid, 1500.0);
  const MatrixXcd y = sh_matrix(grid, 1);
  const double base = encodability(v, y.col(2));
  for (Complex scale : {Complex(3.0, 0.0), Complex(0.0, -2.0), Complex(1e-4, 1e-4)}) {
    CHECK(std::abs(encodability(v, scale * y.col(2)) - base) < 1e-12);
  }
}

TEST_CASE("circular array cannot encode the (1,0) channel") {
  const SamplingGrid grid = make_fibonacci_grid(484, 10);
  const ArrayGeometry geom = make_array(ArrayKind::Circular, 4, 0.1);
  const MatrixXcd y = sh_matrix(grid, 1);
  for (double f : {100.0, 1000.0, 8000.0}) {
    const SteeringMatrix v = steering_matrix(geom, grid, f);
    CHECK(encodability(v, y.col(ChannelIndex(1, 0).acn())) > -10.0);
  }
}

TEST_CASE("channel partition sizes") {
  CHECK(channel_partition(1, 2).residual.size() == 5);
  CHECK(channel_partition(1, 5).residual.size() == 32);
  CHECK(channel_partition(1, 30).residual.size() == 957);
  CHECK(channel_partition(2, 2).residual.empty());
  CHECK(channel_partition(1, 2).ambisonic.size() == 4);
  CHECK_THROWS(channel_partition(3, 2));
}

TEST_CASE("residual filters label orders above N_a") {
  const SamplingGrid grid = make_fibonacci_grid(200, 8);
  const ArrayGeometry geom = make_array(ArrayKind::Circular, 4, 0.1);
  const SteeringMatrix v = steering_matrix(geom, grid, 2000.0);
  const ChannelPartition part = channel_partition(1, 2);
  const MatrixXcd y = sh_matrix(grid, 2);
  const FilterBank bank =
      residual_filters(v, y.rightCols(5), part, 20.0);
  REQUIRE(bank.num_channels() == 5);
  for (const ChannelLabel& label : bank.labels) {
    CHECK(label.kind == ChannelLabel::Kind::Residual);
    CHECK(label.idx.n == 2);
  }

  const ChannelPartition empty = channel_partition(1, 1);
  const FilterBank none = residual_filters(v, MatrixXcd(grid.size(), 0), empty, 20.0);
  CHECK(none.num_channels() == 0);
}

TEST_CASE("BSM with identity steering returns conjugate gains") {
  const SamplingGrid grid = make_fibonacci_grid(6, 0);
  const SteeringMatrix v = identity_steering(grid);
  std::mt19937_64 rng(13);
  const VectorXcd dl = testing::random_complex_vector(6, rng);
  const VectorXcd dr = testing::random_complex_vector(6, rng);
  const FilterBank bank = bsm_filters(v, dl, dr, 200.0);  // lambda ~ 1e-20
  CHECK((bank.entries.col(0) - dl.conjugate()).norm() < 1e-9);
  CHECK((bank.entries.col(1) - dr.conjugate()).norm() < 1e-9);
}

TEST_CASE("filter bank text round trip") {
  std::mt19937_64 rng(17);
  FilterBank bank;
  bank.freq_hz = 1234.5;
  bank.lambda = 0.01;
  bank.entries = MatrixXcd(4, 3);
  for (int c = 0; c < 3; ++c) {
    bank.entries.col(c) = testing::random_complex_vector(4, rng);
  }
  bank.labels = {{ChannelLabel::Kind::Ambisonic, ChannelIndex(0, 0)},
                 {ChannelLabel::Kind::Residual, ChannelIndex(2, -1)},
                 {ChannelLabel::Kind::EarLeft, ChannelIndex()}};
  const std::string path =
      (std::filesystem::temp_directory_path() / "bank_test.txt").string();
  save_filter_bank(bank, path);
  const FilterBank loaded = load_filter_bank(path);
  CHECK(loaded.freq_hz == bank.freq_hz);
  CHECK(loaded.lambda == bank.lambda);
  CHECK(loaded.labels == bank.labels);
  CHECK((loaded.entries - bank.entries).cwiseAbs().maxCoeff() <= 1e-15);
  std::filesystem::remove(path);
}
