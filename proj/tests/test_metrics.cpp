#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ambi/binaural.hpp"
#include "ambi/encoding.hpp"
#include "ambi/metrics.hpp"
#include "oracles.hpp"

using namespace ambi;

namespace {

struct RandomSetup {
  SamplingGrid grid;
  ArrayGeometry geom;
  SteeringMatrix v;
  MatrixXcd y;
  DiffuseModel model;
  double snr_db;
};

RandomSetup random_setup(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(200.0, 6000.0);
  std::uniform_real_distribution<double> snr(5.0, 30.0);
  const ArrayKind kinds[] = {ArrayKind::Spherical, ArrayKind::Circular,
                             ArrayKind::Semicircular};
  RandomSetup s;
  s.grid = make_fibonacci_grid(400, 10);
  s.geom = make_array(kinds[seed % 3], 4, 0.1);
  s.v = steering_matrix(s.geom, s.grid, freq(rng));
  s.v.grid = &s.grid;
  s.y = sh_matrix(s.grid, 1);
  s.snr_db = snr(rng);
  s.model = DiffuseModel::from_snr(s.grid, s.snr_db);
  return s;
}

}  // namespace

TEST_CASE("perfect reconstruction clamps at -200 dB") {
  SamplingGrid grid = make_fibonacci_grid(4, 0);
  SteeringMatrix v;
  v.grid = &grid;
  v.entries = MatrixXcd::Identity(4, 4);
  DiffuseModel model = DiffuseModel::from_snr(grid, 20.0);
  model.sigma_n2 = 0.0;
  std::mt19937_64 rng(1);
  const VectorXcd y = testing::random_complex_vector(4, rng);
  CHECK(nmse_ambisonics(v, y, y, model).value_db == -200.0);
}

TEST_CASE("zero filter gives 0 dB") {
  const RandomSetup s = random_setup(2);
  const NmseResult r =
      nmse_ambisonics(s.v, VectorXcd::Zero(4), s.y.col(1), s.model);
  CHECK(r.value_db == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS(nmse_ambisonics(s.v, VectorXcd::Zero(4),
                               VectorXcd::Zero(s.grid.size()), s.model));

  std::mt19937_64 rng(3);
  const VectorXcd d = testing::random_complex_vector(s.grid.size(), rng);
  const NmseResult b = nmse_binaural(s.v, VectorXcd::Zero(4),
                                     VectorXcd::Zero(4), d, d, s.model);
  CHECK(b.value_db == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scale invariance in the source/noise power pair") {
  const RandomSetup s = random_setup(4);
  const FilterBank bank = asm_filters(s.v, s.y, s.snr_db);
  DiffuseModel scaled = s.model;
  scaled.sigma_s2 *= 37.0;
  scaled.sigma_n2 *= 37.0;
  for (int c = 0; c < 4; ++c) {
    const double a =
        nmse_ambisonics(s.v, bank.entries.col(c), s.y.col(c), s.model).value_db;
    const double b =
        nmse_ambisonics(s.v, bank.entries.col(c), s.y.col(c), scaled).value_db;
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("with no noise the error tracks the null-space projection") {
  const RandomSetup s = random_setup(5);
  DiffuseModel noiseless = s.model;
  noiseless.sigma_n2 = 0.0;
  const MatrixXcd c = regularized_solve(s.v.entries, s.y, 0.0);
  for (int ch = 0; ch < 4; ++ch) {
    const double eps =
        nmse_ambisonics(s.v, c.col(ch), s.y.col(ch), noiseless).value_db;
    const double xi = encodability(s.v, s.y.col(ch));
    if (xi > -60.0) {
      CHECK(eps >= xi - 1.0);
      CHECK(eps <= xi + 3.0);
    }
  }
}

TEST_CASE("BSM filters minimize the binaural NMSE") {
  const RandomSetup s = random_setup(6);
  std::mt19937_64 rng(7);
  const int n_h = 8;
  const SamplingGrid gl = make_gauss_legendre_grid(n_h);
  const HrtfSh hrtf =
      hrtf_to_sh(sphere_hrtf(kDefaultHeadRadius, gl, s.v.freq_hz), n_h);
  const MatrixXcd y_h = sh_matrix(s.grid, n_h);
  const VectorXcd dl = y_h * hrtf.left;
  const VectorXcd dr = y_h * hrtf.right;
  const FilterBank bsm = bsm_filters(s.v, dl, dr, s.snr_db);
  const double best = nmse_binaural(s.v, bsm.entries.col(0),
                                    bsm.entries.col(1), dl, dr, s.model)
                          .value_db;
  for (int trial = 0; trial < 100; ++trial) {
    const double scale = std::pow(10.0, -6.0 + 6.0 * (trial % 7) / 6.0);
    const VectorXcd wl =
        bsm.entries.col(0) + scale * testing::random_complex_vector(4, rng);
    const VectorXcd wr =
        bsm.entries.col(1) + scale * testing::random_complex_vector(4, rng);
    CHECK(nmse_binaural(s.v, wl, wr, dl, dr, s.model).value_db >=
          best - 1e-9);
  }
}

TEST_CASE("Monte Carlo estimator is deterministic and consistent") {
  const RandomSetup s = random_setup(8);
  const FilterBank bank = asm_filters(s.v, s.y, s.snr_db);
  const McNmseResult a = monte_carlo_nmse(s.v, bank.entries.col(0),
                                          s.y.col(0), s.model, 2000, 42);
  const McNmseResult b = monte_carlo_nmse(s.v, bank.entries.col(0),
                                          s.y.col(0), s.model, 2000, 42);
  CHECK(a.value_db == b.value_db);
  CHECK(a.stderr_db == b.stderr_db);
  CHECK_THROWS(monte_carlo_nmse(s.v, bank.entries.col(0), s.y.col(0), s.model,
                                50, 1));
}

TEST_CASE("standard error shrinks roughly as 1/sqrt(trials)") {
  const RandomSetup s = random_setup(9);
  const FilterBank bank = asm_filters(s.v, s.y, s.snr_db);
  const McNmseResult small = monte_carlo_nmse(s.v, bank.entries.col(1),
                                              s.y.col(1), s.model, 100, 5);
  const McNmseResult large = monte_carlo_nmse(s.v, bank.entries.col(1),
                                              s.y.col(1), s.model, 10000, 5);
  const double ratio = small.stderr_db / large.stderr_db;
  CHECK(ratio > 10.0 / 3.0);
  CHECK(ratio < 10.0 * 3.0);
}

TEST_CASE("analytic and empirical NMSE agree across random configurations") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const RandomSetup s = random_setup(100 + seed);
    const FilterBank bank = asm_filters(s.v, s.y, s.snr_db);
    const int ch = static_cast<int>(seed % 4);
    const NmseResult analytic =
        nmse_ambisonics(s.v, bank.entries.col(ch), s.y.col(ch), s.model);
    const McNmseResult mc = monte_carlo_nmse(
        s.v, bank.entries.col(ch), s.y.col(ch), s.model, 10000, 1000 + seed);
    CHECK(std::abs(analytic.value_db - mc.value_db) < 0.5);
    CHECK(std::abs(analytic.value_db - mc.value_db) <=
          3.0 * std::max(mc.stderr_db, 0.17));
  }
}
