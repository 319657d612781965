// Command-line front end: figure reproduction, encodability reports, and
// filter design for microphone-array Ambisonics encoding.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ambi/binaural.hpp"
#include "ambi/encoding.hpp"
#include "ambi/experiments.hpp"
#include "ambi/metrics.hpp"

namespace {

using namespace ambi;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> array;
  std::optional<int> num_mics;
  std::optional<double> radius;
  std::optional<double> snr_db;
  std::optional<int> ambisonics_order;
  std::optional<double> rank_tol;
  std::optional<double> threshold_db;
  std::optional<int> freq_count;
  std::optional<std::string> output_dir;
  std::optional<int> seed;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value config file");
  cmd->add_option("--array", flags.array,
                  "spherical | circular | semicircular");
  cmd->add_option("--mics", flags.num_mics, "number of microphones");
  cmd->add_option("--radius", flags.radius, "scatterer radius [m]");
  cmd->add_option("--snr", flags.snr_db, "signal-to-noise ratio [dB]");
  cmd->add_option("--order", flags.ambisonics_order, "Ambisonics order N_a");
  cmd->add_option("--rank-tol", flags.rank_tol, "relative SVD rank tolerance");
  cmd->add_option("--threshold", flags.threshold_db,
                  "encodability threshold [dB]");
  cmd->add_option("--freq-count", flags.freq_count, "frequency bins");
  cmd->add_option("--out", flags.output_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "random seed");
}

ExperimentConfig resolve_config(const CommonFlags& flags) {
  ExperimentConfig config = parse_config(flags.config_path);
  if (flags.array) config.array_kind = parse_array_kind(*flags.array);
  if (flags.num_mics) config.num_mics = *flags.num_mics;
  if (flags.radius) config.radius = *flags.radius;
  if (flags.snr_db) config.snr_db = *flags.snr_db;
  if (flags.ambisonics_order) config.ambisonics_order = *flags.ambisonics_order;
  if (flags.rank_tol) config.rank_tol = *flags.rank_tol;
  if (flags.threshold_db) config.threshold_db = *flags.threshold_db;
  if (flags.freq_count) config.freq_count = *flags.freq_count;
  if (flags.output_dir) config.output_dir = *flags.output_dir;
  if (flags.seed) config.seed = static_cast<uint64_t>(*flags.seed);
  validate_config(config);
  return config;
}

int run_encodability(const ExperimentConfig& config) {
  const SamplingGrid grid = make_fibonacci_grid(config.diffuse_grid_points());
  const MatrixXcd y = sh_matrix(grid, config.ambisonics_order);
  const ArrayGeometry geom =
      make_array(config.array_kind, config.num_mics, config.radius);

  ResultTable table;
  table.name = "encodability_" + array_kind_name(config.array_kind);
  table.columns = {"f_hz"};
  for (int acn = 0; acn < y.cols(); ++acn) {
    const ChannelIndex idx = ChannelIndex::from_acn(acn);
    table.columns.push_back("xi_" + std::to_string(idx.n) + "_" +
                            std::to_string(idx.m));
  }
  std::vector<int> fail_count(y.cols(), 0);
  for (double f : config.frequencies()) {
    const SteeringMatrix v = steering_matrix(geom, grid, f);
    std::vector<double> row{f};
    for (int acn = 0; acn < y.cols(); ++acn) {
      const double xi = encodability(v, y.col(acn), config.rank_tol);
      row.push_back(xi);
      if (xi > config.threshold_db) ++fail_count[acn];
    }
    table.rows.push_back(std::move(row));
  }
  emit_outputs(table, config.output_dir);
  std::printf("# %s, TH = %g dB, rank_tol = %g\n", table.name.c_str(),
              config.threshold_db, config.rank_tol);
  for (int acn = 0; acn < y.cols(); ++acn) {
    const ChannelIndex idx = ChannelIndex::from_acn(acn);
    std::printf("channel (%d,%d): %s (%d of %zu bins above TH)\n", idx.n,
                idx.m, fail_count[acn] == 0 ? "encodable" : "not encodable",
                fail_count[acn], table.rows.size());
  }
  return 0;
}

int run_design(const ExperimentConfig& config, double freq_hz,
               const std::string& out_path) {
  const SamplingGrid grid = make_fibonacci_grid(config.diffuse_grid_points());
  const ArrayGeometry geom =
      make_array(config.array_kind, config.num_mics, config.radius);
  const SteeringMatrix v = steering_matrix(geom, grid, freq_hz);
  const MatrixXcd y = sh_matrix(grid, config.ambisonics_order);
  const FilterBank bank = asm_filters(v, y, config.snr_db);
  save_filter_bank(bank, out_path);
  std::printf("wrote %d-channel bank for %s array at %g Hz to %s\n",
              bank.num_channels(), array_kind_name(config.array_kind).c_str(),
              freq_hz, out_path.c_str());
  return 0;
}

int run_render_error(const ExperimentConfig& config, double freq_hz) {
  const int n_ref = config.reference_order;
  const int n_a = config.ambisonics_order;
  const SamplingGrid grid = make_fibonacci_grid(config.diffuse_grid_points());
  const SamplingGrid hrtf_grid = make_gauss_legendre_grid(n_ref);
  const ArrayGeometry geom =
      make_array(config.array_kind, config.num_mics, config.radius);

  const SteeringMatrix v = steering_matrix(geom, grid, freq_hz);
  const DiffuseModel model = DiffuseModel::from_snr(grid, config.snr_db);
  const MatrixXcd y_ref = sh_matrix(grid, n_ref);
  const MatrixXcd y_asm = y_ref.leftCols(num_channels(n_a));

  const HrtfSh hrtf =
      hrtf_to_sh(sphere_hrtf(config.head_radius, hrtf_grid, freq_hz), n_ref);
  const VectorXcd d_left = y_ref * hrtf.left;
  const VectorXcd d_right = y_ref * hrtf.right;

  const FilterBank asm_bank = asm_filters(v, y_asm, config.snr_db);
  std::printf("# %s array, %g Hz, snr %g dB\n",
              array_kind_name(config.array_kind).c_str(), freq_hz,
              config.snr_db);
  for (int acn = 0; acn < y_asm.cols(); ++acn) {
    const ChannelIndex idx = ChannelIndex::from_acn(acn);
    const NmseResult r =
        nmse_ambisonics(v, asm_bank.entries.col(acn), y_asm.col(acn), model);
    std::printf("eps_amb(%d,%d) = %.2f dB\n", idx.n, idx.m, r.value_db);
  }

  const Eigen::MatrixXd t = conjugation_matrix(n_a);
  const VectorXcd wl =
      asm_bank.entries * (t * hrtf.left.head(y_asm.cols())).conjugate();
  const VectorXcd wr =
      asm_bank.entries * (t * hrtf.right.head(y_asm.cols())).conjugate();
  std::printf("eps_bin(asm) = %.2f dB\n",
              nmse_binaural(v, wl, wr, d_left, d_right, model).value_db);

  const FilterBank bsm = bsm_filters(v, d_left, d_right, config.snr_db);
  std::printf("eps_bin(bsm) = %.2f dB\n",
              nmse_binaural(v, bsm.entries.col(0), bsm.entries.col(1), d_left,
                            d_right, model)
                  .value_db);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambisonics encoding filter design and analysis"};
  app.require_subcommand(1);

  CommonFlags flags;
  double freq_hz = 1000.0;
  std::string out_path = "filterbank.txt";

  CLI::App* fig1 = app.add_subcommand("fig1", "encodability vs frequency");
  CLI::App* fig2 = app.add_subcommand("fig2", "encoding NMSE vs frequency");
  CLI::App* fig3 = app.add_subcommand("fig3", "binaural NMSE vs frequency");
  CLI::App* enc = app.add_subcommand("encodability",
                                     "per-channel encodability report");
  CLI::App* design = app.add_subcommand("design", "export encoding filters");
  CLI::App* render = app.add_subcommand("render-error",
                                        "rendering errors at one frequency");
  for (CLI::App* cmd : {fig1, fig2, fig3, enc, design, render}) {
    add_common_flags(cmd, flags);
  }
  design->add_option("--freq", freq_hz, "design frequency [Hz]");
  design->add_option("--bank-out", out_path, "filter bank output path");
  render->add_option("--freq", freq_hz, "evaluation frequency [Hz]");

  CLI11_PARSE(app, argc, argv);

  try {
    const ambi::ExperimentConfig config = resolve_config(flags);
    if (fig1->parsed()) {
      ambi::emit_figure(ambi::run_fig1(config), "fig1", config.output_dir);
    } else if (fig2->parsed()) {
      ambi::emit_figure(ambi::run_fig2(config), "fig2", config.output_dir);
    } else if (fig3->parsed()) {
      ambi::emit_figure(ambi::run_fig3(config), "fig3", config.output_dir);
    } else if (enc->parsed()) {
      return run_encodability(config);
    } else if (design->parsed()) {
      return run_design(config, freq_hz, out_path);
    } else if (render->parsed()) {
      return run_render_error(config, freq_hz);
    }
  } catch (const ambi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
