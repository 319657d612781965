#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ambi/array.hpp"

namespace ambi {

/// Configuration problem (bad key, bad value, missing file); maps to CLI
/// exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ArrayKind array_kind = ArrayKind::Spherical;
  int num_mics = 4;
  double radius = 0.1;  // meters

  double freq_min_hz = 100.0;
  double freq_max_hz = 8000.0;
  int freq_count = 120;
  bool log_spaced = true;

  double snr_db = 20.0;
  int ambisonics_order = 1;               // N_a
  std::vector<int> residual_orders = {2, 5};  // N_h per residual variant
  int reference_order = 30;               // N_h of the binaural reference

  int diffuse_grid_size = 0;  // 0 = 2 * (reference_order + 1)^2
  double rank_tol = 1e-6;
  double threshold_db = -10.0;
  double head_radius = 0.0875;

  std::string output_dir = ".";
  uint64_t seed = 1;

  std::vector<double> frequencies() const;
  int diffuse_grid_points() const;
};

/// key = value text file; unknown keys and malformed values are errors
/// naming the key. Missing file is an error; empty path yields defaults.
ExperimentConfig parse_config(const std::string& path);
void validate_config(const ExperimentConfig& config);

ArrayKind parse_array_kind(const std::string& name);
std::string array_kind_name(ArrayKind kind);

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Null-space encodability vs frequency for channels (0,0) and (1,m), one
/// table per array layout (semicircular, circular, spherical).
std::vector<ResultTable> run_fig1(const ExperimentConfig& config);

/// Ambisonics NMSE vs frequency for the truncated SH encoders (N_v = 1 and
/// N_v = 4) against full-order signal matching, per array layout.
std::vector<ResultTable> run_fig2(const ExperimentConfig& config);

/// Binaural NMSE vs frequency for signal matching alone, with residual
/// channels, and for direct binaural matching, per array layout.
std::vector<ResultTable> run_fig3(const ExperimentConfig& config);

/// One CSV per table (frequency first, 6 significant digits), byte-stable
/// across reruns for a fixed config.
void emit_outputs(const ResultTable& table, const std::string& dir);

/// CSVs plus a gnuplot script referencing them.
void emit_figure(const std::vector<ResultTable>& tables,
                 const std::string& figure_name, const std::string& dir);

}  // namespace ambi
