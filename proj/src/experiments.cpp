#include "ambi/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ambi/binaural.hpp"
#include "ambi/encoding.hpp"
#include "ambi/metrics.hpp"
#include "ambi/special.hpp"

namespace ambi {

std::vector<double> ExperimentConfig::frequencies() const {
  std::vector<double> freqs(freq_count);
  for (int i = 0; i < freq_count; ++i) {
    const double t = static_cast<double>(i) / (freq_count - 1);
    freqs[i] = log_spaced
                   ? freq_min_hz * std::pow(freq_max_hz / freq_min_hz, t)
                   : freq_min_hz + t * (freq_max_hz - freq_min_hz);
  }
  return freqs;
}

int ExperimentConfig::diffuse_grid_points() const {
  return diffuse_grid_size > 0 ? diffuse_grid_size
                               : 2 * num_channels(reference_order);
}

ArrayKind parse_array_kind(const std::string& name) {
  if (name == "spherical") return ArrayKind::Spherical;
  if (name == "circular") return ArrayKind::Circular;
  if (name == "semicircular") return ArrayKind::Semicircular;
  throw ConfigError("unknown array kind: " + name);
}

std::string array_kind_name(ArrayKind kind) {
  switch (kind) {
    case ArrayKind::Spherical:
      return "spherical";
    case ArrayKind::Circular:
      return "circular";
    case ArrayKind::Semicircular:
      return "semicircular";
    case ArrayKind::Custom:
      break;
  }
  return "custom";
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size()) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  if (d != std::floor(d)) {
    throw ConfigError("config key '" + key + "': expected an integer");
  }
  return static_cast<int>(d);
}

}  // namespace

ExperimentConfig parse_config(const std::string& path) {
  ExperimentConfig config;
  if (path.empty()) {
    validate_config(config);
    return config;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::string key, eq, value;
    if (!(ss >> key)) continue;
    if (!(ss >> eq >> value) || eq != "=") {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    if (key == "array") {
      config.array_kind = parse_array_kind(value);
    } else if (key == "num_mics") {
      config.num_mics = parse_int(key, value);
    } else if (key == "radius") {
      config.radius = parse_double(key, value);
    } else if (key == "freq_min_hz") {
      config.freq_min_hz = parse_double(key, value);
    } else if (key == "freq_max_hz") {
      config.freq_max_hz = parse_double(key, value);
    } else if (key == "freq_count") {
      config.freq_count = parse_int(key, value);
    } else if (key == "log_spaced") {
      config.log_spaced = parse_int(key, value) != 0;
    } else if (key == "snr_db") {
      config.snr_db = parse_double(key, value);
    } else if (key == "ambisonics_order") {
      config.ambisonics_order = parse_int(key, value);
    } else if (key == "residual_orders") {
      config.residual_orders.clear();
      std::stringstream vs(value);
      std::string item;
      while (std::getline(vs, item, ',')) {
        config.residual_orders.push_back(parse_int(key, item));
      }
    } else if (key == "reference_order") {
      config.reference_order = parse_int(key, value);
    } else if (key == "diffuse_grid_size") {
      config.diffuse_grid_size = parse_int(key, value);
    } else if (key == "rank_tol") {
      config.rank_tol = parse_double(key, value);
    } else if (key == "threshold_db") {
      config.threshold_db = parse_double(key, value);
    } else if (key == "head_radius") {
      config.head_radius = parse_double(key, value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "seed") {
      config.seed = static_cast<uint64_t>(parse_int(key, value));
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& config) {
  if (config.num_mics < 1) throw ConfigError("num_mics must be >= 1");
  if (!(config.radius > 0.0)) throw ConfigError("radius must be positive");
  if (!(config.freq_min_hz > 0.0) ||
      !(config.freq_max_hz > config.freq_min_hz)) {
    throw ConfigError("need 0 < freq_min_hz < freq_max_hz");
  }
  if (config.freq_count < 2) throw ConfigError("freq_count must be >= 2");
  if (config.ambisonics_order < 0 || config.ambisonics_order > kMaxOrder) {
    throw ConfigError("ambisonics_order outside [0, 40]");
  }
  if (config.reference_order < config.ambisonics_order ||
      config.reference_order > kMaxOrder) {
    throw ConfigError("reference_order outside [ambisonics_order, 40]");
  }
  for (int order : config.residual_orders) {
    if (order < config.ambisonics_order || order > config.reference_order) {
      throw ConfigError(
          "residual_orders entries must lie in [ambisonics_order, "
          "reference_order]");
    }
  }
  if (!(config.rank_tol > 0.0 && config.rank_tol < 1.0)) {
    throw ConfigError("rank_tol must lie in (0, 1)");
  }
  if (!(config.head_radius > 0.0)) {
    throw ConfigError("head_radius must be positive");
  }
  if (num_channels(config.ambisonics_order) > config.num_mics) {
    std::cerr << "warning: (N_a+1)^2 = "
              << num_channels(config.ambisonics_order) << " exceeds M = "
              << config.num_mics
              << "; the sampling condition (N_a+1)^2 <= M is violated\n";
  }
}

namespace {

const ArrayKind kStudyArrays[] = {ArrayKind::Semicircular, ArrayKind::Circular,
                                  ArrayKind::Spherical};

std::string channel_tag(const ChannelIndex& idx) {
  return std::to_string(idx.n) +
         (idx.m < 0 ? "m" + std::to_string(-idx.m) : std::to_string(idx.m));
}

}  // namespace

std::vector<ResultTable> run_fig1(const ExperimentConfig& config) {
  const std::vector<double> freqs = config.frequencies();
  const SamplingGrid grid = make_fibonacci_grid(config.diffuse_grid_points());
  const MatrixXcd y = sh_matrix(grid, 1);

  std::vector<ResultTable> tables;
  for (ArrayKind kind : kStudyArrays) {
    const ArrayGeometry geom =
        make_array(kind, config.num_mics, config.radius);
    ResultTable table;
    table.name = "fig1_" + array_kind_name(kind);
    table.columns = {"f_hz", "xi_00", "xi_1m1", "xi_10", "xi_11"};
    for (double f : freqs) {
      const SteeringMatrix v = steering_matrix(geom, grid, f);
      std::vector<double> row{f};
      for (int acn = 0; acn < 4; ++acn) {
        row.push_back(encodability(v, y.col(acn), config.rank_tol));
      }
      table.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<ResultTable> run_fig2(const ExperimentConfig& config) {
  const std::vector<double> freqs = config.frequencies();
  const SamplingGrid grid = make_fibonacci_grid(config.diffuse_grid_points());
  const int n_a = config.ambisonics_order;
  const MatrixXcd y = sh_matrix(grid, n_a);
  const std::vector<int> plotted = {ChannelIndex(0, 0).acn(),
                                    ChannelIndex(1, -1).acn(),
                                    ChannelIndex(1, 1).acn()};
  const int truncated_orders[] = {1, 4};

  std::vector<ResultTable> tables;
  for (ArrayKind kind : kStudyArrays) {
    const ArrayGeometry geom =
        make_array(kind, config.num_mics, config.radius);
    ResultTable table;
    table.name = "fig2_" + array_kind_name(kind);
    table.columns = {"f_hz"};
    for (const char* enc : {"nv1", "nv4", "asm"}) {
      for (int acn : plotted) {
        table.columns.push_back(std::string(enc) + "_" +
                                channel_tag(ChannelIndex::from_acn(acn)));
      }
    }
    for (double f : freqs) {
      const SteeringMatrix v = steering_matrix(geom, grid, f);
      const DiffuseModel model = DiffuseModel::from_snr(grid, config.snr_db);
      std::vector<double> row{f};
      for (int n_v : truncated_orders) {
        const FilterBank bank =
            truncated_sh_encoder(steering_sh(geom, f, n_v), n_a);
        for (int acn : plotted) {
          row.push_back(
              nmse_ambisonics(v, bank.entries.col(acn), y.col(acn), model)
                  .value_db);
        }
      }
      const FilterBank bank = asm_filters(v, y, config.snr_db);
      for (int acn : plotted) {
        row.push_back(
            nmse_ambisonics(v, bank.entries.col(acn), y.col(acn), model)
                .value_db);
      }
      table.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

namespace {

// w such that w^H x reproduces the decomposed rendering of Eq-style
// composition: w = C_asm conj(T h_asm) + C_res conj(T_res h_res) per ear.
VectorXcd compose_renderer(const FilterBank& asm_bank,
                           const FilterBank* res_bank,
                           const ChannelPartition& partition,
                           const VectorXcd& hrtf_ear) {
  const int n_a = partition.ambisonics_order;
  const Eigen::MatrixXd t = conjugation_matrix(n_a);
  const VectorXcd h_asm = hrtf_ear.head(num_channels(n_a));
  VectorXcd w = asm_bank.entries * (t * h_asm).conjugate();
  if (res_bank != nullptr && !partition.residual.empty()) {
    const VectorXcd h_res =
        hrtf_ear.segment(num_channels(n_a), partition.residual.size());
    w += res_bank->entries *
         (residual_conjugation(partition) * h_res).conjugate();
  }
  return w;
}

}  // namespace

std::vector<ResultTable> run_fig3(const ExperimentConfig& config) {
  const std::vector<double> freqs = config.frequencies();
  const int n_ref = config.reference_order;
  const int n_a = config.ambisonics_order;
  const SamplingGrid grid = make_fibonacci_grid(config.diffuse_grid_points());
  const SamplingGrid hrtf_grid = make_gauss_legendre_grid(n_ref);
  const MatrixXcd y_ref = sh_matrix(grid, n_ref);
  const MatrixXcd y_asm = y_ref.leftCols(num_channels(n_a));

  // per-frequency reference HRTF coefficients and space-domain gains,
  // shared across array layouts
  std::vector<HrtfSh> hrtf(freqs.size());
  std::vector<VectorXcd> d_left(freqs.size()), d_right(freqs.size());
  for (size_t fi = 0; fi < freqs.size(); ++fi) {
    hrtf[fi] = hrtf_to_sh(
        sphere_hrtf(config.head_radius, hrtf_grid, freqs[fi]), n_ref);
    d_left[fi] = y_ref * hrtf[fi].left;
    d_right[fi] = y_ref * hrtf[fi].right;
  }

  std::vector<ResultTable> tables;
  for (ArrayKind kind : kStudyArrays) {
    const ArrayGeometry geom =
        make_array(kind, config.num_mics, config.radius);
    ResultTable table;
    table.name = "fig3_" + array_kind_name(kind);
    table.columns = {"f_hz", "asm"};
    for (int order : config.residual_orders) {
      const int count = num_channels(order) - num_channels(n_a);
      table.columns.push_back("asm_res" + std::to_string(count));
    }
    table.columns.push_back("bsm");

    for (size_t fi = 0; fi < freqs.size(); ++fi) {
      const double f = freqs[fi];
      const SteeringMatrix v = steering_matrix(geom, grid, f);
      const DiffuseModel model = DiffuseModel::from_snr(grid, config.snr_db);
      const FilterBank asm_bank = asm_filters(v, y_asm, config.snr_db);

      std::vector<double> row{f};
      {
        const ChannelPartition trivial = channel_partition(n_a, n_a);
        const VectorXcd wl =
            compose_renderer(asm_bank, nullptr, trivial, hrtf[fi].left);
        const VectorXcd wr =
            compose_renderer(asm_bank, nullptr, trivial, hrtf[fi].right);
        row.push_back(nmse_binaural(v, wl, wr, d_left[fi], d_right[fi], model)
                          .value_db);
      }
      for (int order : config.residual_orders) {
        const ChannelPartition part = channel_partition(n_a, order);
        const MatrixXcd y_res = y_ref.middleCols(num_channels(n_a),
                                                 part.residual.size());
        const FilterBank res_bank =
            residual_filters(v, y_res, part, config.snr_db);
        const VectorXcd wl =
            compose_renderer(asm_bank, &res_bank, part, hrtf[fi].left);
        const VectorXcd wr =
            compose_renderer(asm_bank, &res_bank, part, hrtf[fi].right);
        row.push_back(nmse_binaural(v, wl, wr, d_left[fi], d_right[fi], model)
                          .value_db);
      }
      {
        const FilterBank bsm =
            bsm_filters(v, d_left[fi], d_right[fi], config.snr_db);
        row.push_back(nmse_binaural(v, bsm.entries.col(0), bsm.entries.col(1),
                                    d_left[fi], d_right[fi], model)
                          .value_db);
      }
      table.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

void emit_outputs(const ResultTable& table, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + table.name + ".csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_outputs: cannot open " + path);
  for (size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << "\n";
  char buf[64];
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.6g", row[c]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
}

void emit_figure(const std::vector<ResultTable>& tables,
                 const std::string& figure_name, const std::string& dir) {
  for (const ResultTable& table : tables) emit_outputs(table, dir);

  const std::string path = dir + "/" + figure_name + ".gnuplot";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_figure: cannot open " + path);
  out << "set datafile separator ','\n"
      << "set logscale x\n"
      << "set xlabel 'frequency [Hz]'\n"
      << "set ylabel 'dB'\n"
      << "set key outside\n"
      << "set terminal pngcairo size 900,600\n";
  for (const ResultTable& table : tables) {
    out << "set output '" << table.name << ".png'\n"
        << "set title '" << table.name << "'\n"
        << "plot ";
    for (size_t c = 1; c < table.columns.size(); ++c) {
      if (c > 1) out << ", ";
      out << "'" << table.name << ".csv' using 1:" << c + 1
          << " with lines title '" << table.columns[c] << "'";
    }
    out << "\n";
  }
}

}  // namespace ambi
