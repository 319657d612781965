#include "ambi/binaural.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ambi/array.hpp"
#include "ambi/special.hpp"

namespace ambi {

Direction left_ear_direction() { return Direction(kPi / 2.0, kPi / 2.0); }
Direction right_ear_direction() { return Direction(kPi / 2.0, -kPi / 2.0); }

VectorXcd sphere_hrtf_ear(double head_radius, const Direction& ear,
                          const SamplingGrid& grid, double freq_hz) {
  if (!(head_radius > 0.0)) {
    throw std::invalid_argument("sphere_hrtf: head radius <= 0");
  }
  const double k = wavenumber(freq_hz);
  const int order = auto_order(freq_hz, head_radius);
  VectorXcd h(grid.size());
  for (int q = 0; q < grid.size(); ++q) {
    const double gamma = angle_between(ear, grid.directions[q]);
    h(q) = rigid_sphere_pressure(k, head_radius, head_radius,
                                 std::cos(gamma), order);
  }
  return h;
}

HrtfSamples sphere_hrtf(double head_radius, const SamplingGrid& grid,
                        double freq_hz) {
  HrtfSamples samples;
  samples.freq_hz = freq_hz;
  samples.grid = &grid;
  samples.left = sphere_hrtf_ear(head_radius, left_ear_direction(), grid,
                                 freq_hz);
  samples.right = sphere_hrtf_ear(head_radius, right_ear_direction(), grid,
                                  freq_hz);
  return samples;
}

HrtfSh hrtf_to_sh(const HrtfSamples& samples, int order) {
  const SamplingGrid* grid = samples.grid;
  if (grid == nullptr) throw std::invalid_argument("hrtf_to_sh: no grid");
  if (grid->kind != GridKind::GaussLegendre || grid->alias_free_order < order) {
    throw std::invalid_argument(
        "hrtf_to_sh: grid must be Gauss-Legendre and alias-free at the "
        "requested order");
  }
  const MatrixXcd y = sh_matrix(*grid, order);
  const MatrixXcd yw = y.adjoint() * grid->weights.asDiagonal();
  HrtfSh sh;
  sh.freq_hz = samples.freq_hz;
  sh.order = order;
  sh.left = yw * samples.left;
  sh.right = yw * samples.right;
  return sh;
}

namespace {

// (T v)_{acn(n,m)} = (-1)^m v_{acn(n,-m)}, zero-padding past the input size
VectorXcd apply_conjugation(const VectorXcd& v, int order) {
  VectorXcd out = VectorXcd::Zero(num_channels(order));
  for (int n = 0; n <= order; ++n) {
    for (int m = -n; m <= n; ++m) {
      const int src = n * n + n - m;
      if (src >= v.size()) continue;
      out(n * n + n + m) = ((m % 2 == 0) ? 1.0 : -1.0) * v(src);
    }
  }
  return out;
}

VectorXcd resized(const VectorXcd& v, int channels) {
  VectorXcd out = VectorXcd::Zero(channels);
  const auto take = std::min<Eigen::Index>(channels, v.size());
  out.head(take) = v.head(take);
  return out;
}

}  // namespace

BinauralPair render_ambisonics(const HrtfSh& hrtf, const VectorXcd& ambisonics,
                               int order) {
  const int channels = num_channels(order);
  const VectorXcd ta = apply_conjugation(ambisonics, order);
  BinauralPair p;
  p.left = resized(hrtf.left, channels).transpose() * ta;
  p.right = resized(hrtf.right, channels).transpose() * ta;
  return p;
}

Eigen::MatrixXd residual_conjugation(const ChannelPartition& partition) {
  const auto size = partition.residual.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
  const int base = num_channels(partition.ambisonics_order);
  for (size_t j = 0; j < size; ++j) {
    const ChannelIndex& idx = partition.residual[j];
    const int partner = idx.n * idx.n + idx.n - idx.m - base;
    t(j, partner) = (idx.m % 2 == 0) ? 1.0 : -1.0;
  }
  return t;
}

BinauralPair render_decomposed(const HrtfSh& hrtf,
                               const ChannelPartition& partition,
                               const VectorXcd& ambisonics,
                               const VectorXcd& residual) {
  if (ambisonics.size() !=
          static_cast<Eigen::Index>(partition.ambisonic.size()) ||
      residual.size() != static_cast<Eigen::Index>(partition.residual.size())) {
    throw std::invalid_argument("render_decomposed: partition size mismatch");
  }
  if (hrtf.order < partition.full_order) {
    throw std::invalid_argument(
        "render_decomposed: HRTF order below partition order");
  }
  BinauralPair p = render_ambisonics(hrtf, ambisonics,
                                     partition.ambisonics_order);
  if (partition.residual.empty()) return p;

  const int base = static_cast<int>(partition.ambisonic.size());
  const VectorXcd tr = residual_conjugation(partition) * residual;
  const auto size = static_cast<Eigen::Index>(partition.residual.size());
  p.left += hrtf.left.segment(base, size).cwiseProduct(tr).sum();
  p.right += hrtf.right.segment(base, size).cwiseProduct(tr).sum();
  return p;
}

void save_hrtf(const HrtfSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_hrtf: cannot open " + path);
  out.precision(17);
  out << "hrtf " << set.order << " " << set.entries.size() << " 2\n";
  for (const HrtfSh& sh : set.entries) {
    out << "freq " << sh.freq_hz << "\n";
    for (const VectorXcd* ear : {&sh.left, &sh.right}) {
      for (Eigen::Index c = 0; c < ear->size(); ++c) {
        if (c) out << " ";
        out << (*ear)(c).real() << "," << (*ear)(c).imag();
      }
      out << "\n";
    }
  }
}

HrtfSet load_hrtf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_hrtf: cannot open " + path);
  std::string magic;
  size_t freq_count = 0;
  int ear_count = 0;
  HrtfSet set;
  in >> magic >> set.order >> freq_count >> ear_count;
  if (!in || magic != "hrtf" || set.order < 0 || set.order > kMaxOrder ||
      ear_count != 2) {
    throw std::runtime_error("load_hrtf: malformed header in " + path);
  }
  const int channels = num_channels(set.order);
  double prev_freq = -1.0;
  for (size_t f = 0; f < freq_count; ++f) {
    HrtfSh sh;
    sh.order = set.order;
    std::string key;
    in >> key >> sh.freq_hz;
    if (!in || key != "freq") {
      throw std::runtime_error("load_hrtf: bad frequency record " +
                               std::to_string(f) + " in " + path);
    }
    if (sh.freq_hz <= prev_freq) {
      throw std::runtime_error(
          "load_hrtf: non-monotone frequency axis at record " +
          std::to_string(f) + " in " + path);
    }
    prev_freq = sh.freq_hz;
    for (VectorXcd* ear : {&sh.left, &sh.right}) {
      ear->resize(channels);
      for (int c = 0; c < channels; ++c) {
        std::string pair;
        in >> pair;
        const auto comma = pair.find(',');
        if (!in || comma == std::string::npos) {
          throw std::runtime_error("load_hrtf: bad coefficient " +
                                   std::to_string(c) + " at record " +
                                   std::to_string(f) + " in " + path);
        }
        (*ear)(c) = Complex(std::stod(pair.substr(0, comma)),
                            std::stod(pair.substr(comma + 1)));
      }
    }
    set.entries.push_back(std::move(sh));
  }
  return set;
}

}  // namespace ambi
