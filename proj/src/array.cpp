#include "ambi/array.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ambi/special.hpp"

namespace ambi {

ArrayGeometry make_array(ArrayKind kind, int num_mics, double radius) {
  if (num_mics < 1) throw std::invalid_argument("make_array: M < 1");
  if (!(radius > 0.0)) throw std::invalid_argument("make_array: radius <= 0");

  ArrayGeometry geom;
  geom.kind = kind;
  geom.scatterer_radius = radius;
  geom.mics.reserve(num_mics);

  switch (kind) {
    case ArrayKind::Spherical: {
      if (num_mics == 4) {
        // regular tetrahedron
        const double vertices[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1},
                                       {-1, -1, 1}};
        for (const auto& v : vertices) {
          const double norm = std::sqrt(3.0);
          const double theta = std::acos(v[2] / norm);
          geom.mics.push_back({radius, Direction(theta, std::atan2(v[1], v[0]))});
        }
      } else {
        const SamplingGrid g = make_fibonacci_grid(num_mics);
        for (const auto& d : g.directions) geom.mics.push_back({radius, d});
      }
      break;
    }
    case ArrayKind::Circular:
      for (int i = 0; i < num_mics; ++i) {
        geom.mics.push_back(
            {radius, Direction(kPi / 2.0, 2.0 * kPi * i / num_mics)});
      }
      break;
    case ArrayKind::Semicircular:
      if (num_mics < 2) {
        throw std::invalid_argument("make_array: semicircular needs M >= 2");
      }
      for (int i = 0; i < num_mics; ++i) {
        geom.mics.push_back(
            {radius, Direction(kPi / 2.0, kPi * i / (num_mics - 1))});
      }
      break;
    case ArrayKind::Custom:
      throw std::invalid_argument("make_array: custom arrays come from files");
  }
  return geom;
}

Complex radial_response(int n, double k, double r, double a) {
  if (!(k > 0.0)) throw std::invalid_argument("radial_response: k <= 0");
  if (a > 0.0 && r < a) {
    throw std::invalid_argument("radial_response: r < scatterer radius");
  }
  // (-i)^n: a wave arriving from a direction propagates away from it, so
  // under the e^{-i omega t} convention the incident field is e^{-ik.x}
  static const Complex i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const Complex scale = kFourPi * i_pow[n % 4];
  if (a == 0.0) return scale * spherical_bessel_j(n, k * r);
  const Complex scatter = spherical_bessel_j_deriv(n, k * a) /
                          spherical_hankel_deriv(n, k * a) *
                          spherical_hankel(n, k * r);
  return scale * (spherical_bessel_j(n, k * r) - scatter);
}

Complex rigid_sphere_pressure(double k, double r, double a, double cos_gamma,
                              int order) {
  Complex p = 0.0;
  for (int n = 0; n <= order; ++n) {
    p += radial_response(n, k, r, a) * (2.0 * n + 1.0) / kFourPi *
         legendre_p(n, cos_gamma);
  }
  return p;
}

int auto_order(double freq_hz, double radius) {
  if (!(freq_hz > 0.0)) throw std::invalid_argument("auto_order: freq <= 0");
  const double ka = wavenumber(freq_hz) * radius;
  const int order = static_cast<int>(std::ceil(std::exp(1.0) * ka / 2.0)) + 8;
  return std::min(order, kMaxOrder);
}

ShSteeringMatrix steering_sh(const ArrayGeometry& geom, double freq_hz,
                             int order) {
  if (order > kMaxOrder) throw std::invalid_argument("steering_sh: order cap");
  const double k = wavenumber(freq_hz);
  const int m_count = geom.num_mics();

  ShSteeringMatrix v;
  v.freq_hz = freq_hz;
  v.order = order;
  v.entries.resize(num_channels(order), m_count);
  for (int i = 0; i < m_count; ++i) {
    const MicPosition& mic = geom.mics[i];
    std::vector<Complex> b(order + 1);
    for (int n = 0; n <= order; ++n) {
      b[n] = radial_response(n, k, mic.r, geom.scatterer_radius);
    }
    std::vector<Direction> one{mic.dir};
    const MatrixXcd y = sh_matrix(one, order);
    for (int c = 0; c < v.entries.rows(); ++c) {
      const int n = ChannelIndex::from_acn(c).n;
      v.entries(c, i) = b[n] * std::conj(y(0, c));
    }
  }
  return v;
}

SteeringMatrix steering_matrix(const ArrayGeometry& geom,
                               const SamplingGrid& grid, double freq_hz,
                               std::optional<int> order) {
  double max_r = geom.scatterer_radius;
  for (const auto& mic : geom.mics) max_r = std::max(max_r, mic.r);
  int n_v = order.value_or(auto_order(freq_hz, max_r));
  if (grid.size() < num_channels(n_v)) {
    if (order.has_value()) {
      throw std::invalid_argument(
          "steering_matrix: grid has fewer than (order+1)^2 points");
    }
    // automatic order: clamp to the largest order the grid supports
    n_v = static_cast<int>(std::sqrt(static_cast<double>(grid.size()))) - 1;
  }
  const ShSteeringMatrix v_nm = steering_sh(geom, freq_hz, n_v);
  const MatrixXcd y = sh_matrix(grid, n_v);

  SteeringMatrix v;
  v.freq_hz = freq_hz;
  v.grid = &grid;
  v.entries = v_nm.entries.transpose() * y.transpose();
  return v;
}

void save_geometry(const ArrayGeometry& geom, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_geometry: cannot open " + path);
  out.precision(17);
  out << "# microphone array geometry: r theta phi (meters, radians)\n";
  out << "scatterer_radius " << geom.scatterer_radius << "\n";
  for (const auto& mic : geom.mics) {
    out << mic.r << " " << mic.dir.theta << " " << mic.dir.phi << "\n";
  }
}

ArrayGeometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_geometry: cannot open " + path);
  ArrayGeometry geom;
  geom.kind = ArrayKind::Custom;
  bool have_radius = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (!have_radius) {
      std::string key;
      ss >> key >> geom.scatterer_radius;
      if (key != "scatterer_radius" || !ss) {
        throw std::runtime_error("load_geometry: expected scatterer_radius at " +
                                 path + ":" + std::to_string(line_no));
      }
      have_radius = true;
      continue;
    }
    double r, theta, phi;
    if (!(ss >> r >> theta >> phi)) {
      throw std::runtime_error("load_geometry: malformed row at " + path + ":" +
                               std::to_string(line_no));
    }
    if (geom.scatterer_radius > 0.0 && r < geom.scatterer_radius) {
      throw std::runtime_error("load_geometry: mic inside scatterer at " +
                               path + ":" + std::to_string(line_no));
    }
    geom.mics.push_back({r, Direction(theta, phi)});
  }
  if (!have_radius || geom.mics.empty()) {
    throw std::runtime_error("load_geometry: no microphones in " + path);
  }
  return geom;
}

}  // namespace ambi
