#include "ambi/sh.hpp"

#include <cmath>
#include <stdexcept>

namespace ambi {

Direction::Direction(double theta_, double phi_) : theta(theta_), phi(phi_) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::invalid_argument("Direction: theta must lie in [0, pi]");
  }
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
}

double angle_between(const Direction& a, const Direction& b) {
  double c = std::cos(a.theta) * std::cos(b.theta) +
             std::sin(a.theta) * std::sin(b.theta) * std::cos(a.phi - b.phi);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

ChannelIndex::ChannelIndex(int n_, int m_) : n(n_), m(m_) {
  if (n < 0 || std::abs(m) > n) {
    throw std::invalid_argument("ChannelIndex: require n >= 0 and |m| <= n");
  }
}

ChannelIndex ChannelIndex::from_acn(int acn) {
  if (acn < 0) throw std::invalid_argument("ChannelIndex: negative ACN");
  const int n = static_cast<int>(std::sqrt(static_cast<double>(acn)));
  return ChannelIndex(n, acn - n * n - n);
}

namespace {

// Orthonormal associated Legendre values N_nm * P_n^m(cos theta) for a fixed
// m >= 0 and n = m..order, Condon-Shortley phase included. Stable three-term
// recurrence in n; diagonal seeded iteratively to avoid factorial overflow.
void normalized_assoc_legendre(int order, int m, double cos_theta,
                               double sin_theta, double* out) {
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int k = 1; k <= m; ++k) {
    pmm *= -sin_theta * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
  }
  out[0] = pmm;
  if (order == m) return;
  double pm1 = std::sqrt(2.0 * m + 3.0) * cos_theta * pmm;
  out[1] = pm1;
  double pm2 = pmm;
  for (int n = m + 2; n <= order; ++n) {
    const double a =
        std::sqrt((4.0 * n * n - 1.0) / (static_cast<double>(n) * n - m * m));
    const double b = std::sqrt(((n - 1.0) * (n - 1.0) - m * m) /
                               (4.0 * (n - 1.0) * (n - 1.0) - 1.0));
    const double pn = a * (cos_theta * pm1 - b * pm2);
    out[n - m] = pn;
    pm2 = pm1;
    pm1 = pn;
  }
}

// One row of the SH matrix: Y_nm(dir) for all acn indices up to order.
void sh_row(int order, const Direction& dir, Complex* row) {
  const double ct = std::cos(dir.theta);
  const double st = std::sin(dir.theta);
  std::vector<double> plm(order + 1);
  for (int m = 0; m <= order; ++m) {
    normalized_assoc_legendre(order, m, ct, st, plm.data());
    const Complex e = std::polar(1.0, m * dir.phi);
    const double neg = (m % 2 == 0) ? 1.0 : -1.0;
    for (int n = m; n <= order; ++n) {
      const double p = plm[n - m];
      row[n * n + n + m] = p * e;
      if (m > 0) row[n * n + n - m] = neg * p * std::conj(e);
    }
  }
}

}  // namespace

Complex sh_eval(const ChannelIndex& idx, const Direction& dir) {
  std::vector<Complex> row(num_channels(idx.n));
  sh_row(idx.n, dir, row.data());
  return row[idx.acn()];
}

MatrixXcd sh_matrix(const std::vector<Direction>& dirs, int order) {
  MatrixXcd y(dirs.size(), num_channels(order));
  std::vector<Complex> row(num_channels(order));
  for (size_t q = 0; q < dirs.size(); ++q) {
    sh_row(order, dirs[q], row.data());
    for (int c = 0; c < y.cols(); ++c) y(q, c) = row[c];
  }
  return y;
}

MatrixXcd sh_matrix(const SamplingGrid& grid, int order) {
  if (grid.size() == 0) throw std::invalid_argument("sh_matrix: empty grid");
  return sh_matrix(grid.directions, order);
}

Eigen::MatrixXd conjugation_matrix(int order) {
  if (order < 0) throw std::invalid_argument("conjugation_matrix: order < 0");
  const int c = num_channels(order);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(c, c);
  for (int n = 0; n <= order; ++n) {
    for (int m = -n; m <= n; ++m) {
      t(n * n + n + m, n * n + n - m) = (m % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return t;
}

double legendre_p(int n, double x) { return std::legendre(n, x); }

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre_nodes(int count, std::vector<double>& nodes,
                          std::vector<double>& weights) {
  nodes.resize(count);
  weights.resize(count);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= count; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

SamplingGrid make_gauss_legendre_grid(int order) {
  if (order < 0) {
    throw std::invalid_argument("make_gauss_legendre_grid: order < 0");
  }
  const int n_theta = order + 1;
  const int n_phi = 2 * (order + 1);
  std::vector<double> nodes, gl_weights;
  gauss_legendre_nodes(n_theta, nodes, gl_weights);

  SamplingGrid grid;
  grid.kind = GridKind::GaussLegendre;
  grid.alias_free_order = order;
  grid.directions.reserve(n_theta * n_phi);
  grid.weights.resize(n_theta * n_phi);
  int q = 0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(nodes[i]);
    const double w = gl_weights[i] * 2.0 * kPi / n_phi;
    for (int j = 0; j < n_phi; ++j) {
      grid.directions.emplace_back(theta, 2.0 * kPi * j / n_phi);
      grid.weights[q++] = w;
    }
  }
  return grid;
}

SamplingGrid make_fibonacci_grid(int count) {
  if (count < 1) throw std::invalid_argument("make_fibonacci_grid: count < 1");
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  SamplingGrid grid;
  grid.kind = GridKind::Fibonacci;
  grid.directions.reserve(count);
  grid.weights = VectorXd::Constant(count, kFourPi / count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    grid.directions.emplace_back(std::acos(z), golden_angle * i);
  }
  return grid;
}

SamplingGrid make_fibonacci_grid(int count, int order) {
  if (count < num_channels(order)) {
    throw std::invalid_argument(
        "make_fibonacci_grid: count < (order+1)^2, not alias-free at the "
        "requested order");
  }
  SamplingGrid grid = make_fibonacci_grid(count);
  grid.alias_free_order = order;
  return grid;
}

}  // namespace ambi
