#include "lightray/fourier_slice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lightray/parallel.hpp"
#include "lightray/quadrature.hpp"

namespace lightray {

namespace {

void require_unit(const Vec& omega) {
  if (std::abs(omega.norm() - 1.0) > 1e-10) throw std::invalid_argument("hyperplane frame needs unit omega");
}

}  // namespace

HyperplaneFrame hyperplane_frame(const Vec& omega, double extent, int nodes_per_axis) {
  require_unit(omega);
  if (nodes_per_axis < 2) throw std::invalid_argument("hyperplane frame needs at least 2 nodes per axis");
  const int axes = static_cast<int>(omega.size()) + 1;
  const Vec nu = lift(omega).normalized();

  // Candidates e_i minus their nu component; the shortest one is dropped
  // (ties drop the lowest index) and the rest are orthonormalised longest first.
  std::vector<Vec> candidates;
  std::vector<double> norms;
  for (int i = 0; i < axes; ++i) {
    Vec e = Vec::Zero(axes);
    e(i) = 1.0;
    candidates.push_back(e - nu(i) * nu);
    norms.push_back(candidates.back().norm());
  }
  int drop = 0;
  for (int i = 1; i < axes; ++i)
    if (norms[i] < norms[drop] - 1e-12) drop = i;
  std::vector<int> order;
  for (int i = 0; i < axes; ++i)
    if (i != drop) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return norms[a] > norms[b] + 1e-12; });

  HyperplaneFrame frame{omega, {}, extent, nodes_per_axis};
  for (int i : order) {
    Vec v = candidates[i];
    for (int pass = 0; pass < 2; ++pass) {
      v -= v.dot(nu) * nu;
      for (const auto& b : frame.basis) v -= v.dot(b) * b;
    }
    frame.basis.push_back(v.normalized());
  }
  return frame;
}

std::vector<std::complex<double>> partial_ft_all(const MomentSource& src, const Vec& omega, int kmax,
                                                 const Vec& zeta, const SliceGrid& grid) {
  const int n = src.n();
  if (omega.size() != n || zeta.size() != n + 1) throw std::invalid_argument("partial_ft: dimension mismatch");
  require_unit(omega);
  const Vec normal = lift(omega);
  if (std::abs(zeta.dot(normal)) > 1e-10 * std::max(1.0, zeta.norm()))
    throw std::invalid_argument("partial_ft: zeta is not in the hyperplane (1, omega)^perp");

  const double extent = src.hyperplane_extent(omega, grid.extent_sigmas);
  const HyperplaneFrame frame = hyperplane_frame(omega, extent, grid.nodes_per_axis);
  const Rule1D rule = trapezoid(grid.nodes_per_axis);
  const int N = grid.nodes_per_axis;

  std::size_t points = 1;
  for (int a = 0; a < n; ++a) points *= static_cast<std::size_t>(N);
  const std::size_t stride = static_cast<std::size_t>(src.channels()) * (kmax + 1);

  // Per-axis phase factors e^{-i y beta_a} times trapezoid weights.
  std::vector<std::vector<std::complex<double>>> axis_factor(n, std::vector<std::complex<double>>(N));
  for (int a = 0; a < n; ++a) {
    const double beta = frame.basis[a].dot(zeta);
    for (int j = 0; j < N; ++j) {
      const double y = extent * rule.nodes[j];
      axis_factor[a][j] = std::polar(extent * rule.weights[j], -y * beta);
    }
  }

  std::vector<double> data(points * stride);
  parallel_for(points, [&](std::size_t idx) {
    Ray ray{Vec::Zero(n + 1), omega, 1.0};
    std::size_t rem = idx;
    for (int a = 0; a < n; ++a) {
      const int j = static_cast<int>(rem % N);
      rem /= N;
      ray.base += (extent * rule.nodes[j]) * frame.basis[a];
    }
    src.moments(ray, kmax, std::span<double>(data.data() + idx * stride, stride));
  });

  std::vector<std::complex<double>> result(stride);
  std::vector<std::complex<double>> terms(points);
  for (std::size_t s = 0; s < stride; ++s) {
    for (std::size_t idx = 0; idx < points; ++idx) {
      std::complex<double> factor = 1.0;
      std::size_t rem = idx;
      for (int a = 0; a < n; ++a) {
        factor *= axis_factor[a][rem % N];
        rem /= N;
      }
      terms[idx] = factor * data[idx * stride + s];
    }
    result[s] = pairwise_sum(terms);
  }
  return result;
}

std::complex<double> partial_ft(const MomentSource& src, const Vec& omega, int k, const Vec& zeta,
                                const SliceGrid& grid, int channel) {
  if (channel < 0 || channel >= src.channels()) throw std::out_of_range("channel out of range");
  return partial_ft_all(src, omega, k, zeta, grid)[static_cast<std::size_t>(channel) * (k + 1) + k];
}

SliceValues slice_values(const MomentSource& src, const Vec& omega, const Vec& zeta, const SliceGrid& grid,
                         bool with_phi2) {
  const int kmax = with_phi2 ? 1 : 0;
  const auto ft = partial_ft_all(src, omega, kmax, zeta, grid);
  const double root2 = std::sqrt(2.0);
  SliceValues out;
  for (int ch = 0; ch < src.channels(); ++ch) {
    out.phi1.push_back(root2 * ft[static_cast<std::size_t>(ch) * (kmax + 1)]);
    if (with_phi2)
      out.phi2.push_back(std::complex<double>(0.0, -2.0 * root2) * ft[static_cast<std::size_t>(ch) * (kmax + 1) + 1]);
  }
  return out;
}

std::complex<double> phi1(const MomentSource& src, const Vec& omega, const Vec& zeta, const SliceGrid& grid,
                          int channel) {
  return slice_values(src, omega, zeta, grid, false).phi1.at(channel);
}

std::complex<double> phi2(const MomentSource& src, const Vec& omega, const Vec& zeta, const SliceGrid& grid,
                          int channel) {
  return slice_values(src, omega, zeta, grid, true).phi2.at(channel);
}

}  // namespace lightray
