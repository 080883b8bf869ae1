#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lightray {

// Spacetime vectors carry at most 1 + 8 entries; fixed capacity keeps the
// ray kernels free of heap traffic.
inline constexpr int kMaxAxes = 9;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAxes, 1>;
using CVec = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAxes, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxAxes, kMaxAxes>;

// (c, omega) as a spacetime vector.
inline Vec lift(const Vec& omega, double c = 1.0) {
  Vec out(omega.size() + 1);
  out(0) = c;
  out.tail(omega.size()) = omega;
  return out;
}

}  // namespace lightray
