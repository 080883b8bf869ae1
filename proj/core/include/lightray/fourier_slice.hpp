#pragma once

#include <complex>
#include <vector>

#include "lightray/linalg.hpp"
#include "lightray/ray_transform.hpp"

namespace lightray {

struct SliceGrid {
  // The cube half-width is extent_sigmas * sigma plus the largest projected
  // centre offset of the data source.
  double extent_sigmas = 6.0;
  int nodes_per_axis = 24;
};

// Orthonormal basis of (1, omega)^perp used as trapezoid coordinates.
struct HyperplaneFrame {
  Vec omega;
  std::vector<Vec> basis;
  double extent = 0.0;
  int nodes_per_axis = 0;
};

HyperplaneFrame hyperplane_frame(const Vec& omega, double extent, int nodes_per_axis);

// int_{(1,omega)^perp} L^{m,k}(l, omega) e^{-i l.zeta} dH(l) for k = 0..kmax and
// every channel of src; result[ch * (kmax + 1) + k].
std::vector<std::complex<double>> partial_ft_all(const MomentSource& src, const Vec& omega, int kmax,
                                                 const Vec& zeta, const SliceGrid& grid);

std::complex<double> partial_ft(const MomentSource& src, const Vec& omega, int k, const Vec& zeta,
                                const SliceGrid& grid, int channel = 0);

// Phi1 = sqrt(2) F(L^{m,0}) equals omega~^m . f^(zeta).
// Phi2 = -2 sqrt(2) i F(L^{m,1}) equals omega~^m . (omega~ . grad) f^(zeta).
struct SliceValues {
  std::vector<std::complex<double>> phi1;  // per channel
  std::vector<std::complex<double>> phi2;  // per channel, empty unless requested
};

SliceValues slice_values(const MomentSource& src, const Vec& omega, const Vec& zeta, const SliceGrid& grid,
                         bool with_phi2);

std::complex<double> phi1(const MomentSource& src, const Vec& omega, const Vec& zeta, const SliceGrid& grid,
                          int channel = 0);
std::complex<double> phi2(const MomentSource& src, const Vec& omega, const Vec& zeta, const SliceGrid& grid,
                          int channel = 0);

}  // namespace lightray
