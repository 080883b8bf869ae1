#pragma once

// Closed-form light-ray moments of Gaussian phantoms.
//
// Along z = x + s w (w = (c, omega)), |z - z0|^2 = |w|^2 (s - s*)^2 + r^2, so
// int s^k exp(-|z - z0|^2 / sigma^2) ds expands binomially around s* into
// half-integer Gamma moments of a centred Gaussian.

#include <cmath>
#include <vector>

#include "dense_tensor.hpp"
#include "lightray/phantom.hpp"
#include "lightray/ray_transform.hpp"

namespace oracle {

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// int s^k exp(-|d + s w|^2 / sigma^2) ds
inline double line_moment(const std::vector<double>& d, const std::vector<double>& w, double sigma, int k) {
  double ww = 0.0, dw = 0.0, dd = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    ww += w[i] * w[i];
    dw += d[i] * w[i];
    dd += d[i] * d[i];
  }
  const double a = ww / (sigma * sigma);
  const double s_star = -dw / ww;
  const double r2 = dd - dw * dw / ww;
  double total = 0.0;
  for (int j = 0; j <= k; j += 2) {
    const double central = std::tgamma(0.5 * (j + 1)) / std::pow(a, 0.5 * (j + 1));
    total += binom(k, j) * std::pow(s_star, k - j) * central;
  }
  return std::exp(-r2 / (sigma * sigma)) * total;
}

// u_{i1..im} w_i1 ... w_im on a full array.
inline double contract(const Dense& u, const std::vector<double>& w) {
  double total = 0.0;
  for (std::size_t f = 0; f < u.v.size(); ++f) {
    double prod = u.v[f];
    for (int i : u.unflat(f)) prod *= w[static_cast<std::size_t>(i)];
    total += prod;
  }
  return total;
}

inline Dense to_dense(const lightray::RealTensor& t) {
  Dense out(t.axes(), t.rank());
  out.v = lightray::expand(t);
  return out;
}

inline double mlrt(const lightray::PhantomField& f, const lightray::Ray& ray, int k) {
  const int axes = f.n + 1;
  std::vector<double> w(static_cast<std::size_t>(axes));
  w[0] = ray.c;
  for (int i = 0; i < f.n; ++i) w[static_cast<std::size_t>(i + 1)] = ray.omega(i);
  double total = 0.0;
  for (const auto& term : f.terms) {
    std::vector<double> d(static_cast<std::size_t>(axes));
    for (int i = 0; i < axes; ++i) d[static_cast<std::size_t>(i)] = ray.base(i) - term.center(i);
    total += contract(to_dense(term.coeff), w) * line_moment(d, w, term.sigma, k);
  }
  return total;
}

}  // namespace oracle
