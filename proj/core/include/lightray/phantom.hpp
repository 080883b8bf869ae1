#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lightray/linalg.hpp"
#include "lightray/tensor.hpp"

namespace lightray {

// coeff * exp(-|z - center|^2 / sigma^2)
struct GaussianTerm {
  RealTensor coeff;
  Vec center;
  double sigma = 1.0;
};

struct PhantomField {
  int n = 3;
  int m = 0;
  double c = 1.0;
  std::vector<GaussianTerm> terms;

  // Throws std::invalid_argument when terms disagree on (n, m) or sigma <= 0.
  void validate() const;
  double coeff_scale() const;  // max |coeff| over all terms
};

RealTensor eval_field(const PhantomField& f, const Vec& point);

// Closed-form transform with the convention f^(zeta) = int f(z) e^{-i z.zeta} dz.
ComplexTensor fourier_ref(const PhantomField& f, const Vec& zeta);

// sum_j w_j (w . grad_zeta) f^_{j...} fully contracted with w; closed form.
std::complex<double> fourier_ref_directional(const PhantomField& f, const Vec& zeta, const Vec& w);

PhantomField column(const PhantomField& f, int p);

// Replaces every coefficient by the trace-free part of decompose(coeff, 1).
PhantomField make_tracefree(const PhantomField& f);

// Every coefficient replaced by i_{g_{1/c}} of the given coefficient.
PhantomField pure_trace(const PhantomField& lower, double c);

PhantomField scale(const PhantomField& f, double alpha);
PhantomField sum(const PhantomField& a, const PhantomField& b);

struct RandomPhantomOptions {
  int n = 3;
  int m = 1;
  double c = 1.0;
  int terms = 2;
  double sigma_min = 0.8;
  double sigma_max = 1.2;
  double center_radius = 0.5;
  bool tracefree = false;
};

PhantomField random_phantom(const RandomPhantomOptions& opts, std::mt19937_64& rng);

// Single origin-centred unit-width term.
PhantomField gaussian_phantom(const RealTensor& coeff, double sigma = 1.0, double c = 1.0);

}  // namespace lightray
