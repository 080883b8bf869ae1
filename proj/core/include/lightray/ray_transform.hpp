#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lightray/linalg.hpp"
#include "lightray/phantom.hpp"
#include "lightray/quadrature.hpp"

namespace lightray {

// Line {base + s (c, omega)}. omega need not be unit: off-sphere directions
// give the extended transform needed for omega-derivatives.
struct Ray {
  Vec base;
  Vec omega;
  double c = 1.0;

  Vec direction() const { return lift(omega, c); }
};

struct FiniteDifference {
  double h = 1e-4;         // single central differences
  double h_nested = 1e-3;  // each level of nested differences
};

// Anything that yields L^{m,k} data along rays. A source may carry several
// channels sharing one rank (for example all columns of a reduced tensor).
class MomentSource {
 public:
  virtual ~MomentSource() = default;

  virtual int n() const = 0;
  virtual int rank() const = 0;
  virtual int channels() const { return 1; }

  // Writes channels() * (kmax + 1) values, out[ch * (kmax + 1) + k].
  virtual void moments(const Ray& ray, int kmax, std::span<double> out) const = 0;

  // Half-width of a cube in hyperplane coordinates outside which the data on
  // (1, omega)^perp is negligible; `sigmas` is the envelope width multiple.
  virtual double hyperplane_extent(const Vec& omega, double sigmas) const = 0;
};

// Forward model of a phantom: Gauss-Legendre (or trapezoid) quadrature on a
// window of +-halfwidth*sigma/|omega~| around each term's closest approach,
// optional additive Gaussian noise keyed by (seed, ray, k).
class DataOracle final : public MomentSource {
 public:
  explicit DataOracle(PhantomField phantom, QuadratureSpec quad = {}, double noise_sigma = 0.0,
                      std::uint64_t seed = 0);

  int n() const override { return phantom_.n; }
  int rank() const override { return phantom_.m; }
  void moments(const Ray& ray, int kmax, std::span<double> out) const override;
  double hyperplane_extent(const Vec& omega, double sigmas) const override;

  const PhantomField& phantom() const { return phantom_; }
  const QuadratureSpec& quadrature() const { return quad_; }
  double noise_sigma() const { return noise_sigma_; }
  std::uint64_t seed() const { return seed_; }

 private:
  PhantomField phantom_;
  QuadratureSpec quad_;
  double noise_sigma_;
  std::uint64_t seed_;
  std::vector<double> nodes_;
  std::vector<double> weights_;  // rule weight times the Gaussian node factor
};

// Validates a ray against a source's dimension.
void check_ray(const MomentSource& src, const Ray& ray);

double mlrt_eval(const MomentSource& src, const Ray& ray, int k, int channel = 0);

// Central differences; p is a spatial slot in 1..n.
double mlrt_dx(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel = 0);
double mlrt_dt(const MomentSource& src, const Ray& ray, int k, double h, int channel = 0);
double mlrt_domega(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel = 0);

// [grad_omega L - (omega . grad_omega L) omega]_p for unit omega.
double tangential_gradient(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel = 0);

// |<omega~, grad>^p L^{m,k} - (-1)^p k!/(k-p)! L^{m,k-p}| with p nested
// central differences of step h along omega~.
double check_moment_descent(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel = 0);

// |m L^{m-1,k}(column p) - (d_omega_p L^{m,k} - d_x_p L^{m,k+1})|, column
// data from the phantom's column field.
double check_rank_reducer(const DataOracle& oracle, const Ray& ray, int k, int p, double h);

}  // namespace lightray
