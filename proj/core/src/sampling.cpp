#include "lightray/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "lightray/reconstruction.hpp"

namespace lightray {

Vec random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Ray random_ray(int n, double base_radius, std::mt19937_64& rng, double c) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = base_radius * std::pow(unit(rng), 1.0 / (n + 1));
  Ray ray;
  ray.base = r * random_unit_vector(n + 1, rng);
  ray.omega = random_unit_vector(n, rng);
  ray.c = c;
  return ray;
}

std::vector<Vec> sample_zetas(const ReconConfig& cfg, int count, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(cfg.zeta_min, cfg.zeta_max);
  std::vector<Vec> out;
  const long max_attempts = 200000L * std::max(count, 1);
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
    const Vec dir = random_unit_vector(cfg.n() + 1, rng);
    const Vec zeta = radius(rng) * dir;
    try {
      const Vec omega = omega_for_zeta(zeta, cfg.omega0, cfg.delta);
      if ((omega - cfg.omega0).norm() >= cfg.aperture_use * cfg.delta) continue;
      zeta_geometry(zeta, cfg);
      const Vec step = cfg.fd_eps * lift(omega);
      zeta_geometry(zeta + step, cfg);
      zeta_geometry(zeta - step, cfg);
    } catch (const GeometryError&) {
      continue;
    }
    out.push_back(zeta);
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("sample_zetas: aperture too small to find enough admissible frequencies");
  return out;
}

}  // namespace lightray
