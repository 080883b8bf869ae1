#include "lightray/ray_transform.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lightray {

namespace {

constexpr int kMaxMoment = 15;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, double v) { return splitmix(h ^ std::bit_cast<std::uint64_t>(v)); }

// Standard normal variate that depends only on the key.
double keyed_normal(std::uint64_t key) {
  const std::uint64_t a = splitmix(key), b = splitmix(a);
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

DataOracle::DataOracle(PhantomField phantom, QuadratureSpec quad, double noise_sigma, std::uint64_t seed)
    : phantom_(std::move(phantom)), quad_(quad), noise_sigma_(noise_sigma), seed_(seed) {
  phantom_.validate();
  quad_.validate();
  if (!(noise_sigma_ >= 0.0)) throw std::invalid_argument("DataOracle: noise sigma must be >= 0");
  const Rule1D rule = make_rule(quad_);
  nodes_ = rule.nodes;
  weights_.resize(rule.nodes.size());
  // Along the window the envelope is exp(-halfwidth^2 x^2) whatever the ray.
  for (std::size_t q = 0; q < nodes_.size(); ++q)
    weights_[q] = rule.weights[q] * std::exp(-quad_.halfwidth * quad_.halfwidth * nodes_[q] * nodes_[q]);
}

void check_ray(const MomentSource& src, const Ray& ray) {
  if (ray.base.size() != src.n() + 1 || ray.omega.size() != src.n())
    throw std::invalid_argument("ray dimension does not match data dimension n=" + std::to_string(src.n()));
  if (ray.omega.squaredNorm() == 0.0) throw std::invalid_argument("ray direction omega must be nonzero");
  if (!(ray.c > 0.0)) throw std::invalid_argument("ray speed c must be positive");
}

void DataOracle::moments(const Ray& ray, int kmax, std::span<double> out) const {
  if (kmax < 0) throw std::invalid_argument("moment order k must be >= 0");
  if (kmax > kMaxMoment) throw std::invalid_argument("moment order above 15 not supported");
  if (out.size() < static_cast<std::size_t>(kmax + 1)) throw std::invalid_argument("moments: output too small");
  check_ray(*this, ray);

  const Vec w = ray.direction();
  const double w2 = w.squaredNorm(), wn = std::sqrt(w2);
  std::array<double, kMaxMoment + 1> total{};
  for (const auto& term : phantom_.terms) {
    const double a = contract_power(term.coeff, w);
    if (a == 0.0) continue;
    const Vec d = ray.base - term.center;
    const double s_star = -d.dot(w) / w2;
    const double perp2 = (d + s_star * w).squaredNorm();
    const double envelope = std::exp(-perp2 / (term.sigma * term.sigma));
    if (envelope == 0.0) continue;
    const double half = quad_.halfwidth * term.sigma / wn;
    std::array<double, kMaxMoment + 1> acc{};
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
      const double s = s_star + half * nodes_[q];
      double weight = weights_[q];
      for (int k = 0; k <= kmax; ++k) {
        acc[k] += weight;
        weight *= s;
      }
    }
    const double factor = a * envelope * half;
    for (int k = 0; k <= kmax; ++k) total[k] += factor * acc[k];
  }

  for (int k = 0; k <= kmax; ++k) out[k] = total[k];
  if (noise_sigma_ > 0.0) {
    std::uint64_t key = splitmix(seed_);
    for (int i = 0; i < ray.base.size(); ++i) key = mix(key, ray.base(i));
    for (int i = 0; i < ray.omega.size(); ++i) key = mix(key, ray.omega(i));
    key = mix(key, ray.c);
    for (int k = 0; k <= kmax; ++k) out[k] += noise_sigma_ * keyed_normal(splitmix(key + static_cast<std::uint64_t>(k)));
  }
}

double DataOracle::hyperplane_extent(const Vec& omega, double sigmas) const {
  const Vec nu = lift(omega).normalized();
  double extent = 0.0;
  for (const auto& t : phantom_.terms) {
    const Vec projected = t.center - t.center.dot(nu) * nu;
    extent = std::max(extent, sigmas * t.sigma + projected.norm());
  }
  return extent;
}

// ---------------------------------------------------------------------------

double mlrt_eval(const MomentSource& src, const Ray& ray, int k, int channel) {
  if (k < 0) throw std::invalid_argument("moment order k must be >= 0");
  if (channel < 0 || channel >= src.channels()) throw std::out_of_range("channel out of range");
  std::vector<double> out(static_cast<std::size_t>(src.channels()) * (k + 1));
  src.moments(ray, k, out);
  return out[static_cast<std::size_t>(channel) * (k + 1) + k];
}

namespace {

void check_spatial(const MomentSource& src, int p) {
  if (p < 1 || p > src.n()) throw std::out_of_range("spatial index must be in 1..n");
}

}  // namespace

double mlrt_dx(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel) {
  check_spatial(src, p);
  Ray plus = ray, minus = ray;
  plus.base(p) += h;
  minus.base(p) -= h;
  return (mlrt_eval(src, plus, k, channel) - mlrt_eval(src, minus, k, channel)) / (2 * h);
}

double mlrt_dt(const MomentSource& src, const Ray& ray, int k, double h, int channel) {
  Ray plus = ray, minus = ray;
  plus.base(0) += h;
  minus.base(0) -= h;
  return (mlrt_eval(src, plus, k, channel) - mlrt_eval(src, minus, k, channel)) / (2 * h);
}

double mlrt_domega(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel) {
  check_spatial(src, p);
  Ray plus = ray, minus = ray;
  plus.omega(p - 1) += h;
  minus.omega(p - 1) -= h;
  return (mlrt_eval(src, plus, k, channel) - mlrt_eval(src, minus, k, channel)) / (2 * h);
}

double tangential_gradient(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel) {
  check_spatial(src, p);
  if (std::abs(ray.omega.norm() - 1.0) > 1e-10) throw std::invalid_argument("tangential gradient needs unit omega");
  const int n = src.n();
  Vec grad(n);
  for (int q = 1; q <= n; ++q) grad(q - 1) = mlrt_domega(src, ray, k, q, h, channel);
  return grad(p - 1) - ray.omega.dot(grad) * ray.omega(p - 1);
}

namespace {

double directional_difference(const MomentSource& src, const Ray& ray, int k, int order, double h, int channel) {
  if (order == 0) return mlrt_eval(src, ray, k, channel);
  const Vec step = 0.5 * h * ray.direction();
  Ray plus = ray, minus = ray;
  plus.base += step;
  minus.base -= step;
  return (directional_difference(src, plus, k, order - 1, h, channel) -
          directional_difference(src, minus, k, order - 1, h, channel)) /
         h;
}

}  // namespace

double check_moment_descent(const MomentSource& src, const Ray& ray, int k, int p, double h, int channel) {
  if (p < 0 || p > k) throw std::invalid_argument("moment descent needs 0 <= p <= k");
  if (p == 0) return 0.0;
  double falling = 1.0;
  for (int i = 0; i < p; ++i) falling *= (k - i);
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  const double lhs = directional_difference(src, ray, k, p, h, channel);
  return std::abs(lhs - sign * falling * mlrt_eval(src, ray, k - p, channel));
}

double check_rank_reducer(const DataOracle& oracle, const Ray& ray, int k, int p, double h) {
  const int m = oracle.rank();
  if (m < 1) throw std::invalid_argument("rank reducer needs m >= 1");
  if (p == 0) throw std::out_of_range("rank reducer is stated for spatial indices 1..n only");
  check_spatial(oracle, p);
  const DataOracle col(column(oracle.phantom(), p), oracle.quadrature());
  const double lhs = m * mlrt_eval(col, ray, k);
  const double rhs = mlrt_domega(oracle, ray, k, p, h) - mlrt_dx(oracle, ray, k + 1, p, h);
  return std::abs(lhs - rhs);
}

}  // namespace lightray
