#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "../oracles/frozen.hpp"
#include "helpers.hpp"
#include "lightray/reconstruction.hpp"

using namespace lightray;
using testing::vec;

namespace {

ReconConfig config(double delta = 0.2) {
  auto cfg = ReconConfig::defaults(3);
  cfg.delta = delta;
  return cfg;
}

GeometryFault fault_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.fault();
  }
  FAIL("no geometry error");
  return GeometryFault::not_spacelike;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("omega for zeta") {
  const Vec e1 = vec({1, 0, 0});
  CHECK((omega_for_zeta(vec({0, 0, 1, 0}), e1, 0.2) - e1).norm() < 1e-15);
  CHECK(fault_of([&] { omega_for_zeta(vec({2, 1, 0, 0}), e1, 0.2); }) == GeometryFault::not_spacelike);

  const Vec zeta = vec({1, 0, std::sqrt(2.0), 0});
  const Vec cand = omega_candidate(zeta, e1);
  CHECK((cand - vec({1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0})).norm() < 1e-15);
  CHECK((cand - e1).norm() == doctest::Approx(0.7653668647301796));
  CHECK(fault_of([&] { omega_for_zeta(zeta, e1, 0.7); }) == GeometryFault::outside_patch);
  CHECK_NOTHROW(omega_for_zeta(zeta, e1, 0.77));
  CHECK(fault_of([&] { omega_for_zeta(vec({0, 1, 0, 0}), e1, 0.2); }) == GeometryFault::degenerate_axis);
}

TEST_CASE("rotation") {
  auto rot = rotation_M(vec({0, 0, 1, 0}), vec({1, 0, 0}));
  CHECK((rot.R - Mat::Identity(3, 3)).norm() < 1e-15);
  CHECK((rot.b - vec({1, 0, 0})).norm() < 1e-15);

  std::mt19937_64 rng(5);
  auto cfg = config();
  for (const Vec& zeta : sample_zetas(cfg, 20, 99)) {
    const Vec omega = omega_for_zeta(zeta, cfg.omega0, cfg.delta);
    auto r = rotation_M(zeta, omega);
    CHECK(std::abs(r.R.determinant() - 1.0) <= 1e-12);
    CHECK((r.R * r.R.transpose() - Mat::Identity(3, 3)).norm() <= 1e-12);
    const Vec mz = r.M * zeta;
    CHECK(std::abs(mz(0) - zeta(0)) <= 1e-12);
    CHECK(std::abs(mz(2) - zeta.tail(3).norm()) <= 1e-12);
    CHECK(std::abs(mz(1)) + std::abs(mz(3)) <= 1e-12);
    CHECK(std::abs(r.b(1) + zeta(0) / zeta.tail(3).norm()) <= 1e-12);
    CHECK(std::abs(r.b(2)) <= 1e-12);
  }
  CHECK(fault_of([] { rotation_M(vec({0, 1, 0, 0}), vec({1, 0, 0})); }) == GeometryFault::parallel_axis);
}

TEST_CASE("direction family") {
  auto fam = direction_family(vec({1, 0, 0}), 0.1, {0.0, 0.05, -0.05});
  REQUIRE(fam.w.size() == 3);
  CHECK((fam.w[0] - vec({1, 0, 0})).norm() < 1e-15);
  CHECK((fam.w[1] - vec({frozen::kCos005, 0, frozen::kSin005})).norm() < 1e-15);
  CHECK((fam.w[2] - vec({frozen::kCos005, 0, -frozen::kSin005})).norm() < 1e-15);
  for (const auto& w : fam.w) CHECK(std::abs(w.squaredNorm() - 1.0) < 1e-15);
  CHECK(fam.gram_condition > 1.0);
  CHECK(fam.gram_condition < 1e8);

  const Vec b = vec({std::sqrt(0.91), -0.3, 0});
  const Vec xi = vec({0.3, 0, 1, 0});  // zeta0 + |zeta'| b2 = 0
  for (const auto& w : direction_family(b, 0.08, {0.0, 0.07, -0.07}).w) CHECK(std::abs(lift(w).dot(xi)) < 1e-15);

  CHECK_THROWS(direction_family(vec({1, 0, 0}), 0.1, {0.0, 0.2, -0.05}));
  CHECK_THROWS(direction_family(vec({1, 0, 0}), 0.1, {0.01, 0.05, -0.05}));
  CHECK(fault_of([] { direction_family(vec({1, 0, 0}), 0.1, {0.0, 1e-6, -1e-6}); }) ==
        GeometryFault::degenerate_family);
}

TEST_CASE("higher-dimensional families") {
  // Nested angles put the last direction's independent content at order
  // angle^5, so n > 3 families need a wide aperture.
  {
    Vec b = Vec::Zero(4);
    b(0) = 1.0;
    CHECK(fault_of([&] { direction_family(b, 0.1, {0.09, 0.09, -0.09}); }) == GeometryFault::degenerate_family);
  }
  for (int n : {4, 5}) {
    Vec b = Vec::Zero(n);
    b(0) = std::sqrt(0.96);
    b(1) = 0.2;
    std::vector<double> phis;
    for (double f : default_phi_fractions(n)) phis.push_back(f * 0.45);
    CHECK(phis.size() == phi_count(n));
    auto fam = direction_family(b, 0.45, phis);
    REQUIRE(fam.w.size() == static_cast<std::size_t>(n));
    Vec xi = Vec::Zero(n + 1);
    xi(0) = -0.2;
    xi(2) = 1.0;
    for (const auto& w : fam.w) {
      CHECK(std::abs(w.norm() - 1.0) < 1e-14);
      CHECK(std::abs(lift(w).dot(xi)) < 1e-14);
    }
    CHECK(fam.gram_condition < 1e8);
  }
}

TEST_CASE("Gram-Schmidt") {
  auto basis = gram_schmidt_basis({vec({1, 0, 0, 0}), vec({0, 1, 0, 0})});
  CHECK((basis.A - Mat::Identity(2, 2)).norm() < 1e-15);

  auto cfg = config();
  std::mt19937_64 rng(17);
  for (const Vec& zeta : sample_zetas(cfg, 10, 7)) {
    auto g = zeta_geometry(zeta, cfg);
    const auto& mu = g.basis.mu;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      for (std::size_t j = 0; j < mu.size(); ++j) CHECK(std::abs(mu[i].dot(mu[j]) - (i == j)) < 1e-12);
      Vec combo = Vec::Zero(4);
      for (std::size_t j = 0; j < g.lifted.size(); ++j) combo += g.basis.A(i, j) * g.lifted[j];
      CHECK((combo - mu[i]).norm() < 1e-12);
    }
    // Completeness on span(family) = xi^perp.
    const Vec xi = g.rotation.M * zeta;
    for (int trial = 0; trial < 10; ++trial) {
      Vec v = testing::vec({0, 0, 0, 0});
      for (int i = 0; i < 4; ++i) v(i) = std::normal_distribution<double>()(rng);
      v -= v.dot(xi) / xi.squaredNorm() * xi;
      Vec back = Vec::Zero(4);
      for (const auto& m : mu) back += v.dot(m) * m;
      CHECK((back - v).norm() < 1e-10 * v.norm());

      std::vector<std::complex<double>> values;
      for (const auto& l : g.lifted) values.emplace_back(v.dot(l), 0.0);
      CVec projected = project_onto_family(values, g.lifted, g.basis.A);
      CHECK((projected.real() - v).norm() < 1e-9 * v.norm());
      CHECK(projected.imag().norm() == 0.0);
    }
  }
}

TEST_CASE("sampled frequencies satisfy every geometric postcondition") {
  auto cfg = config();
  auto zetas = sample_zetas(cfg, 50, 3);
  REQUIRE(zetas.size() == 50);
  for (const Vec& zeta : zetas) {
    CHECK(std::abs(zeta(0)) < zeta.tail(3).norm());
    CHECK(zeta.norm() >= cfg.zeta_min);
    CHECK(zeta.norm() <= cfg.zeta_max);
    auto g = zeta_geometry(zeta, cfg);
    CHECK(std::abs(zeta.dot(lift(g.omega))) < 1e-12);
    CHECK((g.omega - cfg.omega0).norm() < cfg.aperture_use * cfg.delta);
    const Vec xi = g.rotation.M * zeta;
    for (std::size_t j = 0; j < g.directions.size(); ++j) {
      CHECK(std::abs(g.lifted[j].dot(xi)) < 1e-10);
      CHECK(std::abs(g.directions[j].norm() - 1.0) < 1e-12);
      CHECK((g.directions[j] - cfg.omega0).norm() < cfg.delta);
      // The slice hyperplane of each direction contains zeta itself.
      CHECK(std::abs(lift(g.directions[j]).dot(zeta)) < 1e-10);
    }
    CHECK(g.family.gram_condition < 1e8);
  }
  auto again = sample_zetas(cfg, 50, 3);
  for (std::size_t i = 0; i < zetas.size(); ++i) CHECK((zetas[i] - again[i]).norm() == 0.0);
}

TEST_CASE("config validation") {
  auto cfg = ReconConfig::defaults(3);
  CHECK_NOTHROW(cfg.validate());
  CHECK((cfg.omega0 - vec({1, 0, 0})).norm() == 0.0);
  auto planar = ReconConfig::defaults(3);
  planar.omega0 = vec({1, 0});
  CHECK_THROWS_WITH_AS(planar.validate(), doctest::Contains("two space dimensions"), std::invalid_argument);
  cfg.delta = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg = ReconConfig::defaults(3);
  cfg.phi_fractions = {0.0, 0.5};
  CHECK_THROWS(cfg.validate());
}

}  // TEST_SUITE
