#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "../oracles/frozen.hpp"
#include "helpers.hpp"
#include "lightray/phantom.hpp"

using namespace lightray;
using testing::vec;

namespace {

PhantomField unit_scalar(int n = 3) { return gaussian_phantom(testing::scalar(n, 1.0)); }

// Trapezoid approximation of int f(z) e^{-i z.zeta} dz on [-8 sigma, 8 sigma]^3 (n = 2).
std::complex<double> brute_fourier(const PhantomField& f, const Vec& zeta, int nodes) {
  const double half = 8.0;
  const double h = 2.0 * half / (nodes - 1);
  std::complex<double> total = 0.0;
  Vec z(3);
  for (int a = 0; a < nodes; ++a)
    for (int b = 0; b < nodes; ++b)
      for (int c = 0; c < nodes; ++c) {
        z << -half + a * h, -half + b * h, -half + c * h;
        const double value = eval_field(f, z)[0];
        total += value * std::exp(std::complex<double>(0.0, -z.dot(zeta)));
      }
  return total * h * h * h;
}

}  // namespace

TEST_SUITE("phantom") {

TEST_CASE("eval_field") {
  auto f = unit_scalar();
  CHECK(eval_field(f, Vec::Zero(4))[0] == doctest::Approx(1.0));
  CHECK(eval_field(f, vec({0, 0.6, 0, 0.8}))[0] == doctest::Approx(frozen::kInvE).epsilon(1e-15));
  auto twice = sum(f, f);
  CHECK(eval_field(twice, vec({0.1, 0.2, 0.3, 0.4}))[0] ==
        doctest::Approx(2.0 * eval_field(f, vec({0.1, 0.2, 0.3, 0.4}))[0]));
}

TEST_CASE("eval_field is negligible beyond six widths") {
  std::mt19937_64 rng(1);
  RandomPhantomOptions opts;
  opts.m = 2;
  auto f = random_phantom(opts, rng);
  GaussianTerm far = f.terms[0];
  PhantomField single{f.n, f.m, f.c, {far}};
  Vec p = far.center;
  p(1) += 6.01 * far.sigma;
  CHECK(eval_field(single, p).max_abs() < 1e-14 * far.coeff.max_abs());
}

TEST_CASE("fourier_ref closed form") {
  auto f = unit_scalar();
  CHECK(fourier_ref(f, Vec::Zero(4))[0].real() == doctest::Approx(frozen::kPiSquared).epsilon(1e-15));
  auto v = fourier_ref(f, vec({0, 0, 1, 0}))[0];
  CHECK(v.real() == doctest::Approx(frozen::kPiSquaredDecayed).epsilon(1e-15));
  CHECK(std::abs(v.imag()) < 1e-15);

  auto shifted = f;
  shifted.terms[0].center = vec({0.3, -0.2, 0.5, 0.1});
  const Vec zeta = vec({0.4, 1.0, -0.3, 0.2});
  auto a = fourier_ref(f, zeta)[0];
  auto b = fourier_ref(shifted, zeta)[0];
  CHECK(std::abs(b) == doctest::Approx(std::abs(a)));
  auto phase = std::exp(std::complex<double>(0.0, -zeta.dot(shifted.terms[0].center)));
  CHECK(std::abs(b - a * phase) < 1e-14);
}

TEST_CASE("fourier_ref agrees with brute-force integration in 1+2 dimensions") {
  PhantomField f;
  f.n = 2;
  f.m = 0;
  f.terms.push_back({testing::scalar(2, 1.3), vec({0.2, -0.1, 0.3}), 0.9});
  f.terms.push_back({testing::scalar(2, -0.6), vec({-0.3, 0.2, 0.0}), 1.1});
  const double peak = std::abs(fourier_ref(f, Vec::Zero(3))[0]);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    Vec zeta(3);
    zeta << u(rng), u(rng), u(rng);
    zeta *= 2.0 * std::abs(u(rng)) / zeta.norm();
    auto brute = brute_fourier(f, zeta, 49);
    auto closed = fourier_ref(f, zeta)[0];
    CHECK(std::abs(brute - closed) <= 1e-3 * std::max(std::abs(closed), 1e-2 * peak));
  }
}

TEST_CASE("fourier_ref_directional matches a numerical derivative") {
  std::mt19937_64 rng(31);
  RandomPhantomOptions opts;
  opts.m = 1;
  auto f = random_phantom(opts, rng);
  const Vec w = lift(vec({0.6, 0.0, 0.8}));
  const Vec zeta = vec({0.3, 0.7, -0.4, 0.2});
  const double h = 1e-5;
  auto plus = fourier_ref(f, zeta + h * w);
  auto minus = fourier_ref(f, zeta - h * w);
  std::complex<double> expected = 0.0;
  for (int j = 0; j < 4; ++j) expected += w(j) * (plus.at({j}) - minus.at({j})) / (2 * h);
  CHECK(std::abs(fourier_ref_directional(f, zeta, w) - expected) < 1e-7);
}

TEST_CASE("column") {
  auto e0 = gaussian_phantom(testing::basis_vector(3, 0));
  auto c0 = column(e0, 0);
  CHECK(c0.m == 0);
  CHECK(c0.terms[0].coeff[0] == 1.0);
  CHECK(column(e0, 1).coeff_scale() == 0.0);
  CHECK_THROWS(column(unit_scalar(), 0));

  std::mt19937_64 rng(6);
  RandomPhantomOptions opts;
  opts.m = 2;
  auto f = random_phantom(opts, rng);
  const Vec z = vec({0.1, -0.3, 0.2, 0.4});
  auto full = eval_field(f, z);
  for (int p = 0; p < 4; ++p) {
    auto col = eval_field(column(f, p), z);
    for (int i = 0; i < 4; ++i) CHECK(col.at({i}) == doctest::Approx(full.at({i, p})).epsilon(1e-15));
  }
}

TEST_CASE("make_tracefree") {
  std::mt19937_64 rng(12);
  auto w = testing::random_tensor(3, 1, rng);
  auto trace = pure_trace(gaussian_phantom(w), 1.0);
  CHECK(make_tracefree(trace).coeff_scale() < 1e-14);

  RandomPhantomOptions opts;
  opts.m = 3;
  opts.tracefree = true;
  auto tf = random_phantom(opts, rng);
  for (const auto& t : tf.terms) CHECK(J_op(t.coeff, 1.0).max_abs() < 1e-12);
  auto again = make_tracefree(tf);
  for (std::size_t i = 0; i < tf.terms.size(); ++i)
    CHECK(testing::max_diff(again.terms[i].coeff, tf.terms[i].coeff) < 1e-14);

  opts.tracefree = false;
  auto raw = random_phantom(opts, rng);
  for (const auto& t : make_tracefree(raw).terms) CHECK(J_op(t.coeff, 1.0).max_abs() < 1e-12);
  CHECK_THROWS(make_tracefree(gaussian_phantom(w)));
}

TEST_CASE("validation") {
  auto f = unit_scalar();
  f.terms[0].sigma = 0.0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f.terms[0].sigma = 1.0;
  f.terms[0].center = Vec::Zero(3);
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
}

TEST_CASE("random phantoms are reproducible") {
  RandomPhantomOptions opts;
  opts.m = 2;
  std::mt19937_64 a(77), b(77);
  auto f = random_phantom(opts, a);
  auto g = random_phantom(opts, b);
  REQUIRE(f.terms.size() == g.terms.size());
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    CHECK(testing::max_diff(f.terms[i].coeff, g.terms[i].coeff) == 0.0);
    CHECK(f.terms[i].sigma == g.terms[i].sigma);
  }
}

}  // TEST_SUITE
