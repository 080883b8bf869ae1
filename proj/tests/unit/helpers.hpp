#pragma once

#include <cmath>
#include <initializer_list>
#include <random>

#include "lightray/linalg.hpp"
#include "lightray/phantom.hpp"
#include "lightray/tensor.hpp"

namespace testing {

inline lightray::Vec vec(std::initializer_list<double> values) {
  lightray::Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline lightray::RealTensor random_tensor(int n, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto t = lightray::RealTensor::spacetime(n, m);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

inline lightray::RealTensor scalar(int n, double value) {
  auto t = lightray::RealTensor::spacetime(n, 0);
  t[0] = value;
  return t;
}

inline lightray::RealTensor basis_vector(int n, int p) {
  auto t = lightray::RealTensor::spacetime(n, 1);
  t.at({p}) = 1.0;
  return t;
}

inline double max_diff(const lightray::RealTensor& a, const lightray::RealTensor& b) {
  return (a - b).max_abs();
}

}  // namespace testing

namespace testing {

// Random vector of the hyperplane (1, omega)^perp with norm `length`.
inline lightray::Vec in_hyperplane(const lightray::Vec& omega, double length, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  lightray::Vec v(omega.size() + 1);
  for (int i = 0; i < v.size(); ++i) v(i) = g(rng);
  const lightray::Vec nu = lightray::lift(omega) / std::sqrt(2.0);
  v -= v.dot(nu) * nu;
  return v * (length / v.norm());
}

}  // namespace testing
