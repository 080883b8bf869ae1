#include "lightray/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace lightray {

void QuadratureSpec::validate() const {
  if (nodes < 16) throw std::invalid_argument("quadrature: nodes must be >= 16");
  if (!(halfwidth >= 6.0)) throw std::invalid_argument("quadrature: halfwidth must cover 6 sigma");
}

std::string to_string(QuadratureSpec::Rule rule) {
  return rule == QuadratureSpec::Rule::gauss_legendre ? "gauss-legendre" : "trapezoid";
}

QuadratureSpec::Rule parse_rule(const std::string& name) {
  if (name == "gauss-legendre") return QuadratureSpec::Rule::gauss_legendre;
  if (name == "trapezoid") return QuadratureSpec::Rule::trapezoid;
  throw std::invalid_argument("unknown quadrature rule '" + name + "'");
}

namespace {

// (P_count(x), P_count-1(x)) by the three-term recurrence.
std::pair<double, double> legendre(int count, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= count; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return count == 0 ? std::pair{1.0, 0.0} : std::pair{p1, p0};
}

}  // namespace

Rule1D gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");
  Rule1D r{std::vector<double>(count), std::vector<double>(count)};
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, q] = legendre(count, x);
      dp = count * (x * p - q) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, q] = legendre(count, x);
    dp = count * (x * p - q) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[count - 1 - i] = x;
    r.weights[i] = r.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) r.nodes[count / 2] = 0.0;
  return r;
}

Rule1D trapezoid(int count) {
  if (count < 2) throw std::invalid_argument("trapezoid: count must be >= 2");
  Rule1D r{std::vector<double>(count), std::vector<double>(count)};
  const double h = 2.0 / (count - 1);
  for (int i = 0; i < count; ++i) {
    r.nodes[i] = -1.0 + i * h;
    r.weights[i] = (i == 0 || i == count - 1) ? h / 2 : h;
  }
  return r;
}

Rule1D make_rule(const QuadratureSpec& spec) {
  return spec.rule == QuadratureSpec::Rule::gauss_legendre ? gauss_legendre(spec.nodes) : trapezoid(spec.nodes);
}

namespace {

template <typename T>
T cascade(const T* v, std::size_t n) {
  if (n <= 8) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return cascade(v, h) + cascade(v + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return cascade(values.data(), values.size()); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
  return cascade(values.data(), values.size());
}

}  // namespace lightray
