#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace lightray {

struct QuadratureSpec {
  enum class Rule { gauss_legendre, trapezoid };
  Rule rule = Rule::gauss_legendre;
  int nodes = 64;
  // Half-length of the integration window in units of the term width sigma.
  double halfwidth = 7.0;

  void validate() const;
};

std::string to_string(QuadratureSpec::Rule rule);
QuadratureSpec::Rule parse_rule(const std::string& name);

struct Rule1D {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

Rule1D gauss_legendre(int count);
Rule1D trapezoid(int count);
Rule1D make_rule(const QuadratureSpec& spec);

// Pairwise (cascade) summation in index order; the result does not depend on
// how the values were produced.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

}  // namespace lightray
