#include "lightray/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lightray {

void PhantomField::validate() const {
  if (n < 1) throw std::invalid_argument("phantom: n must be >= 1");
  if (m < 0) throw std::invalid_argument("phantom: m must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("phantom: c must be positive");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::string where = "phantom term " + std::to_string(i) + ": ";
    if (t.coeff.axes() != n + 1 || t.coeff.rank() != m) throw std::invalid_argument(where + "coefficient shape");
    if (t.center.size() != n + 1) throw std::invalid_argument(where + "center must have 1+n entries");
    if (!(t.sigma > 0.0) || !std::isfinite(t.sigma)) throw std::invalid_argument(where + "sigma must be positive");
  }
}

double PhantomField::coeff_scale() const {
  double s = 0.0;
  for (const auto& t : terms) s = std::max(s, t.coeff.max_abs());
  return s;
}

RealTensor eval_field(const PhantomField& f, const Vec& point) {
  RealTensor out = RealTensor::spacetime(f.n, f.m);
  for (const auto& t : f.terms) {
    const double r2 = (point - t.center).squaredNorm();
    out += t.coeff * std::exp(-r2 / (t.sigma * t.sigma));
  }
  return out;
}

namespace {

std::complex<double> term_transform(const GaussianTerm& t, const Vec& zeta) {
  const double d = static_cast<double>(zeta.size());
  const double amp = std::pow(t.sigma * std::sqrt(std::numbers::pi), d) *
                     std::exp(-t.sigma * t.sigma * zeta.squaredNorm() / 4.0);
  return std::polar(amp, -zeta.dot(t.center));
}

}  // namespace

ComplexTensor fourier_ref(const PhantomField& f, const Vec& zeta) {
  if (zeta.size() != f.n + 1) throw std::invalid_argument("fourier_ref: zeta must have 1+n entries");
  ComplexTensor out = ComplexTensor::spacetime(f.n, f.m);
  for (const auto& t : f.terms) out += to_complex(t.coeff) * term_transform(t, zeta);
  return out;
}

std::complex<double> fourier_ref_directional(const PhantomField& f, const Vec& zeta, const Vec& w) {
  // grad_zeta of one term's transform is (-i center - sigma^2 zeta / 2) times the term.
  std::complex<double> acc{};
  for (const auto& t : f.terms) {
    const std::complex<double> rate(-t.sigma * t.sigma * w.dot(zeta) / 2.0, -w.dot(t.center));
    acc += contract_power(t.coeff, w) * term_transform(t, zeta) * rate;
  }
  return acc;
}

PhantomField column(const PhantomField& f, int p) {
  if (f.m < 1) throw std::invalid_argument("column: phantom rank must be >= 1");
  PhantomField out{f.n, f.m - 1, f.c, {}};
  for (const auto& t : f.terms) out.terms.push_back({column(t.coeff, p), t.center, t.sigma});
  return out;
}

PhantomField make_tracefree(const PhantomField& f) {
  if (f.m < 2) throw std::invalid_argument("make_tracefree: rank must be >= 2");
  PhantomField out = f;
  for (auto& t : out.terms) t.coeff = decompose(t.coeff, 1.0).trace_free;
  return out;
}

PhantomField pure_trace(const PhantomField& lower, double c) {
  const RealTensor g = minkowski_metric(lower.n, c);
  PhantomField out{lower.n, lower.m + 2, c, {}};
  for (const auto& t : lower.terms) out.terms.push_back({i_v(g, t.coeff), t.center, t.sigma});
  return out;
}

PhantomField scale(const PhantomField& f, double alpha) {
  PhantomField out = f;
  for (auto& t : out.terms) t.coeff *= alpha;
  return out;
}

PhantomField sum(const PhantomField& a, const PhantomField& b) {
  if (a.n != b.n || a.m != b.m) throw std::invalid_argument("sum: phantom shape mismatch");
  PhantomField out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

PhantomField random_phantom(const RandomPhantomOptions& opts, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> width(opts.sigma_min, opts.sigma_max);
  PhantomField f{opts.n, opts.m, opts.c, {}};
  for (int i = 0; i < opts.terms; ++i) {
    GaussianTerm t{RealTensor::spacetime(opts.n, opts.m), Vec::Zero(opts.n + 1), 1.0};
    for (auto& v : t.coeff.data()) v = unit(rng);
    for (int j = 0; j <= opts.n; ++j) t.center(j) = opts.center_radius * unit(rng);
    t.sigma = width(rng);
    f.terms.push_back(std::move(t));
  }
  if (opts.tracefree) f = make_tracefree(f);
  return f;
}

PhantomField gaussian_phantom(const RealTensor& coeff, double sigma, double c) {
  PhantomField f{coeff.n(), coeff.rank(), c, {}};
  f.terms.push_back({coeff, Vec::Zero(coeff.axes()), sigma});
  return f;
}

}  // namespace lightray
