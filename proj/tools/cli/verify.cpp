#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lightray/errors.hpp"
#include "lightray/fourier_slice.hpp"
#include "lightray/reconstruction.hpp"
#include "lightray/sampling.hpp"

namespace lightray::cli {

using nlohmann::json;

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

json VerifyReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks)
    list.push_back({{"name", c.name},
                    {"max_residual", c.max_residual},
                    {"tolerance", c.tolerance},
                    {"comparison", c.above ? "above" : "at_most"},
                    {"pass", c.pass()}});
  return {{"version", kConfigVersion}, {"suite", suite}, {"checks", list}, {"pass", pass()}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> suites{"algebra", "transform", "slice", "recon-geometry"};
  return suites;
}

namespace {

constexpr double kCs[] = {0.5, 1.0, 2.0};

RealTensor random_tensor(int axes, int rank, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealTensor t(axes, rank);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

// Largest change of the full expansion under swapping the first two slots or
// rotating all slots; zero for a consistent symmetric tensor.
double symmetry_defect(const RealTensor& t) {
  if (t.rank() < 2) return 0.0;
  const auto full = expand(t);
  const int a = t.axes(), m = t.rank();
  std::vector<int> idx(m, 0), perm(m);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < full.size(); ++flat) {
    std::size_t rem = flat;
    for (int s = m - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % a);
      rem /= a;
    }
    for (int variant = 0; variant < 2; ++variant) {
      perm = idx;
      if (variant == 0)
        std::swap(perm[0], perm[1]);
      else
        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
      std::size_t other = 0;
      for (int s = 0; s < m; ++s) other = other * a + perm[s];
      worst = std::max(worst, std::abs(full[flat] - full[other]));
    }
  }
  return worst;
}

VerifyReport algebra_suite(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const double tol = cfg.tolerances.algebra;
  const bool fault = cfg.verify.inject_fault == "commutator";
  Check commutator{"commutator_identity", 0.0, tol};
  Check roundtrip{"decompose_roundtrip", 0.0, tol};
  Check tracefree{"decompose_trace_free", 0.0, tol};
  Check symmetry{"symmetric_outputs", 0.0, tol};
  Check injective{"i_g_min_singular_value", std::numeric_limits<double>::infinity(), cfg.tolerances.singular_value,
                  true};
  for (int n = 2; n <= 3; ++n) {
    for (int m = 2; m <= 5; ++m) {
      const auto k = commutator_constants(m, n);
      const double C = fault ? k.C * (1.0 + 1e-3) : k.C;
      for (double c : kCs) {
        const RealTensor g = minkowski_metric(n, c);
        injective.max_residual = std::min(injective.max_residual, i_g_min_singular_value(n, m, c));
        for (int s = 0; s < cfg.verify.samples; ++s) {
          const RealTensor u = random_tensor(n + 1, m - 2, rng);
          const double scale = std::max(u.max_abs(), 1e-300);
          RealTensor lhs = J_op(i_v(g, u), c);
          RealTensor rhs = u * C;
          if (m - 2 >= 2) rhs += i_v(g, J_op(u, c)) * k.D;
          commutator.max_residual = std::max(commutator.max_residual, (lhs - rhs).max_abs() / scale);

          const RealTensor f = random_tensor(n + 1, m, rng);
          const auto d = decompose(f, c);
          const double fs = std::max(f.max_abs(), 1e-300);
          roundtrip.max_residual =
              std::max(roundtrip.max_residual, (d.trace_free + i_v(g, d.lower) - f).max_abs() / fs);
          tracefree.max_residual = std::max(tracefree.max_residual, J_op(d.trace_free, c).max_abs() / fs);
          if (s == 0) {
            symmetry.max_residual = std::max({symmetry.max_residual, symmetry_defect(i_v(g, u)),
                                              symmetry_defect(d.trace_free), symmetry_defect(J_op(f, c))});
          }
        }
      }
    }
  }
  return {"algebra", {commutator, roundtrip, tracefree, symmetry, injective}};
}

// int s^k exp(-alpha (s - s0)^2) ds in closed form.
double gaussian_moment(int k, double alpha, double s0) {
  double total = 0.0;
  for (int j = 0; j <= k; j += 2) {
    const double even = std::tgamma(0.5 * (j + 1)) / std::pow(alpha, 0.5 * (j + 1));
    total += static_cast<double>(binomial(k, j)) * std::pow(s0, k - j) * even;
  }
  return total;
}

double closed_form_mlrt(const PhantomField& f, const Ray& ray, int k) {
  const Vec w = ray.direction();
  double total = 0.0;
  for (const auto& t : f.terms) {
    const Vec d = ray.base - t.center;
    const double s0 = -d.dot(w) / w.squaredNorm();
    const double perp2 = (d + s0 * w).squaredNorm();
    const double alpha = w.squaredNorm() / (t.sigma * t.sigma);
    total += contract_power(t.coeff, w) * std::exp(-perp2 / (t.sigma * t.sigma)) * gaussian_moment(k, alpha, s0);
  }
  return total;
}

VerifyReport transform_suite(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const auto& tol = cfg.tolerances;
  const int rays = cfg.verify.rays;

  Check origin{"scalar_origin_value", 0.0, tol.quadrature};
  {
    RealTensor one(4, 0);
    one[0] = 1.0;
    const DataOracle oracle(gaussian_phantom(one), cfg.quadrature);
    const Ray ray{Vec::Zero(4), Vec::Unit(3, 0)};
    origin.max_residual = std::abs(mlrt_eval(oracle, ray, 0) - std::sqrt(std::numbers::pi / 2.0));
  }

  Check closed{"closed_form_moments", 0.0, tol.quadrature};
  Check kernel{"trace_kernel", 0.0, tol.kernel};
  Check descent{"moment_descent", 0.0, tol.descent};
  Check reducer{"rank_reducer", 0.0, tol.descent};
  for (int n = 2; n <= 3; ++n) {
    for (double c : kCs) {
      RandomPhantomOptions po;
      po.n = n;
      po.c = c;
      for (int m = 0; m <= 2; ++m) {
        po.m = m;
        const PhantomField f = random_phantom(po, rng);
        const DataOracle oracle(f, cfg.quadrature);
        for (int r = 0; r < std::max(1, rays / 10); ++r) {
          const Ray ray = random_ray(n, 1.0, rng, c);
          double scale = 0.0;
          for (int k = 0; k <= 3; ++k) scale = std::max(scale, std::abs(closed_form_mlrt(f, ray, k)));
          scale = std::max(scale, 1e-12 * f.coeff_scale());
          for (int k = 0; k <= 3; ++k)
            closed.max_residual =
                std::max(closed.max_residual, std::abs(mlrt_eval(oracle, ray, k) - closed_form_mlrt(f, ray, k)) / scale);
          for (int k = 1; k <= 2; ++k)
            for (int p = 1; p <= k; ++p)
              descent.max_residual =
                  std::max(descent.max_residual, check_moment_descent(oracle, ray, k, p, cfg.fd.h_nested) / scale);
          if (m >= 1)
            for (int k = 0; k <= 1; ++k)
              for (int p = 1; p <= n; ++p)
                reducer.max_residual =
                    std::max(reducer.max_residual, check_rank_reducer(oracle, ray, k, p, cfg.fd.h) / scale);
        }
      }
      // Pure trace fields i_g h are invisible on light rays of speed c.
      for (int m = 2; m <= 3; ++m) {
        po.m = m - 2;
        PhantomField lower = random_phantom(po, rng);
        const PhantomField traced = pure_trace(lower, c);
        const DataOracle oracle(traced, cfg.quadrature);
        const double hs = std::max(lower.coeff_scale(), 1e-300);
        for (int r = 0; r < rays; ++r) {
          const Ray ray = random_ray(n, 1.0, rng, c);
          std::vector<double> out(static_cast<std::size_t>(m) + 1);
          oracle.moments(ray, m, out);
          for (double v : out) kernel.max_residual = std::max(kernel.max_residual, std::abs(v) / hs);
        }
      }
    }
  }

  Check converged{"quadrature_convergence", 0.0, tol.quadrature};
  {
    RandomPhantomOptions po;
    po.m = 1;
    const PhantomField f = random_phantom(po, rng);
    QuadratureSpec fine = cfg.quadrature;
    fine.nodes *= 2;
    const DataOracle a(f, cfg.quadrature), b(f, fine);
    for (int r = 0; r < 10; ++r) {
      const Ray ray = random_ray(3, 1.0, rng);
      const double scale = std::max(std::abs(mlrt_eval(b, ray, 0)), 1e-12);
      for (int k = 0; k <= 3; ++k)
        converged.max_residual =
            std::max(converged.max_residual, std::abs(mlrt_eval(a, ray, k) - mlrt_eval(b, ray, k)) / scale);
    }
  }
  return {"transform", {origin, closed, kernel, descent, reducer, converged}};
}

// zeta orthogonal to (1, omega) with |zeta| uniform in [0, zeta_max].
Vec random_slice_zeta(const Vec& omega, double zeta_max, std::mt19937_64& rng) {
  const Vec nu = lift(omega).normalized();
  Vec v;
  do {
    v = random_unit_vector(static_cast<int>(omega.size()) + 1, rng);
    v -= v.dot(nu) * nu;
  } while (v.norm() < 1e-3);
  std::uniform_real_distribution<double> radius(0.0, zeta_max);
  return radius(rng) * v.normalized();
}

VerifyReport slice_suite(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const int n = 3;
  Check frame{"hyperplane_frame_orthonormal", 0.0, cfg.tolerances.geometry};
  Check p1{"phi1_relative", 0.0, cfg.tolerances.phi1};
  Check p2{"phi2_relative", 0.0, cfg.tolerances.phi2};
  for (int m = 0; m <= 1; ++m) {
    RandomPhantomOptions po;
    po.n = n;
    po.m = m;
    const PhantomField f = random_phantom(po, rng);
    const DataOracle oracle(f, cfg.quadrature);
    for (int s = 0; s < cfg.slice.count; ++s) {
      const Vec omega = cfg.slice.omega && cfg.slice.omega->size() == n ? *cfg.slice.omega : random_unit_vector(n, rng);
      const Vec zeta = random_slice_zeta(omega, cfg.slice.zeta_max, rng);
      const HyperplaneFrame hf = hyperplane_frame(omega, 1.0, 2);
      const Vec nu = lift(omega).normalized();
      for (std::size_t i = 0; i < hf.basis.size(); ++i) {
        frame.max_residual = std::max(frame.max_residual, std::abs(hf.basis[i].dot(nu)));
        for (std::size_t j = 0; j < hf.basis.size(); ++j)
          frame.max_residual = std::max(frame.max_residual, std::abs(hf.basis[i].dot(hf.basis[j]) - (i == j ? 1.0 : 0.0)));
      }
      const Vec w = lift(omega);
      const auto sv = slice_values(oracle, omega, zeta, cfg.slice.grid, true);
      const std::complex<double> ref1 = contract_power(fourier_ref(f, zeta), w);
      const std::complex<double> ref2 = fourier_ref_directional(f, zeta, w);
      // Errors are relative to the value at zeta = 0 so zero crossings stay meaningful.
      const double peak = std::abs(contract_power(fourier_ref(f, Vec::Zero(n + 1)), w));
      const double floor = 1e-2 * std::max(peak, 1e-300);
      p1.max_residual = std::max(p1.max_residual, std::abs(sv.phi1[0] - ref1) / std::max(std::abs(ref1), floor));
      p2.max_residual = std::max(p2.max_residual, std::abs(sv.phi2[0] - ref2) / std::max(std::abs(ref2), floor));
    }
  }
  return {"slice", {frame, p1, p2}};
}

VerifyReport geometry_suite(const RunConfig& cfg) {
  const ReconConfig& rc = cfg.recon.config;
  rc.validate();
  const int n = rc.n();
  const double tol = cfg.tolerances.geometry;
  Check unit{"omega_unit", 0.0, tol};
  Check ortho{"zeta_orthogonal_to_omega", 0.0, tol};
  Check aperture{"omega_inside_aperture", 0.0, tol};
  Check rotation{"rotation_orthogonal", 0.0, tol};
  Check aligned{"rotation_alignment", 0.0, tol};
  Check family{"family_inside_aperture", 0.0, tol};
  Check cond{"family_condition", 0.0, 1e8};
  Check gs{"gram_schmidt_orthonormal", 0.0, tol};
  Check proj{"family_projection", 0.0, 1e-8};  // amplified by the family conditioning
  std::mt19937_64 rng(cfg.seed);
  for (const Vec& zeta : sample_zetas(rc, cfg.verify.samples, cfg.seed)) {
    const ZetaGeometry g = zeta_geometry(zeta, rc);
    unit.max_residual = std::max(unit.max_residual, std::abs(g.omega.norm() - 1.0));
    ortho.max_residual = std::max(ortho.max_residual, std::abs(zeta.dot(lift(g.omega))) / zeta.norm());
    aperture.max_residual = std::max(aperture.max_residual, std::max(0.0, (g.omega - rc.omega0).norm() - rc.delta));
    const Mat& R = g.rotation.R;
    rotation.max_residual = std::max({rotation.max_residual, (R * R.transpose() - Mat::Identity(n, n)).cwiseAbs().maxCoeff(),
                                      std::abs(R.determinant() - 1.0)});
    const Vec rz = R * zeta.tail(n).normalized();
    double misalign = std::abs(rz(1) - 1.0);
    for (int j = 2; j < n; ++j) misalign = std::max(misalign, std::abs(g.rotation.b(j)));
    aligned.max_residual = std::max(aligned.max_residual, misalign);
    for (const auto& d : g.directions)
      family.max_residual = std::max(family.max_residual, std::max(0.0, (d - rc.omega0).norm() - rc.delta));
    cond.max_residual = std::max(cond.max_residual, g.family.gram_condition);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        gs.max_residual = std::max(gs.max_residual, std::abs(g.basis.mu[i].dot(g.basis.mu[j]) - (i == j ? 1.0 : 0.0)));
    // A vector inside the span must be reproduced from its inner products.
    Vec v = Vec::Zero(n + 1);
    std::normal_distribution<double> normal;
    for (const auto& f : g.lifted) v += normal(rng) * f;
    std::vector<std::complex<double>> values;
    for (const auto& f : g.lifted) values.emplace_back(v.dot(f), 0.0);
    const CVec back = project_onto_family(values, g.lifted, g.basis.A);
    proj.max_residual = std::max(proj.max_residual, (back.real() - v).norm() / v.norm());
  }
  return {"recon-geometry", {unit, ortho, aperture, rotation, aligned, family, cond, gs, proj}};
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg, const std::string& suite) {
  if (suite == "algebra") return algebra_suite(cfg);
  if (suite == "transform") return transform_suite(cfg);
  if (suite == "slice") return slice_suite(cfg);
  if (suite == "recon-geometry") return geometry_suite(cfg);
  throw SchemaError("suite", "unknown verify suite '" + suite + "' (algebra, transform, slice, recon-geometry)");
}

}  // namespace lightray::cli
