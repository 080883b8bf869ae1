#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "lightray/reconstruction.hpp"

namespace lightray {

const char* to_string(GeometryFault fault) {
  switch (fault) {
    case GeometryFault::not_spacelike: return "NotSpacelike";
    case GeometryFault::degenerate_axis: return "DegenerateAxis";
    case GeometryFault::outside_patch: return "OutsidePatch";
    case GeometryFault::parallel_axis: return "ParallelAxis";
    case GeometryFault::degenerate_family: return "DegenerateFamily";
  }
  return "GeometryError";
}

ReconConfig ReconConfig::defaults(int n) {
  ReconConfig cfg;
  cfg.omega0 = Vec::Zero(n);
  cfg.omega0(0) = 1.0;
  return cfg;
}

void ReconConfig::validate() const {
  if (n() < 3) throw std::invalid_argument("reconstruction needs n >= 3 (the method is restricted away from two space dimensions)");
  if (std::abs(omega0.norm() - 1.0) > 1e-10) throw std::invalid_argument("recon.omega0 must be a unit vector");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("recon.delta must be in (0, 1)");
  if (!(fd_eps > 0.0)) throw std::invalid_argument("recon.fd_eps must be positive");
  if (zeta_count < 1) throw std::invalid_argument("recon.zeta_count must be >= 1");
  if (!(zeta_min > 0.0 && zeta_max >= zeta_min)) throw std::invalid_argument("recon: need 0 < zeta_min <= zeta_max");
  if (!(aperture_use > 0.0 && aperture_use < 1.0)) throw std::invalid_argument("recon.aperture_use must be in (0, 1)");
  if (!phi_fractions.empty() && phi_fractions.size() != phi_count(n()))
    throw std::invalid_argument("recon.phi_fractions needs " + std::to_string(phi_count(n())) + " entries");
  for (double f : phi_fractions)
    if (!(std::abs(f) < 1.0)) throw std::invalid_argument("recon.phi_fractions entries must lie in (-1, 1)");
  if (grid.nodes_per_axis < 4 || !(grid.extent_sigmas > 0.0)) throw std::invalid_argument("recon: bad slice grid");
}

Vec omega_candidate(const Vec& zeta, const Vec& omega0) {
  const int n = static_cast<int>(omega0.size());
  if (zeta.size() != n + 1) throw std::invalid_argument("zeta must have n+1 entries");
  const double z0 = zeta(0);
  const Vec zp = zeta.tail(n);
  const double r = zp.norm();
  if (!(std::abs(z0) < r))
    throw GeometryError(GeometryFault::not_spacelike, "|zeta0| must be below |zeta'|");
  const double a = -z0 / r;
  const Vec u = zp / r;
  const Vec w = omega0 - omega0.dot(u) * u;
  const double wn = w.norm();
  if (wn < 1e-12) throw GeometryError(GeometryFault::degenerate_axis, "omega0 is parallel to zeta'");
  return a * u + std::sqrt(1.0 - a * a) * (w / wn);
}

Vec omega_for_zeta(const Vec& zeta, const Vec& omega0, double delta) {
  Vec omega = omega_candidate(zeta, omega0);
  const double dist = (omega - omega0).norm();
  if (dist >= delta)
    throw GeometryError(GeometryFault::outside_patch,
                        "|omega - omega0| = " + std::to_string(dist) + " >= delta = " + std::to_string(delta));
  return omega;
}

Rotation rotation_M(const Vec& zeta, const Vec& omega) {
  const int n = static_cast<int>(omega.size());
  if (n < 3) throw std::invalid_argument("rotation_M needs n >= 3");
  if (zeta.size() != n + 1) throw std::invalid_argument("zeta must have n+1 entries");
  const Vec zp = zeta.tail(n);
  if (zp.norm() == 0.0) throw GeometryError(GeometryFault::parallel_axis, "zeta' vanishes");
  const Vec v2 = zp.normalized();
  Vec v1 = omega - omega.dot(v2) * v2;
  if (v1.norm() < 1e-12) throw GeometryError(GeometryFault::parallel_axis, "omega is parallel to zeta'");
  v1.normalize();

  std::vector<Vec> rows{v1, v2};
  for (int j = 0; j < n && static_cast<int>(rows.size()) < n; ++j) {
    Vec v = Vec::Zero(n);
    v(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& r : rows) v -= v.dot(r) * r;
    if (v.norm() > 1e-6) rows.push_back(v.normalized());
  }

  Rotation rot;
  rot.R = Mat(n, n);
  for (int i = 0; i < n; ++i) rot.R.row(i) = rows[i].transpose();
  if (rot.R.determinant() < 0.0) rot.R.row(n - 1) *= -1.0;
  rot.M = Mat::Zero(n + 1, n + 1);
  rot.M(0, 0) = 1.0;
  rot.M.bottomRightCorner(n, n) = rot.R;
  rot.b = rot.R * omega;
  return rot;
}

std::size_t phi_count(int n) { return n == 3 ? 3 : static_cast<std::size_t>(n - 1); }

std::vector<double> default_phi_fractions(int n) {
  if (n == 3) return {0.0, 0.9, -0.9};
  std::vector<double> f(static_cast<std::size_t>(n - 1), 0.9);
  f.back() = -0.9;
  return f;
}

namespace {

// Unit vector on S^{len-1} from nested angles: (cos a1, sin a1 cos a2, ...,
// sin a1 ... sin a_{r-1} cos a_r, sin a1 ... sin a_r, 0, ...).
Vec spherical(const std::vector<double>& angles, int len) {
  Vec u = Vec::Zero(len);
  double s = 1.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    u(static_cast<int>(i)) = s * std::cos(angles[i]);
    s *= std::sin(angles[i]);
  }
  u(static_cast<int>(angles.size())) = s;
  return u;
}

}  // namespace

DirectionFamily direction_family(const Vec& b, double delta_prime, const std::vector<double>& phis) {
  const int n = static_cast<int>(b.size());
  if (n < 3) throw std::invalid_argument("direction_family needs n >= 3");
  if (!(delta_prime > 0.0)) throw std::invalid_argument("direction_family needs delta' > 0");
  for (double phi : phis)
    if (!(std::abs(phi) < delta_prime))
      throw std::invalid_argument("direction_family: angle " + std::to_string(phi) + " outside (-delta', delta')");
  const double b1 = b(0), b2 = b(1);

  DirectionFamily fam;
  if (n == 3) {
    if (phis.size() != 3) throw std::invalid_argument("direction_family: n = 3 needs three angles");
    if (phis[0] != 0.0) throw std::invalid_argument("direction_family: first angle must be 0");
    for (double phi : phis) {
      Vec w(3);
      w << b1 * std::cos(phi), b2, b1 * std::sin(phi);
      fam.w.push_back(w);
    }
  } else {
    if (static_cast<int>(phis.size()) < n - 1) throw std::invalid_argument("direction_family: need n-1 angles");
    for (int i = 0; i < n - 1; ++i)
      if (phis[i] == 0.0) throw std::invalid_argument("direction_family: angles must be nonzero for n > 3");
    if (phis[n - 2] == phis[n - 3]) throw std::invalid_argument("direction_family: last two angles must differ");
    const double p1 = phis[0];
    const int tail = n - 2;
    auto with_tail = [&](const Vec& u) {
      Vec w = Vec::Zero(n);
      w(0) = b1 * std::cos(p1);
      w(1) = b2;
      w.tail(tail) = b1 * std::sin(p1) * u;
      return w;
    };
    Vec w1 = Vec::Zero(n);
    w1(0) = b1;
    w1(1) = b2;
    fam.w.push_back(w1);
    fam.w.push_back(with_tail(spherical({}, tail)));
    for (int j = 3; j <= n - 1; ++j)
      fam.w.push_back(with_tail(spherical(std::vector<double>(phis.begin() + 1, phis.begin() + (j - 1)), tail)));
    std::vector<double> last(phis.begin() + 1, phis.begin() + (n - 3));
    last.push_back(phis[n - 2]);
    fam.w.push_back(with_tail(spherical(last, tail)));
  }

  Mat F(n + 1, n);
  for (int i = 0; i < n; ++i) F.col(i) = lift(fam.w[i]);
  const Mat G = F.transpose() * F;
  Eigen::SelfAdjointEigenSolver<Mat> eig(G);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  fam.gram_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(fam.gram_condition <= 1e8))
    throw GeometryError(GeometryFault::degenerate_family,
                        "Gram condition number " + std::to_string(fam.gram_condition) + " above 1e8");
  return fam;
}

OrthonormalFamily gram_schmidt_basis(const std::vector<Vec>& family) {
  const int count = static_cast<int>(family.size());
  if (count == 0) throw std::invalid_argument("gram_schmidt_basis: empty family");
  OrthonormalFamily out;
  out.A = Mat::Zero(count, count);
  for (int i = 0; i < count; ++i) {
    Vec v = family[i];
    Vec coeff = Vec::Zero(count);
    coeff(i) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        const double r = out.mu[j].dot(v);
        v -= r * out.mu[j];
        coeff -= r * out.A.row(j).transpose();
      }
    }
    const double norm = v.norm();
    if (norm < 1e-12 * std::max(1.0, family[i].norm()))
      throw GeometryError(GeometryFault::degenerate_family, "family is linearly dependent");
    out.mu.push_back(v / norm);
    out.A.row(i) = (coeff / norm).transpose();
  }
  return out;
}

CVec project_onto_family(std::span<const std::complex<double>> values, const std::vector<Vec>& family,
                         const Mat& A) {
  const int count = static_cast<int>(family.size());
  if (static_cast<int>(values.size()) != count || A.rows() != count)
    throw std::invalid_argument("project_onto_family: size mismatch");
  const Mat S = A.transpose() * A;
  CVec out = CVec::Zero(family.front().size());
  for (int k = 0; k < count; ++k) {
    std::complex<double> coef = 0.0;
    for (int j = 0; j < count; ++j) coef += values[j] * S(k, j);
    out += coef * family[k].cast<std::complex<double>>();
  }
  return out;
}

ZetaGeometry zeta_geometry(const Vec& zeta, const ReconConfig& cfg) {
  const int n = cfg.n();
  ZetaGeometry g;
  g.zeta = zeta;
  g.omega = omega_for_zeta(zeta, cfg.omega0, cfg.delta);
  g.rotation = rotation_M(zeta, g.omega);
  g.delta_prime = 0.5 * (cfg.delta - (g.omega - cfg.omega0).norm());
  const std::vector<double> fractions = cfg.phi_fractions.empty() ? default_phi_fractions(n) : cfg.phi_fractions;
  for (std::size_t i = 0; i < phi_count(n); ++i) g.phis.push_back(fractions[i] * g.delta_prime);
  g.family = direction_family(g.rotation.b, g.delta_prime, g.phis);
  for (const auto& w : g.family.w) {
    g.lifted.push_back(lift(w));
    g.directions.push_back((g.rotation.R.transpose() * w).normalized());
  }
  g.basis = gram_schmidt_basis(g.lifted);
  return g;
}

}  // namespace lightray
