#include <cmath>
#include <stdexcept>

#include "lightray/reconstruction.hpp"

namespace lightray {

namespace {

struct ProjectedSlices {
  ZetaGeometry geo;
  std::vector<CVec> phi3;       // rotated frame, per channel
  std::vector<CVec> projected;  // M^{-1} Phi3, per channel
  std::vector<std::complex<double>> phi2;
};

ProjectedSlices project_slices(const MomentSource& src, const Vec& zeta, const ReconConfig& cfg, bool with_phi2) {
  if (src.rank() < 1) throw std::invalid_argument("vector reconstruction needs rank >= 1 data");
  ProjectedSlices out{zeta_geometry(zeta, cfg), {}, {}, {}};
  const int n = src.n(), channels = src.channels();
  std::vector<std::vector<std::complex<double>>> phi1(channels, std::vector<std::complex<double>>(n));
  for (int j = 0; j < n; ++j) {
    // The first family direction is omega itself, so Phi2 rides on its pass.
    const bool want_phi2 = with_phi2 && j == 0;
    const SliceValues sv = slice_values(src, out.geo.directions[j], zeta, cfg.grid, want_phi2);
    for (int ch = 0; ch < channels; ++ch) phi1[ch][j] = sv.phi1[ch];
    if (want_phi2) out.phi2 = sv.phi2;
  }
  const Mat Mt = out.geo.rotation.M.transpose();
  for (int ch = 0; ch < channels; ++ch) {
    // Family vectors live in the rotated frame: Phi1_j = <M f^, (1, w_j)>.
    CVec p = project_onto_family(phi1[ch], out.geo.lifted, out.geo.basis.A);
    out.projected.push_back(Mt.cast<std::complex<double>>() * p);
    out.phi3.push_back(std::move(p));
  }
  return out;
}

}  // namespace

CVec VectorRecovery::combine(int channel, int sign) const {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  return normal.at(channel) * zeta.cast<std::complex<double>>() + static_cast<double>(sign) * projected.at(channel);
}

VectorRecovery recover_vectors(const MomentSource& src, const Vec& zeta, const ReconConfig& cfg) {
  const ProjectedSlices centre = project_slices(src, zeta, cfg, true);
  const Vec step = cfg.fd_eps * lift(centre.geo.omega);
  const ProjectedSlices plus = project_slices(src, zeta + step, cfg, false);
  const ProjectedSlices minus = project_slices(src, zeta - step, cfg, false);
  const CVec normal = lift(centre.geo.omega).cast<std::complex<double>>();

  VectorRecovery rec;
  rec.zeta = zeta;
  rec.omega = centre.geo.omega;
  rec.family_condition = centre.geo.family.gram_condition;
  rec.projected = centre.projected;
  rec.phi2 = centre.phi2;
  for (int ch = 0; ch < src.channels(); ++ch) {
    const std::complex<double> p4 = normal.dot(plus.projected[ch] - minus.projected[ch]) / (2.0 * cfg.fd_eps);
    rec.phi4.push_back(p4);
    rec.normal.push_back(0.5 * (rec.phi2[ch] - p4));
  }
  return rec;
}

CVec phi3(const Vec& zeta, const ReconConfig& cfg, const MomentSource& src) {
  return project_slices(src, zeta, cfg, false).phi3.front();
}

std::complex<double> phi4(const Vec& zeta, const ReconConfig& cfg, const MomentSource& src) {
  const Vec omega = omega_for_zeta(zeta, cfg.omega0, cfg.delta);
  const Vec step = cfg.fd_eps * lift(omega);
  const CVec plus = project_slices(src, zeta + step, cfg, false).projected.front();
  const CVec minus = project_slices(src, zeta - step, cfg, false).projected.front();
  return lift(omega).cast<std::complex<double>>().dot(plus - minus) / (2.0 * cfg.fd_eps);
}

CVec reconstruct_vector(const MomentSource& src, const Vec& zeta, const ReconConfig& cfg, int sign, int channel) {
  return recover_vectors(src, zeta, cfg).combine(channel, sign);
}

PhantomField sign_probe_phantom(int n) {
  RealTensor coeff(n + 1, 1);
  const double pattern[] = {0.7, -0.4, 0.9, 0.3, -0.6, 0.5, 0.2, -0.8, 0.45};
  for (int i = 0; i <= n; ++i) coeff[i] = pattern[i % 9];
  PhantomField f = gaussian_phantom(coeff, 1.0);
  Vec centre = Vec::Zero(n + 1);
  const double offsets[] = {0.2, -0.1, 0.15, 0.05, -0.12, 0.08, 0.1, -0.05, 0.03};
  for (int i = 0; i <= n; ++i) centre(i) = offsets[i % 9];
  f.terms.front().center = centre;
  return f;
}

SignResolution resolve_vector_sign(const PhantomField& probe, const QuadratureSpec& quad, const ReconConfig& cfg) {
  if (probe.m != 1) throw std::invalid_argument("sign probe must be a vector field");
  const DataOracle oracle(probe, quad);
  const auto zetas = sample_zetas(cfg, 5, cfg.seed ^ 0x5157A11ULL);
  double sq_plus = 0.0, sq_minus = 0.0;
  for (const auto& zeta : zetas) {
    const VectorRecovery rec = recover_vectors(oracle, zeta, cfg);
    const ComplexTensor ref = fourier_ref(probe, zeta);
    CVec r(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) r(static_cast<int>(i)) = ref[i];
    const double scale = std::max(r.norm(), 1e-300);
    sq_plus += std::pow((rec.combine(0, 1) - r).norm() / scale, 2);
    sq_minus += std::pow((rec.combine(0, -1) - r).norm() / scale, 2);
  }
  SignResolution res;
  res.error_plus = std::sqrt(sq_plus / zetas.size());
  res.error_minus = std::sqrt(sq_minus / zetas.size());
  res.sign = res.error_plus <= res.error_minus ? 1 : -1;
  return res;
}

}  // namespace lightray
