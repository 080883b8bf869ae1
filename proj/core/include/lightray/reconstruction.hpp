#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lightray/errors.hpp"
#include "lightray/fourier_slice.hpp"
#include "lightray/linalg.hpp"
#include "lightray/phantom.hpp"
#include "lightray/ray_transform.hpp"

namespace lightray {

struct ReconConfig {
  Vec omega0;          // aperture centre, unit n-vector
  double delta = 0.2;  // aperture radius
  // Direction-family angles as multiples of delta' (computed per zeta).
  // Empty selects the defaults of default_phi_fractions.
  std::vector<double> phi_fractions;
  double fd_eps = 1e-2;  // zeta step for Phi4
  int zeta_count = 50;
  double zeta_min = 0.5;
  double zeta_max = 2.0;
  // Sampled points keep |omega - omega0| < aperture_use * delta so that
  // delta' and the family conditioning stay bounded away from zero.
  double aperture_use = 0.5;
  std::uint64_t seed = 1;
  SliceGrid grid{5.0, 18};  // coarser than the slice default; ample for |zeta| <= 2
  FiniteDifference fd;
  // Compare against the transform of the trace-free part instead of the
  // phantom itself (the data cannot see the rest).
  bool compare_tracefree_part = false;

  static ReconConfig defaults(int n);
  int n() const { return static_cast<int>(omega0.size()); }
  void validate() const;
};

// --- geometry ---------------------------------------------------------------

// Unit omega with zeta' . omega = -zeta0 closest to omega0, without the aperture test.
Vec omega_candidate(const Vec& zeta, const Vec& omega0);
Vec omega_for_zeta(const Vec& zeta, const Vec& omega0, double delta);

struct Rotation {
  Mat R;  // rows v1 = in-plane part of omega, v2 = zeta'/|zeta'|, completion
  Mat M;  // blockdiag(1, R)
  Vec b;  // R omega = (b1, b2, 0, ..., 0)
};

Rotation rotation_M(const Vec& zeta, const Vec& omega);

// Number of family angles: 3 for n = 3 (the first is 0), n - 1 otherwise.
std::size_t phi_count(int n);
std::vector<double> default_phi_fractions(int n);

struct DirectionFamily {
  std::vector<Vec> w;
  double gram_condition = 0.0;  // of the Gram matrix of the lifted vectors (1, w_i)
};

// n = 3: w_i = (b1 cos phi_i, b2, b1 sin phi_i) with phis = (0, phi2, phi3).
// n > 3: nested spherical angles phis = (phi1, ..., phi_{n-1}).
DirectionFamily direction_family(const Vec& b, double delta_prime, const std::vector<double>& phis);

struct OrthonormalFamily {
  Mat A;                // mu_i = sum_j A_ij family_j, lower triangular
  std::vector<Vec> mu;
};

OrthonormalFamily gram_schmidt_basis(const std::vector<Vec>& family);

// sum_{j,k} values_j [A^T A]_{kj} family_k: the projection onto span(family)
// of a vector whose inner products with family_j are values_j.
CVec project_onto_family(std::span<const std::complex<double>> values, const std::vector<Vec>& family,
                         const Mat& A);

struct ZetaGeometry {
  Vec zeta;
  Vec omega;
  Rotation rotation;
  double delta_prime = 0.0;
  std::vector<double> phis;
  DirectionFamily family;
  std::vector<Vec> lifted;      // (1, w_j)
  OrthonormalFamily basis;
  std::vector<Vec> directions;  // R^{-1} w_j, unit, inside the aperture
};

ZetaGeometry zeta_geometry(const Vec& zeta, const ReconConfig& cfg);

// Rejection sample of zeta in the annulus zeta_min <= |zeta| <= zeta_max whose
// geometry (including the +-fd_eps Phi4 stencil) is valid.
std::vector<Vec> sample_zetas(const ReconConfig& cfg, int count, std::uint64_t seed);

// --- rank one ----------------------------------------------------------------

// Phi3 in the rotated frame (component of M f^ orthogonal to M zeta), channel 0.
CVec phi3(const Vec& zeta, const ReconConfig& cfg, const MomentSource& src);

// Phi4 = sum_i omega~_i d/d(omega~) [M^{-1} Phi3]_i, channel 0.
std::complex<double> phi4(const Vec& zeta, const ReconConfig& cfg, const MomentSource& src);

// Sign-independent pieces of the vector formula for every channel.
struct VectorRecovery {
  Vec zeta;
  Vec omega;
  double family_condition = 0.0;
  std::vector<CVec> projected;               // M^{-1} Phi3 per channel
  std::vector<std::complex<double>> normal;  // c0 = (Phi2 - Phi4) / 2 per channel
  std::vector<std::complex<double>> phi2;
  std::vector<std::complex<double>> phi4;

  CVec combine(int channel, int sign) const;  // c0 zeta + sign M^{-1} Phi3
};

VectorRecovery recover_vectors(const MomentSource& src, const Vec& zeta, const ReconConfig& cfg);

CVec reconstruct_vector(const MomentSource& src, const Vec& zeta, const ReconConfig& cfg, int sign, int channel = 0);

struct SignResolution {
  int sign = 1;
  double error_plus = 0.0;   // RMS relative error with sign +1 on the probes
  double error_minus = 0.0;  // same with -1
};

// Compares both signs against the closed-form transform of `probe` on 5 points.
SignResolution resolve_vector_sign(const PhantomField& probe, const QuadratureSpec& quad, const ReconConfig& cfg);

// Built-in generic vector probe phantom.
PhantomField sign_probe_phantom(int n);

// --- rank reduction ----------------------------------------------------------

// Psi1 = data * omega_i L^{m,k} + bracket * (1/m)[d_xi L^{m,k+1}
//        - omega_i sum_j omega_j d_xj L^{m,k+1} - (grad_S L^{m,k})_i],
// used as L^{m-1,k}(f)_i = -omega_i L^{m-1,k}(f)_0 + Psi1.
struct PsiConvention {
  double bracket = -1.0;
  double data = 1.0;

  static PsiConvention paper_statement() { return {1.0, 1.0}; }
  friend bool operator==(const PsiConvention&, const PsiConvention&) = default;
};

double psi1(const MomentSource& src, const Ray& ray, int k, int i, double h, PsiConvention conv = {},
            int channel = 0);

// Denominator 2m + n - 3 of the column-0 formula.
int column0_denominator(int m, int n);

struct ReductionOptions {
  FiniteDifference fd;
  PsiConvention convention;
  bool require_tracefree = true;
};

// Column-0 data L^{m-1,k}(f)_0 from rank-m data:
// [sum_i (grad_S Psi1^{k,i})_i - sum_i d_xi Psi1^{k+1,i}
//  + sum_ij omega_i omega_j d_xj Psi1^{k+1,i} + (m-1) L^{m,k}] / (2m+n-3).
double psi2_column0(const MomentSource& src, const Ray& ray, int k, const ReductionOptions& opts = {},
                    int channel = 0);

// Rank m-1 column data of every channel of a rank-m source; channel
// ch * (n+1) + p holds column p of parent channel ch.
class ColumnBundle final : public MomentSource {
 public:
  ColumnBundle(std::shared_ptr<const MomentSource> parent, ReductionOptions opts);

  int n() const override { return parent_->n(); }
  int rank() const override { return parent_->rank() - 1; }
  int channels() const override { return parent_->channels() * (parent_->n() + 1); }
  void moments(const Ray& ray, int kmax, std::span<double> out) const override;
  double hyperplane_extent(const Vec& omega, double sigmas) const override {
    return parent_->hyperplane_extent(omega, sigmas);
  }

  const MomentSource& parent() const { return *parent_; }

 private:
  std::shared_ptr<const MomentSource> parent_;
  ReductionOptions opts_;
};

// One channel of a multi-channel source.
class ChannelView final : public MomentSource {
 public:
  ChannelView(std::shared_ptr<const MomentSource> source, int channel);

  int n() const override { return source_->n(); }
  int rank() const override { return source_->rank(); }
  void moments(const Ray& ray, int kmax, std::span<double> out) const override;
  double hyperplane_extent(const Vec& omega, double sigmas) const override {
    return source_->hyperplane_extent(omega, sigmas);
  }

 private:
  std::shared_ptr<const MomentSource> source_;
  int channel_;
};

// True when J_op(coeff, 1) vanishes (relative tol) for every term.
bool is_tracefree(const PhantomField& f, double tol = 1e-10);

std::shared_ptr<const ColumnBundle> reduce_rank(std::shared_ptr<const MomentSource> src,
                                                const ReductionOptions& opts = {});

// The (1+n) single-channel column oracles of a single-channel source.
std::vector<std::shared_ptr<const MomentSource>> column_oracles(std::shared_ptr<const MomentSource> src,
                                                                const ReductionOptions& opts = {});

struct PsiResolution {
  PsiConvention convention;
  std::vector<std::pair<PsiConvention, double>> residuals;  // max abs residual per candidate
};

// Picks the Psi1 convention reproducing direct column data of a built-in
// trace-free rank-2 probe.
PsiResolution resolve_psi_convention(const QuadratureSpec& quad, const FiniteDifference& fd, int n = 3);

// --- full pipeline -------------------------------------------------------------

struct FrequencyPoint {
  Vec zeta;
  Vec omega;
  std::vector<std::complex<double>> recovered;  // canonical components
  std::vector<std::complex<double>> reference;
  double rel_error = 0.0;
  double family_condition = 0.0;
  double path_spread = 0.0;  // max disagreement between duplicate column paths
};

struct ReconReport {
  int n = 3;
  int rank = 1;
  SignResolution sign;
  PsiResolution psi;
  std::vector<FrequencyPoint> points;
  std::vector<std::string> failures;
  double aggregate_rel_error = 0.0;  // RMS of per-point rel_error
  double max_path_spread = 0.0;
  double max_family_condition = 0.0;
};

// Recovers f^ of a rank-m (m >= 1) phantom on sampled points of H_n from its
// ray data. Ranks >= 2 must be trace-free unless cfg.compare_tracefree_part.
ReconReport reconstruct_tensor(const DataOracle& oracle, const ReconConfig& cfg);

// Same pipeline on given zeta points with pre-resolved conventions.
ReconReport reconstruct_tensor(const DataOracle& oracle, const ReconConfig& cfg, const std::vector<Vec>& zetas,
                               const SignResolution& sign, const PsiResolution& psi);

}  // namespace lightray
