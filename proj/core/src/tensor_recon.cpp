#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lightray/reconstruction.hpp"

namespace lightray {

namespace {

std::shared_ptr<const MomentSource> non_owning(const MomentSource& src) {
  return {&src, [](const MomentSource*) {}};
}

double weighted_norm(const IndexTable& table, const std::vector<std::complex<double>>& v) {
  double sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sq += table.multiplicity(i) * std::norm(v[i]);
  return std::sqrt(sq);
}

}  // namespace

ReconReport reconstruct_tensor(const DataOracle& oracle, const ReconConfig& cfg) {
  cfg.validate();
  if (oracle.n() != cfg.n()) throw std::invalid_argument("recon.omega0 dimension does not match the phantom");
  const SignResolution sign = resolve_vector_sign(sign_probe_phantom(cfg.n()), oracle.quadrature(), cfg);
  PsiResolution psi;
  if (oracle.rank() >= 2) psi = resolve_psi_convention(oracle.quadrature(), cfg.fd, cfg.n());
  return reconstruct_tensor(oracle, cfg, sample_zetas(cfg, cfg.zeta_count, cfg.seed), sign, psi);
}

ReconReport reconstruct_tensor(const DataOracle& oracle, const ReconConfig& cfg, const std::vector<Vec>& zetas,
                               const SignResolution& sign, const PsiResolution& psi) {
  cfg.validate();
  const int n = oracle.n(), m = oracle.rank();
  if (n != cfg.n()) throw std::invalid_argument("recon.omega0 dimension does not match the phantom");
  if (m < 1) throw std::invalid_argument("reconstruction needs rank >= 1");
  const PhantomField& phantom = oracle.phantom();
  if (m >= 2 && !cfg.compare_tracefree_part && !is_tracefree(phantom))
    throw std::invalid_argument("rank >= 2 reconstruction needs a trace-free phantom (or compare_tracefree_part)");

  ReductionOptions opts{cfg.fd, psi.convention, !cfg.compare_tracefree_part};
  std::shared_ptr<const MomentSource> src = non_owning(oracle);
  for (int r = 1; r < m; ++r) src = reduce_rank(src, opts);
  const PhantomField reference = m >= 2 && cfg.compare_tracefree_part ? make_tracefree(phantom) : phantom;

  const IndexTable& table = IndexTable::get(n + 1, m);
  const int channels = src->channels();

  ReconReport report;
  report.n = n;
  report.rank = m;
  report.sign = sign;
  report.psi = psi;
  double sq_sum = 0.0;
  for (const auto& zeta : zetas) {
    VectorRecovery rec;
    try {
      rec = recover_vectors(*src, zeta, cfg);
    } catch (const GeometryError& e) {
      report.failures.push_back(e.what());
      continue;
    }

    // Every column path (c1, ..., c_{m-1}) plus the vector slot j lands on the
    // canonical index of {c1, ..., c_{m-1}, j}; duplicates are averaged.
    std::vector<std::vector<std::complex<double>>> estimates(table.size());
    std::vector<int> idx(m);
    for (int ch = 0; ch < channels; ++ch) {
      const CVec v = rec.combine(ch, sign.sign);
      int rem = ch;
      for (int r = m - 2; r >= 0; --r) {
        idx[r] = rem % (n + 1);
        rem /= n + 1;
      }
      for (int j = 0; j <= n; ++j) {
        idx[m - 1] = j;
        estimates[table.offset(idx)].push_back(v(j));
      }
    }

    FrequencyPoint pt;
    pt.zeta = zeta;
    pt.omega = rec.omega;
    pt.family_condition = rec.family_condition;
    const ComplexTensor ref = fourier_ref(reference, zeta);
    for (std::size_t pos = 0; pos < table.size(); ++pos) {
      std::complex<double> mean = 0.0;
      for (const auto& e : estimates[pos]) mean += e;
      mean /= static_cast<double>(estimates[pos].size());
      for (const auto& e : estimates[pos]) pt.path_spread = std::max(pt.path_spread, std::abs(e - mean));
      pt.recovered.push_back(mean);
      pt.reference.push_back(ref[pos]);
    }
    std::vector<std::complex<double>> diff(table.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = pt.recovered[i] - pt.reference[i];
    const double ref_norm = weighted_norm(table, pt.reference);
    const double err = weighted_norm(table, diff);
    pt.rel_error = ref_norm > 0.0 ? err / ref_norm : err;

    sq_sum += pt.rel_error * pt.rel_error;
    report.max_path_spread = std::max(report.max_path_spread, pt.path_spread);
    report.max_family_condition = std::max(report.max_family_condition, pt.family_condition);
    report.points.push_back(std::move(pt));
  }
  report.aggregate_rel_error =
      report.points.empty() ? std::numeric_limits<double>::infinity() : std::sqrt(sq_sum / report.points.size());
  return report;
}

}  // namespace lightray
