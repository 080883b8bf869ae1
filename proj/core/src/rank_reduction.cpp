#include <cmath>
#include <limits>
#include <stdexcept>

#include "lightray/reconstruction.hpp"
#include "lightray/sampling.hpp"

namespace lightray {

namespace {

// Psi1^{k,i} for k = 0..K, every channel and spatial i, at one ray, plus the
// data L^k itself. Layout psi[(ch * (K+1) + k) * n + i], data[ch * (K+1) + k].
struct Psi1Block {
  std::vector<double> psi;
  std::vector<double> data;
};

Psi1Block psi1_block(const MomentSource& src, const Ray& ray, int K, double h, PsiConvention conv) {
  const int P = src.channels(), n = src.n(), m = src.rank();
  const int km = K + 1;
  const std::size_t stride = static_cast<std::size_t>(km) + 1;
  std::vector<double> centre(P * stride), plus(P * stride), minus(P * stride);
  src.moments(ray, km, centre);

  // dx[(q * P + ch) * stride + k], dw likewise.
  std::vector<double> dx(static_cast<std::size_t>(n) * P * stride), dw(dx.size());
  for (int q = 0; q < n; ++q) {
    Ray a = ray, b = ray;
    a.base(q + 1) += h;
    b.base(q + 1) -= h;
    src.moments(a, km, plus);
    src.moments(b, km, minus);
    for (std::size_t s = 0; s < P * stride; ++s) dx[q * P * stride + s] = (plus[s] - minus[s]) / (2 * h);
    a = ray;
    b = ray;
    a.omega(q) += h;
    b.omega(q) -= h;
    src.moments(a, km, plus);
    src.moments(b, km, minus);
    for (std::size_t s = 0; s < P * stride; ++s) dw[q * P * stride + s] = (plus[s] - minus[s]) / (2 * h);
  }

  Psi1Block out;
  out.psi.resize(static_cast<std::size_t>(P) * (K + 1) * n);
  out.data.resize(static_cast<std::size_t>(P) * (K + 1));
  const Vec& w = ray.omega;
  for (int ch = 0; ch < P; ++ch) {
    for (int k = 0; k <= K; ++k) {
      double radial_w = 0.0, radial_x = 0.0;
      for (int q = 0; q < n; ++q) {
        radial_w += w(q) * dw[(q * P + ch) * stride + k];
        radial_x += w(q) * dx[(q * P + ch) * stride + k + 1];
      }
      const double L = centre[ch * stride + k];
      out.data[ch * (K + 1) + k] = L;
      for (int i = 0; i < n; ++i) {
        const double tangential = dw[(i * P + ch) * stride + k] - w(i) * radial_w;
        const double bracket = dx[(i * P + ch) * stride + k + 1] - w(i) * radial_x - tangential;
        out.psi[(ch * (K + 1) + k) * n + i] = conv.data * w(i) * L + conv.bracket * bracket / m;
      }
    }
  }
  return out;
}

void check_rank(const MomentSource& src) {
  if (src.rank() < 1) throw std::invalid_argument("rank reduction needs rank >= 1 data");
}

void check_tracefree(const MomentSource& src, const ReductionOptions& opts) {
  if (!opts.require_tracefree || src.rank() < 2) return;
  if (const auto* oracle = dynamic_cast<const DataOracle*>(&src))
    if (!is_tracefree(oracle->phantom()))
      throw std::invalid_argument(
          "column-0 recovery needs a trace-free field (J_op of the coefficients is nonzero); "
          "only the trace-free part is determined by the data");
}

}  // namespace

double psi1(const MomentSource& src, const Ray& ray, int k, int i, double h, PsiConvention conv, int channel) {
  check_rank(src);
  check_ray(src, ray);
  if (k < 0) throw std::invalid_argument("moment order k must be >= 0");
  if (i < 1 || i > src.n()) throw std::out_of_range("spatial index must be in 1..n");
  if (channel < 0 || channel >= src.channels()) throw std::out_of_range("channel out of range");
  const Psi1Block block = psi1_block(src, ray, k, h, conv);
  return block.psi[(static_cast<std::size_t>(channel) * (k + 1) + k) * src.n() + (i - 1)];
}

int column0_denominator(int m, int n) { return 2 * m + n - 3; }

ColumnBundle::ColumnBundle(std::shared_ptr<const MomentSource> parent, ReductionOptions opts)
    : parent_(std::move(parent)), opts_(opts) {
  if (!parent_) throw std::invalid_argument("ColumnBundle needs a parent source");
  check_rank(*parent_);
  check_tracefree(*parent_, opts_);
}

void ColumnBundle::moments(const Ray& ray, int kmax, std::span<double> out) const {
  check_ray(*this, ray);
  const MomentSource& src = *parent_;
  const int P = src.channels(), n = src.n(), m = src.rank();
  const double h = opts_.fd.h_nested;
  const std::size_t out_stride = static_cast<std::size_t>(kmax) + 1;
  if (out.size() < static_cast<std::size_t>(channels()) * out_stride)
    throw std::invalid_argument("ColumnBundle: output too small");
  const double denom = column0_denominator(m, n);

  const Psi1Block centre = psi1_block(src, ray, kmax, h, opts_.convention);
  const std::size_t cs = static_cast<std::size_t>(kmax) + 1;  // centre/omega-shift k stride
  const std::size_t xs = static_cast<std::size_t>(kmax) + 2;  // x-shift k stride

  // dpw[((q * P + ch) * cs + k) * n + i] = d_omega_q Psi1^{k,i}
  // dpx[((q * P + ch) * xs + k) * n + i] = d_x_q Psi1^{k,i}
  std::vector<double> dpw(static_cast<std::size_t>(n) * P * cs * n), dpx(static_cast<std::size_t>(n) * P * xs * n);
  for (int q = 0; q < n; ++q) {
    Ray a = ray, b = ray;
    a.omega(q) += h;
    b.omega(q) -= h;
    const Psi1Block pa = psi1_block(src, a, kmax, h, opts_.convention);
    const Psi1Block pb = psi1_block(src, b, kmax, h, opts_.convention);
    for (std::size_t s = 0; s < pa.psi.size(); ++s) dpw[q * P * cs * n + s] = (pa.psi[s] - pb.psi[s]) / (2 * h);
    a = ray;
    b = ray;
    a.base(q + 1) += h;
    b.base(q + 1) -= h;
    const Psi1Block xa = psi1_block(src, a, kmax + 1, h, opts_.convention);
    const Psi1Block xb = psi1_block(src, b, kmax + 1, h, opts_.convention);
    for (std::size_t s = 0; s < xa.psi.size(); ++s) dpx[q * P * xs * n + s] = (xa.psi[s] - xb.psi[s]) / (2 * h);
  }

  const Vec& w = ray.omega;
  for (int ch = 0; ch < P; ++ch) {
    for (int k = 0; k <= kmax; ++k) {
      // Y = sum_i (grad_S Psi1^{k,i})_i
      double Y = 0.0;
      for (int i = 0; i < n; ++i) {
        double radial = 0.0;
        for (int q = 0; q < n; ++q) radial += w(q) * dpw[((q * P + ch) * cs + k) * n + i];
        Y += dpw[((i * P + ch) * cs + k) * n + i] - w(i) * radial;
      }
      // X = sum_i d_xi Psi1^{k+1,i} - sum_ij omega_i omega_j d_xj Psi1^{k+1,i}
      double X = 0.0;
      for (int i = 0; i < n; ++i) {
        X += dpx[((i * P + ch) * xs + k + 1) * n + i];
        for (int j = 0; j < n; ++j) X -= w(i) * w(j) * dpx[((j * P + ch) * xs + k + 1) * n + i];
      }
      const double L = centre.data[ch * cs + k];
      const double c0 = (Y - X + (m - 1) * L) / denom;
      const std::size_t base = static_cast<std::size_t>(ch) * (n + 1);
      out[base * out_stride + k] = c0;
      for (int i = 0; i < n; ++i)
        out[(base + i + 1) * out_stride + k] = -w(i) * c0 + centre.psi[(ch * cs + k) * n + i];
    }
  }
}

ChannelView::ChannelView(std::shared_ptr<const MomentSource> source, int channel)
    : source_(std::move(source)), channel_(channel) {
  if (!source_) throw std::invalid_argument("ChannelView needs a source");
  if (channel_ < 0 || channel_ >= source_->channels()) throw std::out_of_range("channel out of range");
}

void ChannelView::moments(const Ray& ray, int kmax, std::span<double> out) const {
  std::vector<double> all(static_cast<std::size_t>(source_->channels()) * (kmax + 1));
  source_->moments(ray, kmax, all);
  for (int k = 0; k <= kmax; ++k) out[k] = all[static_cast<std::size_t>(channel_) * (kmax + 1) + k];
}

double psi2_column0(const MomentSource& src, const Ray& ray, int k, const ReductionOptions& opts, int channel) {
  check_rank(src);
  if (k < 0) throw std::invalid_argument("moment order k must be >= 0");
  if (channel < 0 || channel >= src.channels()) throw std::out_of_range("channel out of range");
  // Non-owning handle; the bundle does not outlive this call.
  const ColumnBundle bundle(std::shared_ptr<const MomentSource>(&src, [](const MomentSource*) {}), opts);
  std::vector<double> out(static_cast<std::size_t>(bundle.channels()) * (k + 1));
  bundle.moments(ray, k, out);
  return out[static_cast<std::size_t>(channel) * (src.n() + 1) * (k + 1) + k];
}

bool is_tracefree(const PhantomField& f, double tol) {
  if (f.m < 2) return true;
  for (const auto& t : f.terms) {
    const RealTensor trace = J_op(t.coeff, f.c);
    if (trace.max_abs() > tol * std::max(1.0, t.coeff.max_abs())) return false;
  }
  return true;
}

std::shared_ptr<const ColumnBundle> reduce_rank(std::shared_ptr<const MomentSource> src,
                                                const ReductionOptions& opts) {
  return std::make_shared<const ColumnBundle>(std::move(src), opts);
}

std::vector<std::shared_ptr<const MomentSource>> column_oracles(std::shared_ptr<const MomentSource> src,
                                                                const ReductionOptions& opts) {
  if (src->channels() != 1) throw std::invalid_argument("column_oracles expects a single-channel source");
  const int n = src->n();
  auto bundle = reduce_rank(std::move(src), opts);
  std::vector<std::shared_ptr<const MomentSource>> out;
  for (int p = 0; p <= n; ++p) out.push_back(std::make_shared<const ChannelView>(bundle, p));
  return out;
}

PsiResolution resolve_psi_convention(const QuadratureSpec& quad, const FiniteDifference& fd, int n) {
  std::mt19937_64 rng(0x9a11b4a7ULL);
  RandomPhantomOptions popts;
  popts.n = n;
  popts.m = 2;
  popts.terms = 1;
  popts.tracefree = true;
  const PhantomField probe = random_phantom(popts, rng);
  const DataOracle oracle(probe, quad);
  std::vector<DataOracle> columns;
  for (int p = 0; p <= n; ++p) columns.emplace_back(column(probe, p), quad);

  std::vector<Ray> rays;
  for (int r = 0; r < 4; ++r) rays.push_back(random_ray(n, 0.6, rng));

  PsiResolution res;
  double best = std::numeric_limits<double>::infinity();
  for (double bracket : {-1.0, 1.0}) {
    for (double data : {1.0, -1.0}) {
      const PsiConvention conv{bracket, data};
      double worst = 0.0;
      for (const auto& ray : rays) {
        for (int k = 0; k <= 1; ++k) {
          const double c0 = mlrt_eval(columns[0], ray, k);
          for (int i = 1; i <= n; ++i) {
            const double direct = mlrt_eval(columns[i], ray, k);
            const double formula = -ray.omega(i - 1) * c0 + psi1(oracle, ray, k, i, fd.h, conv);
            worst = std::max(worst, std::abs(direct - formula));
          }
        }
      }
      res.residuals.emplace_back(conv, worst);
      if (worst < best) {
        best = worst;
        res.convention = conv;
      }
    }
  }
  return res;
}

}  // namespace lightray
