#include "cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cli/verify.hpp"
#include "lightray/errors.hpp"
#include "lightray/fourier_slice.hpp"
#include "lightray/json_io.hpp"
#include "lightray/reconstruction.hpp"
#include "lightray/sampling.hpp"

namespace lightray::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SchemaError(path.string(), "cannot write file");
  out << text;
}

std::ostream& log(const Context& ctx) {
  static std::ostream null(nullptr);
  return ctx.log ? *ctx.log : null;
}

void reject_planar(int n) {
  if (n == 2)
    throw SchemaError("n", "n = 2 is not supported: the reconstruction is restricted to n >= 3 "
                           "(the two-dimensional case is excluded)");
  if (n < 3) throw SchemaError("n", "reconstruction needs n >= 3");
}

std::vector<Ray> read_rays(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open rays file");
  std::vector<Ray> rays;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw SchemaError(path + ":" + std::to_string(lineno), "not a number: '" + cell + "'");
      }
    }
    if (static_cast<int>(values.size()) != 2 * n + 1)
      throw SchemaError(path + ":" + std::to_string(lineno),
                        "expected " + std::to_string(2 * n + 1) + " columns t,x1..xn,omega1..omegan");
    Ray ray;
    ray.base = Vec(n + 1);
    ray.omega = Vec(n);
    for (int i = 0; i <= n; ++i) ray.base(i) = values[i];
    for (int i = 0; i < n; ++i) ray.omega(i) = values[n + 1 + i];
    if (ray.omega.norm() == 0.0) throw SchemaError(path + ":" + std::to_string(lineno), "omega must be nonzero");
    rays.push_back(ray);
  }
  return rays;
}

std::string component_label(std::span<const int> idx) {
  std::string out;
  for (int v : idx) out += std::to_string(v);
  return out.empty() ? "s" : out;
}

}  // namespace

PhantomField resolve_phantom(const RunConfig& cfg) {
  if (cfg.phantom) return phantom_from_json(*cfg.phantom, "phantom");
  if (!cfg.phantom_file.empty()) return phantom_from_json(load_json_file(cfg.phantom_file), cfg.phantom_file);
  if (cfg.generate) {
    std::mt19937_64 rng(cfg.seed);
    return random_phantom(cfg.generate->options, rng);
  }
  RealTensor one(4, 0);
  one[0] = 1.0;
  return gaussian_phantom(one);
}

int cmd_phantom(const Context& ctx, const std::string& spec_file) {
  const PhantomField f = spec_file.empty() ? resolve_phantom(ctx.config)
                                           : phantom_from_json(load_json_file(spec_file), spec_file);
  const auto path = ctx.out_dir / "phantom.json";
  write_file(path, phantom_to_json(f).dump(2) + "\n");
  log(ctx) << "phantom: n=" << f.n << " m=" << f.m << " terms=" << f.terms.size() << " -> " << path.string() << "\n";
  return kOk;
}

int cmd_forward(const Context& ctx, const std::string& rays_file) {
  const RunConfig& cfg = ctx.config;
  const PhantomField f = resolve_phantom(cfg);
  const DataOracle oracle(f, cfg.quadrature, cfg.noise_sigma, cfg.seed);
  const int n = f.n;
  const std::string file = rays_file.empty() ? cfg.forward.rays_file : rays_file;
  std::vector<Ray> rays;
  if (!file.empty()) {
    rays = read_rays(file, n);
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < cfg.forward.count; ++i) rays.push_back(random_ray(n, cfg.forward.base_radius, rng, f.c));
  }
  for (auto& r : rays) r.c = f.c;

  const int kmax = *std::max_element(cfg.forward.ks.begin(), cfg.forward.ks.end());
  std::ostringstream csv;
  csv << "t";
  for (int i = 1; i <= n; ++i) csv << ",x" << i;
  for (int i = 1; i <= n; ++i) csv << ",omega" << i;
  csv << ",k,value\n";
  std::vector<double> moments(static_cast<std::size_t>(kmax) + 1);
  for (const auto& ray : rays) {
    oracle.moments(ray, kmax, moments);
    for (int k : cfg.forward.ks) {
      for (int i = 0; i <= n; ++i) csv << (i ? "," : "") << fmt(ray.base(i));
      for (int i = 0; i < n; ++i) csv << "," << fmt(ray.omega(i));
      csv << "," << k << "," << fmt(moments[k]) << "\n";
    }
  }
  const auto path = ctx.out_dir / "forward.csv";
  write_file(path, csv.str());
  log(ctx) << "forward: " << rays.size() * cfg.forward.ks.size() << " rows -> " << path.string() << "\n";
  return kOk;
}

int cmd_verify(const Context& ctx, const std::string& suite) {
  const VerifyReport report = run_verify(ctx.config, suite);
  const auto path = ctx.out_dir / ("verify_" + suite + ".json");
  write_file(path, report.to_json().dump(2) + "\n");
  for (const auto& c : report.checks)
    log(ctx) << (c.pass() ? "PASS " : "FAIL ") << c.name << " residual=" << fmt(c.max_residual)
             << " tolerance=" << fmt(c.tolerance) << "\n";
  log(ctx) << "verify " << suite << ": " << (report.pass() ? "pass" : "FAIL") << " -> " << path.string() << "\n";
  return report.pass() ? kOk : kCheckFailed;
}

int cmd_slice(const Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const PhantomField f = resolve_phantom(cfg);
  const DataOracle oracle(f, cfg.quadrature, cfg.noise_sigma, cfg.seed);
  const int n = f.n;
  if (f.c != 1.0) throw SchemaError("phantom.c", "slice identities use light rays with c = 1");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> radius(0.0, cfg.slice.zeta_max);

  std::ostringstream csv;
  for (int i = 0; i <= n; ++i) csv << (i ? "," : "") << "zeta" << i;
  csv << ",re_phi1,im_phi1,re_phi2,im_phi2";
  for (int i = 1; i <= n; ++i) csv << ",omega" << i;
  csv << "\n";
  for (int s = 0; s < cfg.slice.count; ++s) {
    Vec omega;
    if (cfg.slice.omega) {
      if (cfg.slice.omega->size() != n) throw SchemaError("slice.omega", "needs n entries");
      omega = *cfg.slice.omega;
    } else {
      omega = random_unit_vector(n, rng);
    }
    const Vec nu = lift(omega).normalized();
    Vec dir;
    do {
      dir = random_unit_vector(n + 1, rng);
      dir -= dir.dot(nu) * nu;
    } while (dir.norm() < 1e-3);
    const Vec zeta = radius(rng) * dir.normalized();
    const SliceValues sv = slice_values(oracle, omega, zeta, cfg.slice.grid, true);
    for (int i = 0; i <= n; ++i) csv << (i ? "," : "") << fmt(zeta(i));
    csv << "," << fmt(sv.phi1[0].real()) << "," << fmt(sv.phi1[0].imag()) << "," << fmt(sv.phi2[0].real()) << ","
        << fmt(sv.phi2[0].imag());
    for (int i = 0; i < n; ++i) csv << "," << fmt(omega(i));
    csv << "\n";
  }
  const auto path = ctx.out_dir / "slice.csv";
  write_file(path, csv.str());
  log(ctx) << "slice: " << cfg.slice.count << " points -> " << path.string() << "\n";
  return kOk;
}

int cmd_reconstruct(const Context& ctx, int rank) {
  const RunConfig& cfg = ctx.config;
  if (rank < 1 || rank > 3) throw SchemaError("--rank", "must be 1, 2 or 3");
  ReconConfig rc = cfg.recon.config;
  reject_planar(rc.n());

  PhantomField f;
  if (cfg.phantom || !cfg.phantom_file.empty() || cfg.generate) {
    f = resolve_phantom(cfg);
  } else {
    RandomPhantomOptions po;
    po.n = rc.n();
    po.m = rank;
    po.tracefree = rank >= 2;
    std::mt19937_64 rng(cfg.seed);
    f = random_phantom(po, rng);
  }
  reject_planar(f.n);
  if (f.m != rank)
    throw SchemaError("phantom.m", "phantom rank " + std::to_string(f.m) + " does not match --rank " +
                                       std::to_string(rank));
  if (f.n != rc.n()) throw SchemaError("recon.omega0", "needs " + std::to_string(f.n) + " entries to match the phantom");
  if (f.c != 1.0) throw SchemaError("phantom.c", "reconstruction uses light rays with c = 1");
  try {
    rc.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("recon", e.what());
  }

  QuadratureSpec quad = cfg.quadrature;
  quad.nodes = cfg.recon.quadrature_nodes;
  const DataOracle oracle(f, quad, cfg.noise_sigma, cfg.seed);
  const ReconReport report = reconstruct_tensor(oracle, rc);
  const double bound = cfg.recon.max_rel_error.value_or(rank == 1 ? 0.05 : 0.10);

  const int n = f.n;
  const IndexTable& table = IndexTable::get(n + 1, rank);
  std::ostringstream csv;
  for (int i = 0; i <= n; ++i) csv << (i ? "," : "") << "zeta" << i;
  for (int i = 1; i <= n; ++i) csv << ",omega" << i;
  for (std::size_t pos = 0; pos < table.size(); ++pos) {
    const std::string l = component_label(table.index(pos));
    csv << ",re_rec_" << l << ",im_rec_" << l << ",re_ref_" << l << ",im_ref_" << l;
  }
  csv << ",rel_error,family_cond\n";
  for (const auto& p : report.points) {
    for (int i = 0; i <= n; ++i) csv << (i ? "," : "") << fmt(p.zeta(i));
    for (int i = 0; i < n; ++i) csv << "," << fmt(p.omega(i));
    for (std::size_t pos = 0; pos < table.size(); ++pos)
      csv << "," << fmt(p.recovered[pos].real()) << "," << fmt(p.recovered[pos].imag()) << ","
          << fmt(p.reference[pos].real()) << "," << fmt(p.reference[pos].imag());
    csv << "," << fmt(p.rel_error) << "," << fmt(p.family_condition) << "\n";
  }

  const bool pass = !report.points.empty() && report.aggregate_rel_error <= bound;
  json summary = {{"version", kConfigVersion},
                  {"rank", rank},
                  {"sign", report.sign.sign},
                  {"sign_errors", {{"plus", report.sign.error_plus}, {"minus", report.sign.error_minus}}},
                  {"aggregate_rel_error", report.aggregate_rel_error},
                  {"max_rel_error", bound},
                  {"points", report.points.size()},
                  {"failures", report.failures},
                  {"max_path_spread", report.max_path_spread},
                  {"max_family_condition", report.max_family_condition},
                  {"pass", pass}};
  if (rank >= 2)
    summary["psi_convention"] = {{"bracket", report.psi.convention.bracket}, {"data", report.psi.convention.data}};

  const std::string stem = "recon_rank" + std::to_string(rank);
  write_file(ctx.out_dir / (stem + ".csv"), csv.str());
  write_file(ctx.out_dir / (stem + ".json"), summary.dump(2) + "\n");
  log(ctx) << "reconstruct rank " << rank << ": sign " << (report.sign.sign > 0 ? "+1" : "-1")
           << ", aggregate relative error " << fmt(report.aggregate_rel_error) << " (bound " << fmt(bound) << "), "
           << report.points.size() << " points, " << report.failures.size() << " geometry failures\n";
  return pass ? kOk : kCheckFailed;
}

}  // namespace lightray::cli
