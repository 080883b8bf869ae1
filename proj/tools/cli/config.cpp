#include "cli/config.hpp"

#include <fstream>
#include <sstream>

#include "lightray/errors.hpp"
#include "lightray/json_io.hpp"

namespace lightray::cli {

using nlohmann::json;

namespace {

// Typed access to one config object with field-level error messages.
class Section {
 public:
  Section(const json& doc, std::string where, std::initializer_list<const char*> allowed)
      : doc_(doc), where_(std::move(where)) {
    require_keys(doc_, allowed, where_);
  }

  bool has(const char* key) const { return doc_.contains(key) && !doc_.at(key).is_null(); }
  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }
  const json& raw(const char* key) const { return doc_.at(key); }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_number()) throw SchemaError(path(key), "expected a number");
    return doc_.at(key).get<double>();
  }
  double positive(const char* key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw SchemaError(path(key), "must be positive");
    return v;
  }
  long integer(const char* key, long fallback) const {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_number_integer()) throw SchemaError(path(key), "expected an integer");
    return doc_.at(key).get<long>();
  }
  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_boolean()) throw SchemaError(path(key), "expected true or false");
    return doc_.at(key).get<bool>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_string()) throw SchemaError(path(key), "expected a string");
    return doc_.at(key).get<std::string>();
  }
  std::vector<double> numbers(const char* key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = doc_.at(key);
    if (!v.is_array()) throw SchemaError(path(key), "expected an array of numbers");
    for (const auto& e : v) {
      if (!e.is_number()) throw SchemaError(path(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  Section child(const char* key, std::initializer_list<const char*> allowed) const {
    static const json empty = json::object();
    return Section(has(key) ? doc_.at(key) : empty, path(key), allowed);
  }

 private:
  const json& doc_;
  std::string where_;
};

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
  return out;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  const Section top(doc, "",
                    {"version", "seed", "phantom", "phantom_file", "generate", "quadrature", "noise",
                     "finite_difference", "forward", "slice", "recon", "verify", "tolerances"});
  RunConfig cfg;
  const long version = top.integer("version", kConfigVersion);
  if (version != kConfigVersion)
    throw SchemaError("version", "unsupported config version " + std::to_string(version));
  const long seed = top.integer("seed", 1);
  if (seed < 0) throw SchemaError("seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (top.has("phantom")) {
    phantom_from_json(top.raw("phantom"), "phantom");  // validate early
    cfg.phantom = top.raw("phantom");
  }
  cfg.phantom_file = top.string("phantom_file", "");
  if (top.has("generate")) {
    const Section g = top.child("generate", {"n", "m", "c", "terms", "sigma_min", "sigma_max", "center_radius",
                                             "tracefree"});
    GenerateSpec gen;
    auto& o = gen.options;
    o.n = static_cast<int>(g.integer("n", 3));
    o.m = static_cast<int>(g.integer("m", 1));
    o.c = g.positive("c", 1.0);
    o.terms = static_cast<int>(g.integer("terms", 2));
    o.sigma_min = g.positive("sigma_min", o.sigma_min);
    o.sigma_max = g.positive("sigma_max", o.sigma_max);
    o.center_radius = g.number("center_radius", o.center_radius);
    o.tracefree = g.boolean("tracefree", o.m >= 2);
    if (o.n < 1 || o.n > kMaxAxes - 1) throw SchemaError("generate.n", "must be in 1..8");
    if (o.m < 0 || o.m > 8) throw SchemaError("generate.m", "must be in 0..8");
    if (o.terms < 1) throw SchemaError("generate.terms", "must be >= 1");
    if (o.sigma_max < o.sigma_min) throw SchemaError("generate.sigma_max", "must be >= sigma_min");
    cfg.generate = gen;
  }

  const Section q = top.child("quadrature", {"rule", "nodes", "halfwidth"});
  try {
    cfg.quadrature.rule = parse_rule(q.string("rule", "gauss-legendre"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError("quadrature.rule", e.what());
  }
  cfg.quadrature.nodes = static_cast<int>(q.integer("nodes", cfg.quadrature.nodes));
  cfg.quadrature.halfwidth = q.positive("halfwidth", cfg.quadrature.halfwidth);
  try {
    cfg.quadrature.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError("quadrature", e.what());
  }

  const Section noise = top.child("noise", {"sigma"});
  cfg.noise_sigma = noise.number("sigma", 0.0);
  if (cfg.noise_sigma < 0.0) throw SchemaError("noise.sigma", "must be >= 0");

  const Section fd = top.child("finite_difference", {"h", "h_nested"});
  cfg.fd.h = fd.positive("h", cfg.fd.h);
  cfg.fd.h_nested = fd.positive("h_nested", cfg.fd.h_nested);

  const Section fw = top.child("forward", {"rays_file", "count", "ks", "base_radius"});
  cfg.forward.rays_file = fw.string("rays_file", "");
  cfg.forward.count = static_cast<int>(fw.integer("count", cfg.forward.count));
  if (cfg.forward.count < 1) throw SchemaError("forward.count", "must be >= 1");
  if (fw.has("ks")) {
    cfg.forward.ks.clear();
    for (double k : fw.numbers("ks")) {
      if (k < 0 || k != static_cast<int>(k) || k > 15) throw SchemaError("forward.ks", "entries must be integers in 0..15");
      cfg.forward.ks.push_back(static_cast<int>(k));
    }
    if (cfg.forward.ks.empty()) throw SchemaError("forward.ks", "must not be empty");
  }
  cfg.forward.base_radius = fw.positive("base_radius", cfg.forward.base_radius);

  const Section sl = top.child("slice", {"extent_sigmas", "nodes_per_axis", "count", "zeta_max", "omega"});
  cfg.slice.grid.extent_sigmas = sl.positive("extent_sigmas", cfg.slice.grid.extent_sigmas);
  cfg.slice.grid.nodes_per_axis = static_cast<int>(sl.integer("nodes_per_axis", cfg.slice.grid.nodes_per_axis));
  if (cfg.slice.grid.nodes_per_axis < 4) throw SchemaError("slice.nodes_per_axis", "must be >= 4");
  cfg.slice.count = static_cast<int>(sl.integer("count", cfg.slice.count));
  if (cfg.slice.count < 1) throw SchemaError("slice.count", "must be >= 1");
  cfg.slice.zeta_max = sl.positive("zeta_max", cfg.slice.zeta_max);
  if (sl.has("omega")) {
    Vec w = to_vec(sl.numbers("omega"));
    if (w.size() == 0 || w.norm() == 0.0) throw SchemaError("slice.omega", "must be a nonzero vector");
    cfg.slice.omega = w.normalized();
  }

  const Section rc = top.child("recon", {"omega0", "delta", "phi_fractions", "fd_eps", "zeta_count", "zeta_min",
                                         "zeta_max", "aperture_use", "max_rel_error", "allow_trace",
                                         "quadrature_nodes", "extent_sigmas", "nodes_per_axis"});
  ReconConfig& r = cfg.recon.config;
  if (rc.has("omega0")) {
    r.omega0 = to_vec(rc.numbers("omega0"));
    if (r.omega0.size() == 0 || r.omega0.norm() == 0.0) throw SchemaError("recon.omega0", "must be a nonzero vector");
    r.omega0.normalize();
  }
  r.delta = rc.positive("delta", r.delta);
  r.phi_fractions = rc.numbers("phi_fractions");
  r.fd_eps = rc.positive("fd_eps", r.fd_eps);
  r.zeta_count = static_cast<int>(rc.integer("zeta_count", r.zeta_count));
  r.zeta_min = rc.positive("zeta_min", r.zeta_min);
  r.zeta_max = rc.positive("zeta_max", r.zeta_max);
  r.aperture_use = rc.positive("aperture_use", r.aperture_use);
  r.compare_tracefree_part = rc.boolean("allow_trace", false);
  r.grid.extent_sigmas = rc.positive("extent_sigmas", r.grid.extent_sigmas);
  r.grid.nodes_per_axis = static_cast<int>(rc.integer("nodes_per_axis", r.grid.nodes_per_axis));
  r.seed = cfg.seed;
  r.fd = cfg.fd;
  if (rc.has("max_rel_error")) cfg.recon.max_rel_error = rc.positive("max_rel_error", 1.0);
  cfg.recon.quadrature_nodes = static_cast<int>(rc.integer("quadrature_nodes", cfg.recon.quadrature_nodes));
  if (cfg.recon.quadrature_nodes < 16) throw SchemaError("recon.quadrature_nodes", "must be >= 16");

  const Section vf = top.child("verify", {"samples", "rays", "inject_fault"});
  cfg.verify.samples = static_cast<int>(vf.integer("samples", cfg.verify.samples));
  cfg.verify.rays = static_cast<int>(vf.integer("rays", cfg.verify.rays));
  if (cfg.verify.samples < 1) throw SchemaError("verify.samples", "must be >= 1");
  if (cfg.verify.rays < 1) throw SchemaError("verify.rays", "must be >= 1");
  cfg.verify.inject_fault = vf.string("inject_fault", "");
  if (!cfg.verify.inject_fault.empty() && cfg.verify.inject_fault != "commutator")
    throw SchemaError("verify.inject_fault", "known faults: commutator");

  const Section tol = top.child("tolerances", {"algebra", "singular_value", "kernel", "descent", "quadrature", "phi1",
                                               "phi2", "geometry"});
  Tolerances& t = cfg.tolerances;
  t.algebra = tol.positive("algebra", t.algebra);
  t.singular_value = tol.positive("singular_value", t.singular_value);
  t.kernel = tol.positive("kernel", t.kernel);
  t.descent = tol.positive("descent", t.descent);
  t.quadrature = tol.positive("quadrature", t.quadrature);
  t.phi1 = tol.positive("phi1", t.phi1);
  t.phi2 = tol.positive("phi2", t.phi2);
  t.geometry = tol.positive("geometry", t.geometry);
  return cfg;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw SchemaError("--set", "expected KEY=VALUE, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw SchemaError("--set", "empty path component in '" + key + "'");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw SchemaError(key, "cannot descend into a non-object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw SchemaError(key, "cannot descend into a non-object");
  (*node)[parts.back()] = value;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw SchemaError(path, "not valid JSON");
  return doc;
}

}  // namespace lightray::cli
