#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lightray/phantom.hpp"
#include "lightray/quadrature.hpp"
#include "lightray/ray_transform.hpp"
#include "lightray/reconstruction.hpp"

namespace lightray::cli {

inline constexpr int kConfigVersion = 1;

// Random phantom requested by the config instead of an explicit spec.
struct GenerateSpec {
  RandomPhantomOptions options;
};

struct ForwardSettings {
  std::string rays_file;  // empty: sample `count` rays
  int count = 10;
  std::vector<int> ks{0, 1};
  double base_radius = 1.0;
};

struct SliceSettings {
  SliceGrid grid;
  int count = 20;
  double zeta_max = 2.0;
  std::optional<Vec> omega;  // fixed direction; random per point otherwise
};

struct ReconSettings {
  ReconConfig config = ReconConfig::defaults(3);
  std::optional<double> max_rel_error;  // per-rank default when unset
  int quadrature_nodes = 32;
};

struct VerifySettings {
  int samples = 50;  // random tensors per algebra case / zeta points
  int rays = 100;
  std::string inject_fault;  // "" or "commutator"
};

struct Tolerances {
  double algebra = 1e-12;
  double singular_value = 1e-8;
  double kernel = 1e-8;
  double descent = 1e-4;
  double quadrature = 1e-10;
  double phi1 = 1e-2;
  double phi2 = 2e-2;
  double geometry = 1e-10;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::optional<nlohmann::json> phantom;  // inline phantom spec
  std::string phantom_file;
  std::optional<GenerateSpec> generate;
  QuadratureSpec quadrature;
  double noise_sigma = 0.0;
  FiniteDifference fd;
  ForwardSettings forward;
  SliceSettings slice;
  ReconSettings recon;
  VerifySettings verify;
  Tolerances tolerances;
};

// Parses a config document; every object rejects unknown fields.
RunConfig parse_config(const nlohmann::json& doc);

// Applies "a.b.c=value" to a config document. The value is parsed as JSON
// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json load_json_file(const std::string& path);

}  // namespace lightray::cli
