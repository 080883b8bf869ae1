#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "lightray/errors.hpp"
#include "lightray/parallel.hpp"

namespace lightray::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"lightray: momentum light ray transform toolbox"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".";
  int threads = 0;
  std::optional<long> seed;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: LIGHTRAY_THREADS or all cores)");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--set", overrides, "override a config field, e.g. --set recon.delta=0.3")->take_all();

  std::string spec_file, rays_file, suite;
  int rank = 1;
  auto* phantom = app.add_subcommand("phantom", "write a normalised phantom spec");
  phantom->add_option("spec", spec_file, "phantom spec to normalise");
  auto* forward = app.add_subcommand("forward", "export ray data as CSV");
  forward->add_option("--rays", rays_file, "CSV of rays t,x1..xn,omega1..omegan");
  auto* verify = app.add_subcommand("verify", "run an identity verification suite");
  verify->add_option("suite", suite, "algebra | transform | slice | recon-geometry")->required();
  auto* slice = app.add_subcommand("slice", "dump slice values Phi1, Phi2");
  auto* reconstruct = app.add_subcommand("reconstruct", "recover the Fourier transform of a field");
  reconstruct->add_option("--rank", rank, "tensor rank 1, 2 or 3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kOk : kUsageError;
  }

  try {
    nlohmann::json doc = config_path.empty() ? nlohmann::json::object() : load_json_file(config_path);
    if (seed) doc["seed"] = *seed;
    for (const auto& o : overrides) apply_override(doc, o);
    Context ctx{parse_config(doc), out_dir, &out};
    set_thread_count(threads);

    if (*phantom) return cmd_phantom(ctx, spec_file);
    if (*forward) return cmd_forward(ctx, rays_file);
    if (*verify) return cmd_verify(ctx, suite);
    if (*slice) return cmd_slice(ctx);
    if (*reconstruct) return cmd_reconstruct(ctx, rank);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace lightray::cli
