#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "cli/config.hpp"

namespace lightray::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsageError = 2 };

struct Context {
  RunConfig config;
  std::filesystem::path out_dir = ".";
  std::ostream* log = nullptr;
};

// Phantom named by the config: inline spec, file, random generator, or the
// command's default (unit scalar Gaussian at the origin, n = 3).
PhantomField resolve_phantom(const RunConfig& cfg);

int cmd_phantom(const Context& ctx, const std::string& spec_file);
int cmd_forward(const Context& ctx, const std::string& rays_file);
int cmd_verify(const Context& ctx, const std::string& suite);
int cmd_slice(const Context& ctx);
int cmd_reconstruct(const Context& ctx, int rank);

// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lightray::cli
