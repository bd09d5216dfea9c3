// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Subcommands: optimize, surface, conditioning,
// power-breakdown, simulate-nlos.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mmwee/channel.hpp"
#include "mmwee/sysparams.hpp"

namespace mmwee {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

/// Settings shared by every subcommand. Precedence: defaults, then the
/// --config file, then explicit flags.
struct RunConfig {
  SystemProfile profile = default_profile();
  int k = 10;
  double lambda = 1.0;
  double fe_scale = 1.0;
  std::uint64_t seed = 1;
  int trials = 100;
  ClusterConfig cluster;
};

/// Applies a config object onto `cfg`. Run keys (k, lambda, fe_scale, seed,
/// trials, n_cl, n_r, angle_spread_deg, d_cl_min, d_cl_max, los_probability)
/// are consumed here, everything else must be a profile field.
void apply_config(RunConfig& cfg, const nlohmann::json& j);

/// Resolved configuration as written into output metadata.
nlohmann::json to_json(const RunConfig& cfg);

/// Runs the CLI; returns the process exit status. Diagnostics go to `err`,
/// results to `out` unless --out is given.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmwee
