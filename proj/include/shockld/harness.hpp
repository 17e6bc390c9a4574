// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shockld/config.hpp"
#include "shockld/monte_carlo.hpp"
#include "shockld/path_optimizer.hpp"

namespace shockld {

const std::vector<std::string>& subcommands();

struct HarnessOptions {
    std::string subcommand;
    std::optional<std::string> out_dir;  ///< overrides run.output
    std::optional<std::uint64_t> seed;   ///< overrides run.seed
    std::size_t threads = 1;
};

/// Required margin between the shock and the domain ends, in profile widths.
inline constexpr double kMinDomainMargin = 5.0;

/// Optimal path for `spec`: pinned when delta = 0, ball-constrained otherwise.
/// The initial guess follows the config (linear interpolation or a seeded
/// random path).
OptimalPath optimize_scenario(const RunConfig& cfg, const RareEventSpec& spec, const NoiseModel& model);

/// Forcing for an importance-sampling estimator name ("is-0" or "is-delta").
ForcingSequence estimator_forcing(const std::string& name, const RunConfig& cfg, const RareEventSpec& spec,
                                  const NoiseModel& model);

/// Runs one subcommand, writing its tables into the output directory.
/// Progress goes to `log`, warnings to `warn`. Throws on any error.
void run_subcommand(const HarnessOptions& options, const RunConfig& cfg, std::ostream& log, std::ostream& warn);

}  // namespace shockld
