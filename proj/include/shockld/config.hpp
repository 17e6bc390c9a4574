// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shockld/grid_waves.hpp"
#include "shockld/noise_model.hpp"
#include "shockld/path_optimizer.hpp"

namespace shockld {

struct GridConfig {
    double L = 0.0;
    double R = 0.0;
    double dx = 0.0;
    double T = 0.0;
    double dt = 0.0;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Displacement;
    double x0 = 0.0;
    double delta = 0.0;
    std::size_t boundary_width = 2;
    std::optional<WaveSpec> target;  ///< terminal wave for the transition scenarios
};

enum class InitialGuess { Linear, Random };

struct RunSettings {
    std::vector<double> eps;
    std::size_t K = 10000;
    std::uint64_t seed = 0;
    std::string output = "out";
    std::vector<std::string> estimators{"mc", "is-delta"};
    std::vector<double> x0_list;
    std::vector<double> T_list;
    std::size_t trials = 10000;
    InitialGuess initial_guess = InitialGuess::Linear;
};

struct RunConfig {
    GridConfig grid_block;
    SpaceTimeGrid grid;
    WaveSpec wave;
    NoiseSpec noise;
    ScenarioConfig scenario;
    RunSettings run;
    OptimizerOptions optimizer;
    nlohmann::json source;  ///< the document as given, for the run sidecar
};

/// Parses and validates a run configuration. Errors are std::invalid_argument
/// with a message naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Grid with the same L, R, dx, dt and a different horizon T.
SpaceTimeGrid grid_with_duration(const RunConfig& cfg, double T);

/// Scenario described by the config on `grid`, with displacement x0.
RareEventSpec build_scenario(const RunConfig& cfg, const SpaceTimeGrid& grid, double x0);
RareEventSpec build_scenario(const RunConfig& cfg);

}  // namespace shockld
