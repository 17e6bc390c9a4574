// SPDX-License-Identifier: MIT
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "shockld/config.hpp"
#include "shockld/harness.hpp"
#include "shockld/path_io.hpp"

namespace {

std::size_t default_threads() {
    if (const char* env = std::getenv("SHOCKLD_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid SHOCKLD_THREADS=" << env << '\n';
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Most probable paths and rare-event estimators for stochastic viscous shocks"};
    app.set_version_flag("--version", shockld::code_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t threads = 0;

    const std::map<std::string, std::string> help{
        {"optimize", "most probable path for the configured scenario"},
        {"sweep-x0", "optimal rate over run.x0_list with scaling fits"},
        {"sweep-T", "optimal rate over run.T_list with scaling fits"},
        {"mc", "basic Monte Carlo over run.eps"},
        {"is", "importance sampling over run.eps"},
        {"sweep-eps", "all run.estimators over run.eps"},
        {"convexity", "midpoint convexity test around the optimum"},
        {"center-diagnostics", "center law and exit probability against direct simulation"},
    };
    for (const auto& name : shockld::subcommands()) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (default: run.output)");
        sub->add_option("--seed", seed, "64-bit root seed (default: run.seed)");
        sub->add_option("--threads", threads, "worker threads (default: SHOCKLD_THREADS or all cores)")
            ->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);

    const CLI::App* chosen = app.get_subcommands().front();
    shockld::HarnessOptions options;
    options.subcommand = chosen->get_name();
    if (chosen->count("--out")) options.out_dir = out_dir;
    if (chosen->count("--seed")) options.seed = seed;
    options.threads = chosen->count("--threads") ? threads : default_threads();

    try {
        const shockld::RunConfig cfg = shockld::load_config(config_path);
        shockld::run_subcommand(options, cfg, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
