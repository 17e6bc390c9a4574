// SPDX-License-Identifier: MIT
#include "shockld/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include "shockld/diagnostics.hpp"
#include "shockld/path_io.hpp"

namespace shockld {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"optimize", "sweep-x0", "sweep-T",   "mc",
                                                "is",       "sweep-eps", "convexity", "center-diagnostics"};
    return names;
}

namespace {

// Seed-tree tags for the sub-computations of one run.
enum Tag : std::uint64_t { kEstimators = 1, kInitialGuess = 2, kConvexity = 3, kCenters = 4 };

struct Context {
    const HarnessOptions& options;
    const RunConfig& cfg;
    std::uint64_t seed;
    fs::path out;
    std::ostream& log;
    std::ostream& warn;
    std::vector<std::string> files;

    std::string file(const std::string& name) {
        files.push_back(name);
        return (out / name).string();
    }
};

std::string fmt(double v) { return format_double(v); }

void check_margin(const RareEventSpec& spec) {
    if (spec.kind != ScenarioKind::Displacement) return;
    const double margin = domain_margin(spec.grid, spec.wave, spec.x0);
    if (margin < kMinDomainMargin) {
        throw std::invalid_argument("harness: shock comes within " + fmt(margin) +
                                    " profile widths of the domain boundary (minimum " + fmt(kMinDomainMargin) +
                                    "); enlarge [L, R]");
    }
}

void warn_stability(const RunConfig& cfg, const SpaceTimeGrid& grid, std::ostream& warn) {
    const double lo = std::min(cfg.wave.u_plus, cfg.scenario.target ? cfg.scenario.target->u_plus : cfg.wave.u_plus);
    const double hi =
        std::max(cfg.wave.u_minus, cfg.scenario.target ? cfg.scenario.target->u_minus : cfg.wave.u_minus);
    const double nu = stability_number(cfg.wave, grid, lo, hi);
    if (nu > 1.0) {
        warn << "warning: explicit scheme stability number " << fmt(nu)
             << " exceeds 1; noisy simulations may be unstable\n";
    }
}

const std::vector<std::string> kPathColumns{"scenario",      "x0",         "T",           "delta",
                                            "I_star",        "gradient_norm", "iterations", "converged",
                                            "lower_bound",   "I_v",        "I_w",         "multiplier",
                                            "terminal_distance2"};

std::vector<std::string> path_row(const RareEventSpec& spec, const OptimalPath& opt, const NoiseModel& model) {
    const double nan = std::nan("");
    const double i_v = spec.kind == ScenarioKind::Displacement ? rate(linear_shift_path(spec), model) : nan;
    const double i_w = rate(linear_interpolation_path(spec), model);
    return {to_string(spec.kind),
            fmt(spec.x0),
            fmt(spec.grid.T),
            fmt(spec.delta),
            fmt(opt.rate_value),
            fmt(opt.gradient_norm),
            std::to_string(opt.iterations),
            opt.converged ? "1" : "0",
            fmt(discrete_lower_bound(opt.path, model)),
            fmt(i_v),
            fmt(i_w),
            fmt(opt.multiplier),
            fmt(opt.terminal_distance2)};
}

void report_path(Context& ctx, const OptimalPath& opt) {
    ctx.log << "I* = " << fmt(opt.rate_value) << "  gradient_norm = " << fmt(opt.gradient_norm)
            << "  iterations = " << opt.iterations << (opt.converged ? "" : "  (not converged)") << '\n';
    if (!opt.converged)
        ctx.warn << "warning: optimizer stopped before reaching tolerance"
                 << (opt.line_search_failed ? " (line search failed)" : "") << '\n';
}

void cmd_optimize(Context& ctx, const NoiseModel& model) {
    const RareEventSpec spec = build_scenario(ctx.cfg);
    check_margin(spec);
    const OptimalPath opt = optimize_scenario(ctx.cfg, spec, model);
    report_path(ctx, opt);
    write_path_csv(ctx.file("path.csv"), opt.path);
    Table t{kPathColumns, {}};
    t.add(path_row(spec, opt, model));
    write_table_csv(ctx.file("summary.csv"), t);
}

void cmd_sweep(Context& ctx, const NoiseModel& model, bool over_x0) {
    const auto& list = over_x0 ? ctx.cfg.run.x0_list : ctx.cfg.run.T_list;
    if (list.empty()) throw std::invalid_argument(over_x0 ? "harness: run.x0_list is empty" : "harness: run.T_list is empty");
    std::vector<RareEventSpec> specs;
    for (double v : list) {
        const SpaceTimeGrid grid = over_x0 ? ctx.cfg.grid : grid_with_duration(ctx.cfg, v);
        specs.push_back(build_scenario(ctx.cfg, grid, over_x0 ? v : ctx.cfg.scenario.x0));
        check_margin(specs.back());
    }
    std::vector<std::optional<OptimalPath>> results(specs.size());
    parallel_for(specs.size(), ctx.options.threads, [&](std::size_t i) {
        // Noise models depend on the grid only through M, which is shared.
        results[i] = optimize_scenario(ctx.cfg, specs[i], model);
    });
    Table t{kPathColumns, {}};
    t.columns.push_back("inverse_I_star");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const OptimalPath& opt = *results[i];
        ctx.log << (over_x0 ? "x0 = " : "T = ") << fmt(list[i]) << ": ";
        report_path(ctx, opt);
        auto row = path_row(specs[i], opt, model);
        row.push_back(fmt(1.0 / opt.rate_value));
        t.add(std::move(row));
        xs.push_back(list[i]);
        ys.push_back(over_x0 ? opt.rate_value : 1.0 / opt.rate_value);
    }
    write_table_csv(ctx.file(over_x0 ? "sweep_x0.csv" : "sweep_T.csv"), t);
    if (xs.size() >= 3) {
        Table fits{{"form", "a", "b", "r2"}, {}};
        auto add_fit = [&](const char* name, FitForm form) {
            try {
                const ScalingFit f = fit_scaling(xs, ys, form);
                fits.add({name, fmt(f.a), fmt(f.b), fmt(f.r2)});
                ctx.log << name << " fit: a = " << fmt(f.a) << "  b = " << fmt(f.b) << "  R2 = " << fmt(f.r2) << '\n';
            } catch (const std::invalid_argument&) {
                // Degenerate for this data (e.g. reciprocal with x = 0); omitted.
            }
        };
        if (over_x0) {
            add_fit("quadratic", FitForm::Quadratic);
            add_fit("linear", FitForm::Linear);
        } else {
            add_fit("linear", FitForm::Linear);
        }
        write_table_csv(ctx.file(over_x0 ? "fits_x0.csv" : "fits_T.csv"), fits);
    }
}

std::vector<double> require_eps(const RunConfig& cfg) {
    if (cfg.run.eps.empty()) throw std::invalid_argument("harness: run.eps is required for this subcommand");
    return cfg.run.eps;
}

void cmd_estimators(Context& ctx, const NoiseModel& model, std::vector<std::string> names) {
    const RareEventSpec spec = build_scenario(ctx.cfg);
    check_margin(spec);
    const auto eps = require_eps(ctx.cfg);
    std::vector<EstimatorChoice> choices;
    for (const auto& name : names) {
        EstimatorChoice c{name, std::nullopt};
        if (name != "mc") c.forcing = estimator_forcing(name, ctx.cfg, spec, model);
        choices.push_back(std::move(c));
    }
    const auto reports = epsilon_sweep(spec, model, eps, ctx.cfg.run.K, choices,
                                       SeedTree(ctx.seed).child(kEstimators).root(), McOptions{ctx.options.threads});
    for (const auto& r : reports) {
        ctx.log << r.estimator << "  eps = " << fmt(r.epsilon) << "  estimate = " << fmt(r.estimate)
                << "  rel_error = " << fmt(r.relative_error) << (r.flagged_saturated ? "  (saturated)" : "") << '\n';
    }
    write_reports_csv(ctx.file("report.csv"), reports);
}

void cmd_convexity(Context& ctx, const NoiseModel& model) {
    const RareEventSpec spec = build_scenario(ctx.cfg);
    check_margin(spec);
    const OptimalPath opt = optimize_scenario(ctx.cfg, spec, model);
    report_path(ctx, opt);
    const FreeMask mask = scenario_free_mask(spec, spec.delta > 0.0);
    Engine rng = SeedTree(ctx.seed).child(kConvexity).stream(0);
    const double fraction = midpoint_convexity_test(opt.path, model, mask, ctx.cfg.run.trials, rng);
    Engine rng_frozen = SeedTree(ctx.seed).child(kConvexity).stream(1);
    const double frozen = midpoint_convexity_test(opt.path, model, mask, ctx.cfg.run.trials, rng_frozen, 1e-2, true);
    ctx.log << "convex fraction = " << fmt(fraction) << "  frozen-drift fraction = " << fmt(frozen) << '\n';
    Table t{{"trials", "I_star", "fraction", "frozen_drift_fraction"}, {}};
    t.add({std::to_string(ctx.cfg.run.trials), fmt(opt.rate_value), fmt(fraction), fmt(frozen)});
    write_table_csv(ctx.file("convexity.csv"), t);
}

void cmd_center(Context& ctx, const NoiseModel& model) {
    if (ctx.cfg.scenario.kind != ScenarioKind::Displacement)
        throw std::invalid_argument("harness: center-diagnostics requires the displacement scenario");
    const RareEventSpec spec = build_scenario(ctx.cfg);
    check_margin(spec);
    const auto eps = require_eps(ctx.cfg);
    const double dx = spec.grid.dx();
    const double T = spec.grid.T;
    const std::size_t K = ctx.cfg.run.K;
    const double x0 = spec.x0;

    Table t{{"eps", "K", "mean", "variance", "analytic_mean", "analytic_variance", "x0", "exit_estimate",
             "exit_ci_low", "exit_ci_high", "exit_analytic"},
            {}};
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const std::uint64_t s = SeedTree(ctx.seed).child(kCenters).child(i).root();
        const auto centers = sample_terminal_centers(spec, model, eps[i], K, s, ctx.options.threads);
        const CenterLaw law = analytic_center_law(eps[i], T, model, dx, spec.wave);
        const double mean = pairwise_sum(centers) / static_cast<double>(K);
        std::vector<double> dev(K);
        std::vector<double> exits(K);
        std::size_t hits = 0;
        for (std::size_t k = 0; k < K; ++k) {
            dev[k] = (centers[k] - mean) * (centers[k] - mean);
            exits[k] = centers[k] - law.mean >= x0 ? 1.0 : 0.0;
            hits += exits[k] > 0.0 ? 1 : 0;
        }
        const double var = pairwise_sum(dev) / static_cast<double>(K);
        const EstimatorReport exit = summarize(exits, hits);
        const double analytic = analytic_exit_probability(x0, T, eps[i], model, dx, spec.wave);
        ctx.log << "eps = " << fmt(eps[i]) << "  center variance = " << fmt(var)
                << "  analytic = " << fmt(law.variance) << "  exit = " << fmt(exit.estimate)
                << "  analytic exit = " << fmt(analytic) << '\n';
        t.add({fmt(eps[i]), std::to_string(K), fmt(mean), fmt(var), fmt(law.mean), fmt(law.variance), fmt(x0),
               fmt(exit.estimate), fmt(exit.ci_low), fmt(exit.ci_high), fmt(analytic)});
    }
    write_table_csv(ctx.file("center.csv"), t);
}

}  // namespace

OptimalPath optimize_scenario(const RunConfig& cfg, const RareEventSpec& spec, const NoiseModel& model) {
    PathMatrix init = linear_interpolation_path(spec);
    if (cfg.run.initial_guess == InitialGuess::Random) {
        Engine rng = SeedTree(cfg.run.seed).child(kInitialGuess).stream(0);
        init = random_initial_path(spec, rng);
    }
    if (spec.delta > 0.0) return minimize_ball(spec, model, init, cfg.optimizer);
    return minimize_pinned(spec, model, init, cfg.optimizer);
}

ForcingSequence estimator_forcing(const std::string& name, const RunConfig& cfg, const RareEventSpec& spec,
                                  const NoiseModel& model) {
    if (name == "is-0") {
        RareEventSpec pinned = spec;
        pinned.delta = 0.0;
        return optimize_scenario(cfg, pinned, model).forcing;
    }
    if (name == "is-delta") {
        if (!(spec.delta > 0.0)) throw std::invalid_argument("harness: is-delta requires scenario.delta > 0");
        return optimize_scenario(cfg, spec, model).forcing;
    }
    throw std::invalid_argument("harness: unknown estimator " + name);
}

void run_subcommand(const HarnessOptions& options, const RunConfig& cfg, std::ostream& log, std::ostream& warn) {
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), options.subcommand) == names.end())
        throw std::invalid_argument("harness: unknown subcommand " + options.subcommand);

    RunConfig effective = cfg;
    effective.run.seed = options.seed.value_or(cfg.run.seed);
    Context run_ctx{options, effective, effective.run.seed, fs::path(options.out_dir.value_or(cfg.run.output)),
                    log,     warn,      {}};
    fs::create_directories(run_ctx.out);
    warn_stability(effective, effective.grid, warn);

    const NoiseModel model = NoiseModel::build(effective.noise, effective.grid);
    const std::string& sub = options.subcommand;
    if (sub == "optimize") {
        cmd_optimize(run_ctx, model);
    } else if (sub == "sweep-x0") {
        cmd_sweep(run_ctx, model, true);
    } else if (sub == "sweep-T") {
        cmd_sweep(run_ctx, model, false);
    } else if (sub == "mc") {
        cmd_estimators(run_ctx, model, {"mc"});
    } else if (sub == "is") {
        cmd_estimators(run_ctx, model, {effective.scenario.delta > 0.0 ? "is-delta" : "is-0"});
    } else if (sub == "sweep-eps") {
        cmd_estimators(run_ctx, model, effective.run.estimators);
    } else if (sub == "convexity") {
        cmd_convexity(run_ctx, model);
    } else {
        cmd_center(run_ctx, model);
    }

    nlohmann::json extra;
    extra["seed"] = run_ctx.seed;
    extra["files"] = run_ctx.files;
    write_sidecar((run_ctx.out / "run.json").string(), sub, effective.source, extra);
}

}  // namespace shockld
