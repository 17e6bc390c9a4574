// SPDX-License-Identifier: MIT
#include "shockld/path_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shockld {

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Displacement: return "displacement";
        case ScenarioKind::SpeedChange: return "speed-change";
        case ScenarioKind::WeakToStrong: return "weak-to-strong";
        case ScenarioKind::StrongToWeak: return "strong-to-weak";
    }
    return "unknown";
}

ScenarioKind scenario_from_string(const std::string& name) {
    for (auto k : {ScenarioKind::Displacement, ScenarioKind::SpeedChange, ScenarioKind::WeakToStrong,
                   ScenarioKind::StrongToWeak}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown scenario kind '" + name + "'");
}

RareEventSpec make_displacement(const SpaceTimeGrid& grid, const WaveSpec& wave, double x0, double delta) {
    grid.validate();
    wave.validate();
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
    RareEventSpec spec;
    spec.kind = ScenarioKind::Displacement;
    spec.grid = grid;
    spec.wave = wave;
    spec.target_wave = wave;
    spec.x0 = x0;
    spec.delta = delta;
    spec.initial = sample_profile(wave, grid, 0.0);
    spec.target = sample_profile(wave, grid, wave.shock_speed() * grid.T + x0);
    spec.bc = FixedStates{wave.u_minus, wave.u_plus};
    return spec;
}

RareEventSpec make_transition(ScenarioKind kind, const SpaceTimeGrid& grid, const WaveSpec& wave,
                              const WaveSpec& target_wave, double delta, std::size_t width) {
    grid.validate();
    wave.validate();
    target_wave.validate();
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
    if (width < 1 || 2 * width >= grid.M) throw std::invalid_argument("boundary width out of range");
    switch (kind) {
        case ScenarioKind::Displacement:
            throw std::invalid_argument("use make_displacement for displacement scenarios");
        case ScenarioKind::SpeedChange:
            if (std::abs(wave.shock_speed() - target_wave.shock_speed()) < 1e-12)
                throw std::invalid_argument("speed-change target must have a different shock speed");
            break;
        case ScenarioKind::WeakToStrong:
            if (!(target_wave.jump() > wave.jump()))
                throw std::invalid_argument("weak-to-strong target must have the larger jump");
            break;
        case ScenarioKind::StrongToWeak:
            if (!(target_wave.jump() < wave.jump()))
                throw std::invalid_argument("strong-to-weak target must have the smaller jump");
            break;
    }
    if (target_wave.D != wave.D || target_wave.gamma != wave.gamma)
        throw std::invalid_argument("target wave must share D and the frame speed");
    RareEventSpec spec;
    spec.kind = kind;
    spec.grid = grid;
    spec.wave = wave;
    spec.target_wave = target_wave;
    spec.delta = delta;
    spec.initial = sample_profile(wave, grid, 0.0);
    spec.target = sample_profile(target_wave, grid, 0.0);
    spec.bc = TimeInterpolated{spec.initial, spec.target, width};
    return spec;
}

double terminal_distance2(std::span<const double> terminal, std::span<const double> target, double dx) {
    double s = 0.0;
    for (std::size_t i = 0; i < terminal.size(); ++i) {
        const double e = terminal[i] - target[i];
        s += e * e;
    }
    return dx * s;
}

FreeMask scenario_free_mask(const RareEventSpec& spec, bool terminal_free) {
    return make_free_mask(spec.grid, pinned_width(spec.bc), terminal_free);
}

namespace {

void check_init(const RareEventSpec& spec, const PathMatrix& init) {
    if (init.grid().M != spec.grid.M || init.grid().N != spec.grid.N)
        throw std::invalid_argument("initial guess grid does not match the scenario");
}

// Pins Q^0, boundaries at levels 1..N-1, and either the full terminal target
// (pinned problem) or the terminal boundary cells (ball problem).
PathMatrix pinned_copy(const RareEventSpec& spec, const PathMatrix& init, bool terminal_free) {
    PathMatrix p(spec.grid, spec.wave);
    std::copy(init.values().begin(), init.values().end(), p.values().begin());
    p.set_slice(0, spec.initial);
    for (std::size_t n = 1; n < spec.grid.N; ++n) apply_boundary(spec.bc, p.slice(n), n, spec.grid.N);
    if (terminal_free) {
        apply_boundary(spec.bc, p.slice(spec.grid.N), spec.grid.N, spec.grid.N);
    } else {
        p.set_slice(spec.grid.N, spec.target);
    }
    return p;
}

void scatter(PathMatrix& p, const FreeMask& mask, std::span<const double> x) {
    auto v = p.values();
    for (std::size_t k = 0; k < mask.size(); ++k) v[mask.index[k]] = x[k];
}

std::vector<double> gather(const PathMatrix& p, const FreeMask& mask) {
    std::vector<double> x(mask.size());
    auto v = p.values();
    for (std::size_t k = 0; k < mask.size(); ++k) x[k] = v[mask.index[k]];
    return x;
}

}  // namespace

OptimalPath minimize_pinned(const RareEventSpec& spec, const NoiseModel& model, const PathMatrix& init,
                            const OptimizerOptions& options) {
    check_init(spec, init);
    PathMatrix work = pinned_copy(spec, init, false);
    const FreeMask mask = scenario_free_mask(spec, false);
    std::vector<double> full(work.values().size());

    const double I0 = rate(work, model);
    if (!std::isfinite(I0)) throw std::runtime_error("path_optimizer: rate is not finite at the initial guess");

    Objective fg = [&](std::span<const double> x, std::span<double> g) {
        scatter(work, mask, x);
        const double f = rate_and_full_gradient(work, model, full);
        for (std::size_t k = 0; k < mask.size(); ++k) g[k] = full[mask.index[k]];
        return f;
    };
    const MinimizerResult res = minimize_bfgs(fg, gather(work, mask), options.minimizer);

    scatter(work, mask, res.x);
    OptimalPath out{.path = work};
    out.rate_value = rate(work, model);
    out.gradient_norm = res.grad_inf;
    out.iterations = res.iterations;
    out.converged = res.status == MinimizerStatus::Converged;
    out.line_search_failed = res.status == MinimizerStatus::LineSearchFailed;
    out.forcing = forcing_from_path(work, model);
    out.terminal_distance2 = terminal_distance2(work.slice(spec.grid.N), spec.target, spec.grid.dx());
    return out;
}

OptimalPath minimize_ball(const RareEventSpec& spec, const NoiseModel& model, const PathMatrix& init,
                          const OptimizerOptions& options) {
    if (!(spec.delta > 0.0)) throw std::invalid_argument("minimize_ball requires delta > 0");
    check_init(spec, init);
    PathMatrix work = pinned_copy(spec, init, true);
    const FreeMask mask = scenario_free_mask(spec, true);
    const auto& grid = spec.grid;
    const std::size_t M = grid.M;
    const std::size_t terminal_offset = grid.N * M;
    const double dx = grid.dx();
    const double delta2 = spec.delta * spec.delta;
    std::vector<double> full(work.values().size());

    if (!std::isfinite(rate(work, model)))
        throw std::runtime_error("path_optimizer: rate is not finite at the initial guess");

    double lambda = 0.0;
    double mu = 10.0 / delta2;

    // Value of the constraint c(q) = dx sum (q^N - target)^2 - delta^2 and the
    // gradient of I + lambda c, both on the current work path.
    auto constraint = [&]() { return terminal_distance2(work.slice(grid.N), spec.target, dx) - delta2; };
    auto lagrangian_gradient = [&](double lam, std::span<double> g) {
        rate_and_full_gradient(work, model, full);
        for (std::size_t k = 0; k < mask.size(); ++k) {
            const std::size_t idx = mask.index[k];
            double gk = full[idx];
            if (idx >= terminal_offset) gk += lam * 2.0 * dx * (work.values()[idx] - spec.target[idx - terminal_offset]);
            g[k] = gk;
        }
    };

    std::vector<double> x = gather(work, mask);
    std::vector<double> g(mask.size());
    std::size_t iterations = 0;
    bool line_search_failed = false;
    bool converged = false;
    double kkt = 0.0;
    double c_prev = std::numeric_limits<double>::infinity();

    MinimizerOptions inner = options.minimizer;
    for (std::size_t outer = 0; outer < options.max_outer; ++outer) {
        Objective fg = [&](std::span<const double> xv, std::span<double> gv) {
            scatter(work, mask, xv);
            const double I = rate_and_full_gradient(work, model, full);
            const double c = constraint();
            const double shifted = std::max(0.0, lambda + mu * c);
            for (std::size_t k = 0; k < mask.size(); ++k) {
                const std::size_t idx = mask.index[k];
                double gk = full[idx];
                if (idx >= terminal_offset)
                    gk += shifted * 2.0 * dx * (work.values()[idx] - spec.target[idx - terminal_offset]);
                gv[k] = gk;
            }
            return I + (shifted * shifted - lambda * lambda) / (2.0 * mu);
        };
        inner.grad_tol = 0.1 * options.kkt_tol;
        const MinimizerResult res = minimize_bfgs(fg, x, inner);
        iterations += res.iterations;
        line_search_failed = res.status == MinimizerStatus::LineSearchFailed;
        x = res.x;
        scatter(work, mask, x);

        const double c = constraint();
        lambda = std::max(0.0, lambda + mu * c);
        lagrangian_gradient(lambda, g);
        kkt = 0.0;
        for (double v : g) kkt = std::max(kkt, std::abs(v));

        const double I = rate(work, model);
        const bool feasible = c <= options.feasibility_tol * delta2;
        const bool complementary = lambda == 0.0 || std::abs(c) <= options.feasibility_tol * delta2;
        if (feasible && complementary && kkt <= options.kkt_tol * std::max(1.0, I)) {
            converged = true;
            break;
        }
        if (std::abs(c) > 0.25 * std::abs(c_prev)) mu *= 10.0;
        c_prev = c;
    }

    OptimalPath out{.path = work};
    out.rate_value = rate(work, model);
    out.gradient_norm = kkt;
    out.iterations = iterations;
    out.converged = converged;
    out.line_search_failed = line_search_failed;
    out.multiplier = lambda;
    out.forcing = forcing_from_path(work, model);
    out.terminal_distance2 = terminal_distance2(work.slice(grid.N), spec.target, dx);
    return out;
}

PathMatrix linear_shift_path(const RareEventSpec& spec) {
    if (spec.kind != ScenarioKind::Displacement)
        throw std::invalid_argument("linear_shift_path requires a displacement scenario");
    const auto& grid = spec.grid;
    PathMatrix p(grid, spec.wave);
    const double total = spec.wave.shock_speed() * grid.T + spec.x0;
    for (std::size_t n = 0; n <= grid.N; ++n) {
        const double w = static_cast<double>(n) / static_cast<double>(grid.N);
        if (n == 0) {
            p.set_slice(0, spec.initial);
        } else if (n == grid.N) {
            p.set_slice(n, spec.target);
        } else {
            p.set_slice(n, sample_profile(spec.wave, grid, w * total));
            apply_boundary(spec.bc, p.slice(n), n, grid.N);
        }
    }
    return p;
}

PathMatrix linear_interpolation_path(const RareEventSpec& spec) {
    const auto& grid = spec.grid;
    PathMatrix p(grid, spec.wave);
    for (std::size_t n = 0; n <= grid.N; ++n) {
        const double w = static_cast<double>(n) / static_cast<double>(grid.N);
        auto q = p.slice(n);
        for (std::size_t i = 0; i < grid.M; ++i) q[i] = (1.0 - w) * spec.initial[i] + w * spec.target[i];
        if (n > 0 && n < grid.N) apply_boundary(spec.bc, q, n, grid.N);
    }
    return p;
}

PathMatrix random_initial_path(const RareEventSpec& spec, Engine& rng) {
    PathMatrix p = linear_interpolation_path(spec);
    const double lo = std::min({spec.wave.u_plus, spec.target_wave.u_plus});
    const double hi = std::max({spec.wave.u_minus, spec.target_wave.u_minus});
    std::uniform_real_distribution<double> uniform(lo, hi);
    const FreeMask mask = scenario_free_mask(spec, false);
    for (std::size_t idx : mask.index) p.values()[idx] = uniform(rng);
    return p;
}

double midpoint_convexity_test(const PathMatrix& center, const NoiseModel& model, const FreeMask& mask,
                               std::size_t trials, Engine& rng, double rel_scale, bool frozen_drift) {
    if (trials == 0) return 1.0;
    const auto& grid = center.grid();
    double scale = 0.0;
    for (std::size_t idx : mask.index) scale = std::max(scale, std::abs(center.values()[idx]));
    scale *= rel_scale;

    std::vector<std::vector<double>> frozen;
    if (frozen_drift) {
        frozen.resize(grid.N);
        for (std::size_t n = 0; n < grid.N; ++n) frozen[n] = drift(center.slice(n), center.spec(), grid.dx());
    }
    auto eval = [&](const PathMatrix& p) {
        return frozen_drift ? rate_frozen_drift(p, model, frozen) : rate(p, model);
    };

    std::normal_distribution<double> normal;
    PathMatrix p = center;
    PathMatrix q = center;
    PathMatrix mid = center;
    std::size_t pass = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t idx : mask.index) {
            const double a = center.values()[idx] + scale * normal(rng);
            const double b = center.values()[idx] + scale * normal(rng);
            p.values()[idx] = a;
            q.values()[idx] = b;
            mid.values()[idx] = 0.5 * (a + b);
        }
        if (eval(mid) <= 0.5 * (eval(p) + eval(q)) + 1e-12) ++pass;
    }
    return static_cast<double>(pass) / static_cast<double>(trials);
}

}  // namespace shockld
