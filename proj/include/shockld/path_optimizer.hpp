// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include "shockld/bfgs.hpp"
#include "shockld/flux_solver.hpp"
#include "shockld/noise_model.hpp"
#include "shockld/rate_function.hpp"
#include "shockld/rng.hpp"

namespace shockld {

enum class ScenarioKind { Displacement, SpeedChange, WeakToStrong, StrongToWeak };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

/// A rare transition: start at the sampled initial profile, end at (or within
/// delta of) the sampled target profile at time T.
struct RareEventSpec {
    ScenarioKind kind = ScenarioKind::Displacement;
    SpaceTimeGrid grid;
    WaveSpec wave;         ///< dynamics and initial profile
    WaveSpec target_wave;  ///< terminal profile (same as wave for Displacement)
    double x0 = 0.0;       ///< displacement beyond the deterministic motion
    double delta = 0.0;    ///< ball radius in the sqrt(dx)-weighted l2 norm
    CellValues initial;
    CellValues target;
    BoundaryPolicy bc = FixedStates{0.0, 0.0};
};

/// Displacement by x0 relative to the Rankine-Hugoniot motion, with the
/// outermost cells pinned to u- and u+.
RareEventSpec make_displacement(const SpaceTimeGrid& grid, const WaveSpec& wave, double x0, double delta);

/// Profile-to-profile transition with `width` time-interpolated boundary
/// cells on each side.
RareEventSpec make_transition(ScenarioKind kind, const SpaceTimeGrid& grid, const WaveSpec& wave,
                              const WaveSpec& target_wave, double delta, std::size_t width = 2);

struct OptimalPath {
    PathMatrix path;
    double rate_value = 0.0;
    /// ||grad||_inf on the free variables (pinned), or the KKT stationarity
    /// residual ||grad I + lambda grad c||_inf (ball).
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    ForcingSequence forcing{};
    bool converged = false;
    bool line_search_failed = false;
    double multiplier = 0.0;         ///< ball constraint multiplier
    double terminal_distance2 = 0.0; ///< dx sum_m (q^N_m - target_m)^2
};

struct OptimizerOptions {
    MinimizerOptions minimizer{};
    double kkt_tol = 1e-5;
    double feasibility_tol = 1e-7;  ///< relative to delta^2
    std::size_t max_outer = 60;
};

/// dx sum_m (q_m - target_m)^2 over all M cells.
double terminal_distance2(std::span<const double> terminal, std::span<const double> target, double dx);

/// inf I over paths with Q^0 = initial, Q^N = target and pinned boundaries.
OptimalPath minimize_pinned(const RareEventSpec& spec, const NoiseModel& model, const PathMatrix& init,
                            const OptimizerOptions& options = {});

/// inf I subject to dx sum (q^N - target)^2 <= delta^2 (augmented Lagrangian).
OptimalPath minimize_ball(const RareEventSpec& spec, const NoiseModel& model, const PathMatrix& init,
                          const OptimizerOptions& options = {});

/// Profile translated by (n/N)(shock_speed T + x0) at level n (Displacement only).
PathMatrix linear_shift_path(const RareEventSpec& spec);
/// (1 - n/N) initial + (n/N) target at level n.
PathMatrix linear_interpolation_path(const RareEventSpec& spec);
/// Free cells drawn uniformly between u+ and u-; endpoints and boundaries as prescribed.
PathMatrix random_initial_path(const RareEventSpec& spec, Engine& rng);

/// Free-variable mask matching the scenario's pinning.
FreeMask scenario_free_mask(const RareEventSpec& spec, bool terminal_free);

/// Fraction of random nearby path pairs (p, q) around `center` that satisfy
/// I((p+q)/2) <= (I(p) + I(q))/2 + 1e-12. Perturbations are Gaussian on the
/// free variables with standard deviation rel_scale * max|center|.
/// With `frozen_drift` the drift is held at b(center), making I quadratic.
double midpoint_convexity_test(const PathMatrix& center, const NoiseModel& model, const FreeMask& mask,
                               std::size_t trials, Engine& rng, double rel_scale = 1e-2,
                               bool frozen_drift = false);

}  // namespace shockld
