// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shockld/noise_model.hpp"
#include "shockld/path_optimizer.hpp"
#include "shockld/rate_function.hpp"
#include "shockld/rng.hpp"

namespace shockld {

/// Summary statistics of K independent samples p^(k).
///
/// std is the per-sample standard deviation (1/K normalization), the
/// confidence interval is mean -/+ 2.6 std / sqrt(K) and relative_error is
/// std / mean, which reaches sqrt(K) when a single sample carries the
/// estimate. A report is flagged saturated when relative_error >= 0.9 sqrt(K)
/// or when no sample hit the event.
struct EstimatorReport {
    std::string estimator;
    double epsilon = 0.0;
    double estimate = 0.0;
    double std = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double relative_error = 0.0;
    std::size_t K = 0;
    std::size_t hits = 0;
    std::uint64_t seed = 0;
    bool flagged_saturated = false;
};

EstimatorReport summarize(std::span<const double> samples, std::size_t hits);

/// Pairwise (cascade) summation; the result depends only on the values and
/// their order.
double pairwise_sum(std::span<const double> v);

/// dx sum_m (terminal_m - target_m)^2 <= delta^2.
bool event_indicator(std::span<const double> terminal, std::span<const double> target, double delta, double dx);

/// Simulates one trajectory from spec.initial with optional tilt Phi hbar^n.
/// Returns the terminal state; `log_weight` receives log dP/dQ (0 without tilt).
/// `tilt` holds Phi hbar^n per step (precomputed), `forcing` the hbar^n.
struct Trajectory {
    StateVector terminal;
    double log_weight = 0.0;
};
Trajectory simulate_trajectory(const RareEventSpec& spec, const NoiseModel& model, double eps,
                               const ForcingSequence* forcing, const std::vector<std::vector<double>>* tilt,
                               Engine& rng);

/// Phi hbar^n for every step.
std::vector<std::vector<double>> tilt_from_forcing(const ForcingSequence& forcing, const NoiseModel& model);

/// exp(-(dx/(2 dt)) sum_n [ ||Phi^{-1} dW^n + hbar^n/eps||^2 - ||Phi^{-1} dW^n||^2 ]),
/// the density ratio of N(0, (dt/dx) C) to N(Phi hbar^n/eps, (dt/dx) C) at the
/// shifted increments.
double likelihood_ratio(const std::vector<std::vector<double>>& noise_path, const ForcingSequence& forcing,
                        const NoiseModel& model, double eps, double dt, double dx);
double log_likelihood_ratio(const std::vector<std::vector<double>>& noise_path, const ForcingSequence& forcing,
                            const NoiseModel& model, double eps, double dt, double dx);

struct McOptions {
    std::size_t threads = 1;
};

/// Runs `body(k)` for k in [0, K) across `threads` workers.
void parallel_for(std::size_t K, std::size_t threads, const std::function<void(std::size_t)>& body);

EstimatorReport run_basic_mc(const RareEventSpec& spec, const NoiseModel& model, double eps, std::size_t K,
                             std::uint64_t seed, const McOptions& options = {});

EstimatorReport run_importance_sampling(const RareEventSpec& spec, const NoiseModel& model, double eps,
                                        std::size_t K, const ForcingSequence& forcing, std::uint64_t seed,
                                        const McOptions& options = {});

/// An estimator in a sweep: basic Monte Carlo when `forcing` is empty,
/// importance sampling tilted by it otherwise.
struct EstimatorChoice {
    std::string name;
    std::optional<ForcingSequence> forcing;
};

/// Every estimator at every eps, each with its own seed derived from
/// (root seed, eps index, estimator index).
std::vector<EstimatorReport> epsilon_sweep(const RareEventSpec& spec, const NoiseModel& model,
                                           const std::vector<double>& eps_list, std::size_t K,
                                           const std::vector<EstimatorChoice>& estimators, std::uint64_t seed,
                                           const McOptions& options = {});

/// Seed used by epsilon_sweep for one (eps, estimator) cell.
std::uint64_t sweep_seed(std::uint64_t root, std::size_t eps_index, std::size_t estimator_index);

}  // namespace shockld
