// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shockld/grid_waves.hpp"
#include "shockld/monte_carlo.hpp"
#include "shockld/noise_model.hpp"
#include "shockld/rate_function.hpp"

namespace shockld {

/// dx sum_m (state_m - reference_m) / (u- - u+); a profile shifted right by
/// x0 has center x0.
double wave_center(std::span<const double> state, std::span<const double> reference, const WaveSpec& spec,
                   double dx);

struct CenterSeries {
    std::vector<double> times;
    std::vector<double> centers;
    WaveSpec reference;
};

/// Center of every time level of `path` relative to `reference`.
CenterSeries center_series(const PathMatrix& path, std::span<const double> reference);

struct CenterLaw {
    double mean = 0.0;
    double variance = 0.0;
};

/// Gaussian law of the center at time t under noise of amplitude eps.
///
/// For increments with covariance (dt/dx) C the center variance grows like
/// eps^2 t dx sum C / (u- - u+)^2, which equals
/// eps^2 t total_covariance_mass / (dx (u- - u+)^2).
CenterLaw analytic_center_law(double eps, double t, const NoiseModel& model, double dx, const WaveSpec& spec);

/// P(Z - mean >= x0) for the center law at time T.
double analytic_exit_probability(double x0, double T, double eps, const NoiseModel& model, double dx,
                                 const WaveSpec& spec);
/// Natural log of analytic_exit_probability, accurate far into the tail.
double log_analytic_exit_probability(double x0, double T, double eps, const NoiseModel& model, double dx,
                                     const WaveSpec& spec);

/// log P(Z >= z) for a standard normal Z.
double log_normal_tail(double z);

/// -x0^2 (u- - u+)^2 dx / (2 T total_covariance_mass), the small-noise limit
/// of eps^2 log analytic_exit_probability.
double exit_exponent(double x0, double T, const NoiseModel& model, double dx, const WaveSpec& spec);

enum class FitForm { Quadratic, Linear, Reciprocal };

/// Least-squares fit y = a f(x) + b with f(x) = x^2, x or 1/x.
struct ScalingFit {
    double a = 0.0;
    double b = 0.0;
    double r2 = 0.0;
};
ScalingFit fit_scaling(std::span<const double> xs, std::span<const double> ys, FitForm form);

/// Centers (relative to spec.initial) of K noisy terminal states, using the
/// basic Monte Carlo sample streams.
std::vector<double> sample_terminal_centers(const RareEventSpec& spec, const NoiseModel& model, double eps,
                                            std::size_t K, std::uint64_t seed, std::size_t threads = 1);

/// Smallest distance, in profile widths, between the shock position and a
/// domain end over the deterministic motion shifted by x0.
double domain_margin(const SpaceTimeGrid& grid, const WaveSpec& wave, double x0);

}  // namespace shockld
