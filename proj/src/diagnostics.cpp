// SPDX-License-Identifier: MIT
#include "shockld/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace shockld {

double wave_center(std::span<const double> state, std::span<const double> reference, const WaveSpec& spec,
                   double dx) {
    if (state.size() != reference.size()) throw std::invalid_argument("wave_center: length mismatch");
    const double jump = spec.jump();
    if (jump == 0.0) throw std::invalid_argument("wave_center: u_minus equals u_plus");
    double acc = 0.0;
    for (std::size_t m = 0; m < state.size(); ++m) acc += state[m] - reference[m];
    return dx * acc / jump;
}

CenterSeries center_series(const PathMatrix& path, std::span<const double> reference) {
    CenterSeries out;
    out.reference = path.spec();
    const auto& grid = path.grid();
    for (std::size_t n = 0; n < path.levels(); ++n) {
        out.times.push_back(grid.time(n));
        out.centers.push_back(wave_center(path.slice(n), reference, path.spec(), grid.dx()));
    }
    return out;
}

CenterLaw analytic_center_law(double eps, double t, const NoiseModel& model, double dx, const WaveSpec& spec) {
    const double jump = spec.jump();
    CenterLaw law;
    law.mean = spec.shock_speed() * t;
    law.variance = eps * eps * t * total_covariance_mass(model, dx) / (dx * jump * jump);
    return law;
}

double log_normal_tail(double z) {
    if (z < 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
    // Asymptotic series of the Mills ratio.
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

namespace {

double standardized(double x0, double T, double eps, const NoiseModel& model, double dx, const WaveSpec& spec) {
    if (!(T > 0.0)) throw std::invalid_argument("exit probability: T must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("exit probability: eps must be positive");
    const CenterLaw law = analytic_center_law(eps, T, model, dx, spec);
    return x0 / std::sqrt(law.variance);
}

}  // namespace

double analytic_exit_probability(double x0, double T, double eps, const NoiseModel& model, double dx,
                                 const WaveSpec& spec) {
    const double z = standardized(x0, T, eps, model, dx, spec);
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double log_analytic_exit_probability(double x0, double T, double eps, const NoiseModel& model, double dx,
                                     const WaveSpec& spec) {
    return log_normal_tail(standardized(x0, T, eps, model, dx, spec));
}

double exit_exponent(double x0, double T, const NoiseModel& model, double dx, const WaveSpec& spec) {
    const double jump = spec.jump();
    return -x0 * x0 * jump * jump * dx / (2.0 * T * total_covariance_mass(model, dx));
}

ScalingFit fit_scaling(std::span<const double> xs, std::span<const double> ys, FitForm form) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_scaling: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("fit_scaling: at least 3 points required");
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        double f = x;
        if (form == FitForm::Quadratic) f = x * x;
        if (form == FitForm::Reciprocal) {
            if (x == 0.0) throw std::invalid_argument("fit_scaling: reciprocal form needs nonzero x");
            f = 1.0 / x;
        }
        A(i, 0) = f;
        A(i, 1) = 1.0;
        y(i) = ys[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < 2) throw std::invalid_argument("fit_scaling: degenerate design matrix");
    const Eigen::VectorXd coef = qr.solve(y);
    ScalingFit fit;
    fit.a = coef(0);
    fit.b = coef(1);
    const double mean = y.mean();
    const double ss_tot = (y.array() - mean).square().sum();
    const double ss_res = (y - A * coef).squaredNorm();
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

std::vector<double> sample_terminal_centers(const RareEventSpec& spec, const NoiseModel& model, double eps,
                                            std::size_t K, std::uint64_t seed, std::size_t threads) {
    const SeedTree tree(seed);
    std::vector<double> centers(K);
    parallel_for(K, threads, [&](std::size_t k) {
        Engine rng = tree.stream(k);
        const Trajectory tr = simulate_trajectory(spec, model, eps, nullptr, nullptr, rng);
        centers[k] = wave_center(tr.terminal, spec.initial, spec.wave, spec.grid.dx());
    });
    return centers;
}

double domain_margin(const SpaceTimeGrid& grid, const WaveSpec& wave, double x0) {
    const double speed = wave.shock_speed();
    const double start = 0.0;
    const double end = speed * grid.T + x0;
    const double lo = std::min(start, end);
    const double hi = std::max(start, end);
    return std::min(lo - grid.L, grid.R - hi) / profile_width(wave);
}

}  // namespace shockld
