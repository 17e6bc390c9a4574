// SPDX-License-Identifier: MIT
#include "shockld/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace shockld {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

EstimatorReport summarize(std::span<const double> samples, std::size_t hits) {
    EstimatorReport r;
    const std::size_t K = samples.size();
    if (K == 0) throw std::invalid_argument("summarize: no samples");
    const double k = static_cast<double>(K);
    r.K = K;
    r.hits = hits;
    r.estimate = pairwise_sum(samples) / k;
    std::vector<double> dev(K);
    for (std::size_t i = 0; i < K; ++i) dev[i] = (samples[i] - r.estimate) * (samples[i] - r.estimate);
    r.std = std::sqrt(pairwise_sum(dev) / k);
    const double half_width = 2.6 * r.std / std::sqrt(k);
    r.ci_low = r.estimate - half_width;
    r.ci_high = r.estimate + half_width;
    r.relative_error = r.estimate > 0.0 ? r.std / r.estimate : std::numeric_limits<double>::infinity();
    r.flagged_saturated = hits == 0 || r.relative_error >= 0.9 * std::sqrt(k);
    return r;
}

bool event_indicator(std::span<const double> terminal, std::span<const double> target, double delta, double dx) {
    if (terminal.size() != target.size()) throw std::invalid_argument("event_indicator: length mismatch");
    return terminal_distance2(terminal, target, dx) <= delta * delta;
}

std::vector<std::vector<double>> tilt_from_forcing(const ForcingSequence& forcing, const NoiseModel& model) {
    std::vector<std::vector<double>> tilt(forcing.h.size(), std::vector<double>(model.dim()));
    for (std::size_t n = 0; n < forcing.h.size(); ++n) model.apply_factor(forcing.h[n], tilt[n]);
    return tilt;
}

namespace {

// -(dx/(2 dt)) [ ||w + h/eps||^2 - ||w||^2 ] for one step, w = Phi^{-1} dW.
double log_ratio_step(std::span<const double> whitened, std::span<const double> h, double eps, double dt, double dx) {
    double acc = 0.0;
    for (std::size_t i = 0; i < whitened.size(); ++i) {
        const double shifted = whitened[i] + h[i] / eps;
        acc += shifted * shifted - whitened[i] * whitened[i];
    }
    return -dx / (2.0 * dt) * acc;
}

}  // namespace

double log_likelihood_ratio(const std::vector<std::vector<double>>& noise_path, const ForcingSequence& forcing,
                            const NoiseModel& model, double eps, double dt, double dx) {
    if (noise_path.size() != forcing.h.size()) throw std::invalid_argument("likelihood_ratio: length mismatch");
    std::vector<double> w(model.dim());
    double log_w = 0.0;
    for (std::size_t n = 0; n < noise_path.size(); ++n) {
        model.whiten_into(noise_path[n], w);
        log_w += log_ratio_step(w, forcing.h[n], eps, dt, dx);
    }
    return log_w;
}

double likelihood_ratio(const std::vector<std::vector<double>>& noise_path, const ForcingSequence& forcing,
                        const NoiseModel& model, double eps, double dt, double dx) {
    return std::exp(log_likelihood_ratio(noise_path, forcing, model, eps, dt, dx));
}

Trajectory simulate_trajectory(const RareEventSpec& spec, const NoiseModel& model, double eps,
                               const ForcingSequence* forcing, const std::vector<std::vector<double>>* tilt,
                               Engine& rng) {
    const auto& grid = spec.grid;
    const double dt = grid.dt();
    const double dx = grid.dx();
    const double scale = std::sqrt(dt / dx);
    const std::size_t d = grid.interior();

    Trajectory tr;
    tr.terminal = spec.initial;
    std::vector<double> z(d);
    std::vector<double> whitened(d);
    std::vector<double> noise(d);
    std::vector<double> scratch(d);
    std::normal_distribution<double> normal;
    for (std::size_t n = 0; n < grid.N; ++n) {
        for (double& v : z) v = normal(rng);
        model.apply_factor(z, noise);
        for (std::size_t i = 0; i < d; ++i) {
            noise[i] *= scale;
            whitened[i] = scale * z[i];
        }
        std::span<const double> f;
        if (tilt != nullptr) {
            f = (*tilt)[n];
            tr.log_weight += log_ratio_step(whitened, forcing->h[n], eps, dt, dx);
        }
        euler_step_inplace(tr.terminal, spec.wave, grid, spec.bc, f, noise, eps, n, scratch);
    }
    return tr;
}

void parallel_for(std::size_t K, std::size_t threads, const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, K));
    if (threads == 1) {
        for (std::size_t k = 0; k < K; ++k) body(k);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (K + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(K, lo + chunk);
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t k = lo; k < hi; ++k) body(k);
        });
    }
    for (auto& th : pool) th.join();
}

namespace {

EstimatorReport run_estimator(const RareEventSpec& spec, const NoiseModel& model, double eps, std::size_t K,
                              const ForcingSequence* forcing, std::uint64_t seed, const McOptions& options) {
    if (K < 1) throw std::invalid_argument("monte_carlo: K must be at least 1");
    if (!(eps >= 0.0)) throw std::invalid_argument("monte_carlo: eps must be non-negative");
    if (forcing != nullptr) {
        if (forcing->h.size() != spec.grid.N) throw std::invalid_argument("monte_carlo: forcing length must equal N");
        if (!(eps > 0.0)) throw std::invalid_argument("importance sampling requires eps > 0");
    }
    std::vector<std::vector<double>> tilt;
    if (forcing != nullptr) tilt = tilt_from_forcing(*forcing, model);

    const SeedTree tree(seed);
    std::vector<double> p(K, 0.0);
    std::vector<unsigned char> hit(K, 0);
    parallel_for(K, options.threads, [&](std::size_t k) {
        Engine rng = tree.stream(k);
        const Trajectory tr =
            simulate_trajectory(spec, model, eps, forcing, forcing != nullptr ? &tilt : nullptr, rng);
        if (event_indicator(tr.terminal, spec.target, spec.delta, spec.grid.dx())) {
            hit[k] = 1;
            p[k] = std::exp(tr.log_weight);
        }
    });
    std::size_t hits = 0;
    for (unsigned char h : hit) hits += h;
    EstimatorReport r = summarize(p, hits);
    r.epsilon = eps;
    r.seed = seed;
    return r;
}

}  // namespace

EstimatorReport run_basic_mc(const RareEventSpec& spec, const NoiseModel& model, double eps, std::size_t K,
                             std::uint64_t seed, const McOptions& options) {
    EstimatorReport r = run_estimator(spec, model, eps, K, nullptr, seed, options);
    r.estimator = "mc";
    return r;
}

EstimatorReport run_importance_sampling(const RareEventSpec& spec, const NoiseModel& model, double eps,
                                        std::size_t K, const ForcingSequence& forcing, std::uint64_t seed,
                                        const McOptions& options) {
    EstimatorReport r = run_estimator(spec, model, eps, K, &forcing, seed, options);
    r.estimator = "is";
    return r;
}

std::uint64_t sweep_seed(std::uint64_t root, std::size_t eps_index, std::size_t estimator_index) {
    return SeedTree(root).child(eps_index).child(estimator_index).root();
}

std::vector<EstimatorReport> epsilon_sweep(const RareEventSpec& spec, const NoiseModel& model,
                                           const std::vector<double>& eps_list, std::size_t K,
                                           const std::vector<EstimatorChoice>& estimators, std::uint64_t seed,
                                           const McOptions& options) {
    if (eps_list.empty()) throw std::invalid_argument("epsilon_sweep: empty eps list");
    std::vector<EstimatorReport> out;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        for (std::size_t j = 0; j < estimators.size(); ++j) {
            const std::uint64_t s = sweep_seed(seed, i, j);
            const auto& est = estimators[j];
            EstimatorReport r = est.forcing ? run_importance_sampling(spec, model, eps_list[i], K, *est.forcing, s, options)
                                            : run_basic_mc(spec, model, eps_list[i], K, s, options);
            r.estimator = est.name;
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace shockld
