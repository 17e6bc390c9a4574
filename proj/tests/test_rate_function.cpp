// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shockld/rate_function.hpp"
#include "support.hpp"

using namespace shockld;

namespace {

// Noiseless trajectory from the sampled profile on `grid`.
PathMatrix deterministic_path(const SpaceTimeGrid& grid, const WaveSpec& w, double shift) {
    PathMatrix p(grid, w);
    auto q = sample_profile(w, grid, shift);
    p.set_slice(0, q);
    const FixedStates bc{w.u_minus, w.u_plus};
    for (std::size_t n = 0; n < grid.N; ++n) {
        q = euler_step(q, w, grid, bc, {}, {}, 0.0, n);
        p.set_slice(n + 1, q);
    }
    return p;
}

// N = 1, four cells: Q^1 = Q^0 + dt b(Q^0) + (0.1, 0) on the interior.
PathMatrix single_step_path() {
    const auto g = SpaceTimeGrid::uniform(0.0, 2.0, 0.5, 0.05, 0.05);
    const WaveSpec w = testing::baseline_wave();
    PathMatrix p(g, w);
    const std::vector<double> q0{2.0, 1.8, 1.3, 1.0};
    auto q1 = euler_step(q0, w, g, FixedStates{2.0, 1.0}, {}, {}, 0.0, 0);
    q1[1] += 0.1;
    p.set_slice(0, q0);
    p.set_slice(1, q1);
    return p;
}

}  // namespace

TEST_CASE("residual of a deterministic path vanishes") {
    const auto g = testing::baseline_grid();
    const auto p = deterministic_path(g, testing::baseline_wave(), 0.4);
    for (std::size_t n = 0; n < g.N; ++n)
        for (double r : residual(p, n)) CHECK(std::abs(r) < 1e-12);
    const auto model = NoiseModel::build(testing::baseline_noise(), g);
    CHECK(rate(p, model) < 1e-20);
    CHECK(discrete_lower_bound(p, model) < 1e-20);
    const auto mask = make_free_mask(g, 1, true);
    for (double v : rate_gradient(p, model, mask)) CHECK(std::abs(v) < 1e-9);
    for (const auto& h : forcing_from_path(p, model).h)
        for (double v : h) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("single-step residual, rate and lower bound") {
    const auto p = single_step_path();
    const auto r = residual(p, 0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(2.0));
    CHECK(std::abs(r[1]) < 1e-12);
    const auto model = NoiseModel::build(testing::identity_noise(), p.grid());
    CHECK(rate(p, model) == doctest::Approx(0.05));
    CHECK(discrete_lower_bound(p, model) == doctest::Approx(0.025));
}

TEST_CASE("residual is affine in the next slice") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    auto a = deterministic_path(g, w, 0.0);
    auto b = a;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    for (std::size_t m = 1; m + 1 < g.M; ++m) {
        a.at(4, m) += 0.01 * z(rng);
        b.at(4, m) += 0.01 * z(rng);
    }
    PathMatrix avg = a;
    for (std::size_t m = 0; m < g.M; ++m) avg.at(4, m) = 0.5 * (a.at(4, m) + b.at(4, m));
    const auto ra = residual(a, 3), rb = residual(b, 3), rm = residual(avg, 3);
    for (std::size_t i = 0; i < rm.size(); ++i) CHECK(rm[i] == doctest::Approx(0.5 * (ra[i] + rb[i])).epsilon(1e-10));
}

TEST_CASE("rate scales inversely with noise variance") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    std::mt19937_64 rng(2);
    const auto spec = make_displacement(g, w, 5.0, 0.0);
    const auto p = testing::random_smooth_path(spec, rng, 0.2);
    const auto m1 = NoiseModel::build({NoiseKind::Exponential, 1.0, 5.0}, g);
    const auto m2 = NoiseModel::build({NoiseKind::Exponential, 2.0, 5.0}, g);
    CHECK(rate(p, m2) == doctest::Approx(rate(p, m1) / 4.0).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    std::mt19937_64 rng(11);
    for (const auto& ns : {testing::identity_noise(), testing::baseline_noise()}) {
        const auto model = NoiseModel::build(ns, g);
        for (int trial = 0; trial < 3; ++trial) {
            const auto spec = make_displacement(g, w, 3.0, 0.0);
            const auto p = testing::random_smooth_path(spec, rng, 0.3);
            const auto check = testing::check_gradient(p, model, scenario_free_mask(spec, true));
            CHECK(check.max_rel_error <= 1e-5);
            CHECK(check.compared > check.skipped);
        }
    }
}

TEST_CASE("full gradient agrees with masked gradient") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    std::mt19937_64 rng(4);
    const auto spec = make_displacement(g, w, 2.0, 0.0);
    const auto p = testing::random_smooth_path(spec, rng, 0.2);
    const auto model = NoiseModel::build(testing::baseline_noise(), g);
    std::vector<double> full((g.N + 1) * g.M);
    const double I = rate_and_full_gradient(p, model, full);
    CHECK(I == doctest::Approx(rate(p, model)).epsilon(1e-14));
    const auto mask = make_free_mask(g, 1, true);
    const auto part = rate_gradient(p, model, mask);
    for (std::size_t k = 0; k < mask.size(); ++k) CHECK(part[k] == full[mask.index[k]]);
}

TEST_CASE("gradient is local to the scheme stencil") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    const auto spec = make_displacement(g, w, 1.0, 0.0);
    PathMatrix p = linear_interpolation_path(spec);
    const auto model = NoiseModel::build(testing::identity_noise(), g);
    std::vector<double> before((g.N + 1) * g.M), after((g.N + 1) * g.M);
    rate_and_full_gradient(p, model, before);
    const std::size_t m0 = 30;
    p.at(g.N, m0) += 0.05;
    rate_and_full_gradient(p, model, after);
    for (std::size_t n = 0; n <= g.N; ++n) {
        for (std::size_t m = 0; m < g.M; ++m) {
            const bool inside = n + 1 >= g.N && m + 2 >= m0 && m <= m0 + 2;
            if (!inside) CHECK(after[n * g.M + m] == before[n * g.M + m]);
        }
    }
}

TEST_CASE("free mask layout") {
    const auto g = SpaceTimeGrid::with_counts(0, 1, 6, 1, 3);
    const auto pinned = make_free_mask(g, 1, false);
    CHECK(pinned.size() == 2 * 4);
    CHECK(pinned.index.front() == 1 * 6 + 1);
    const auto ball = make_free_mask(g, 2, true);
    CHECK(ball.size() == 3 * 2);
    CHECK(ball.index.back() == 3 * 6 + 3);
}

TEST_CASE("forcing replays the path and reproduces the rate") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    std::mt19937_64 rng(8);
    const auto spec = make_displacement(g, w, 4.0, 0.0);
    const auto p = testing::random_smooth_path(spec, rng, 0.3);
    const auto model = NoiseModel::build(testing::baseline_noise(), g);
    const auto f = forcing_from_path(p, model);
    REQUIRE(f.h.size() == g.N);
    double sum = 0.0;
    for (const auto& h : f.h)
        for (double v : h) sum += v * v;
    CHECK(g.dx() / (2.0 * g.dt()) * sum == doctest::Approx(rate(p, model)).epsilon(1e-12));

    std::vector<double> q(p.slice(0).begin(), p.slice(0).end());
    std::vector<double> tilt(g.interior());
    for (std::size_t n = 0; n < g.N; ++n) {
        model.apply_factor(f.h[n], tilt);
        q = euler_step(q, w, g, spec.bc, tilt, {}, 0.0, n);
        for (std::size_t m = 1; m + 1 < g.M; ++m) CHECK(std::abs(q[m] - p.at(n + 1, m)) < 1e-12);
    }
}

TEST_CASE("lower bound never exceeds the rate") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    std::mt19937_64 rng(9);
    const auto model = NoiseModel::build(testing::baseline_noise(), g);
    for (int k = 0; k < 20; ++k) {
        const auto spec = make_displacement(g, w, 1.0 + k, 0.0);
        const auto p = testing::random_smooth_path(spec, rng, 0.5);
        CHECK(discrete_lower_bound(p, model) <= rate(p, model));
        CHECK(rate(p, model) >= 0.0);
    }
}

TEST_CASE("frozen drift rate equals the rate at the freezing point") {
    const auto g = testing::baseline_grid();
    const auto w = testing::baseline_wave();
    std::mt19937_64 rng(10);
    const auto spec = make_displacement(g, w, 2.0, 0.0);
    const auto p = testing::random_smooth_path(spec, rng, 0.3);
    const auto model = NoiseModel::build(testing::identity_noise(), g);
    std::vector<std::vector<double>> frozen;
    for (std::size_t n = 0; n < g.N; ++n) frozen.push_back(drift(p.slice(n), w, g.dx()));
    CHECK(rate_frozen_drift(p, model, frozen) == doctest::Approx(rate(p, model)).epsilon(1e-12));
}
