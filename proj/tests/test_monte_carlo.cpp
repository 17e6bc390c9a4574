// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shockld/monte_carlo.hpp"
#include "support.hpp"

using namespace shockld;

namespace {

struct Baseline {
    SpaceTimeGrid grid = testing::baseline_grid();
    WaveSpec wave = testing::baseline_wave();
    NoiseModel model = NoiseModel::build(testing::baseline_noise(), grid);
};

}  // namespace

TEST_CASE("event indicator") {
    const std::vector<double> target{1.0, 2.0, 3.0, 4.0};
    const double dx = 1.0, delta = 0.75;
    CHECK(event_indicator(target, target, delta, dx));
    // Every cell offset by delta / sqrt(dx M) lands exactly on the sphere.
    std::vector<double> edge = target;
    for (auto& v : edge) v += delta / std::sqrt(dx * 4.0);
    CHECK(event_indicator(edge, target, delta, dx));
    CHECK_FALSE(event_indicator(edge, target, 0.0, dx));
    CHECK_THROWS_AS(event_indicator(std::vector<double>{1.0}, target, delta, dx), std::invalid_argument);
}

TEST_CASE("summary statistics") {
    const std::vector<double> p{0.0, 1.0, 0.0, 1.0};
    const auto r = summarize(p, 2);
    CHECK(r.estimate == 0.5);
    CHECK(r.std == 0.5);
    CHECK(r.ci_low == doctest::Approx(0.5 - 2.6 * 0.5 / 2.0));
    CHECK(r.ci_high == doctest::Approx(0.5 + 2.6 * 0.5 / 2.0));
    CHECK(r.relative_error == doctest::Approx(1.0));
    CHECK_FALSE(r.flagged_saturated);

    std::vector<double> one(10000, 0.0);
    one[17] = 1.0;
    const auto s = summarize(one, 1);
    CHECK(s.relative_error == doctest::Approx(std::sqrt(9999.0)));
    CHECK(s.flagged_saturated);
    const auto z = summarize(std::vector<double>(100, 0.0), 0);
    CHECK(std::isinf(z.relative_error));
    CHECK(z.flagged_saturated);
}

TEST_CASE("pairwise sum is exact on small integers") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    CHECK(pairwise_sum(v) == 499500.0);
}

TEST_CASE("likelihood ratio without tilt is one") {
    const Baseline t;
    std::vector<std::vector<double>> noise(t.grid.N, std::vector<double>(t.grid.interior(), 0.3));
    ForcingSequence zero{std::vector<std::vector<double>>(t.grid.N, std::vector<double>(t.grid.interior(), 0.0))};
    CHECK(likelihood_ratio(noise, zero, t.model, 0.1, t.grid.dt(), t.grid.dx()) == 1.0);
}

TEST_CASE("likelihood ratio equals the gaussian density ratio") {
    // One step, two interior cells with independent noise: dW ~ N(0, s^2) under P
    // and N(h/eps, s^2) under Q with s^2 = dt/dx, evaluated at x = w + h/eps.
    const auto g = SpaceTimeGrid::with_counts(0.0, 2.0, 4, 0.05, 1);
    const auto model = NoiseModel::build(testing::identity_noise(), g);
    const double dt = g.dt(), dx = g.dx(), eps = 0.2;
    const double h[2] = {0.03, -0.01}, w[2] = {0.17, 0.4};
    const double s2 = dt / dx;
    auto density = [&](double v, double mean) {
        return std::exp(-(v - mean) * (v - mean) / (2 * s2)) / std::sqrt(2 * std::numbers::pi * s2);
    };
    double expected = 1.0;
    for (int i = 0; i < 2; ++i) {
        const double x = w[i] + h[i] / eps;
        expected *= density(x, 0.0) / density(x, h[i] / eps);
    }
    const ForcingSequence f{{{h[0], h[1]}}};
    CHECK(likelihood_ratio({{w[0], w[1]}}, f, model, eps, dt, dx) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("basic monte carlo edge cases") {
    const Baseline t;
    auto spec = make_displacement(t.grid, t.wave, 0.0, 10.0);
    const auto sure = run_basic_mc(spec, t.model, 0.01, 200, 1);
    CHECK(sure.estimate == 1.0);
    CHECK(sure.hits == 200);

    // Noiseless: decided by the deterministic trajectory.
    const auto far = make_displacement(t.grid, t.wave, 5.0, 0.5);
    const auto none = run_basic_mc(far, t.model, 0.0, 50, 1);
    CHECK(none.estimate == 0.0);
    CHECK(none.flagged_saturated);
    const auto near = make_displacement(t.grid, t.wave, 0.0, 0.5);
    CHECK(run_basic_mc(near, t.model, 0.0, 50, 1).estimate == 1.0);
    CHECK_THROWS_AS(run_basic_mc(near, t.model, 0.1, 0, 1), std::invalid_argument);
}

TEST_CASE("zero tilt reproduces basic monte carlo") {
    const Baseline t;
    const auto spec = make_displacement(t.grid, t.wave, 1.0, std::sqrt(0.5));
    ForcingSequence zero{std::vector<std::vector<double>>(t.grid.N, std::vector<double>(t.grid.interior(), 0.0))};
    const auto mc = run_basic_mc(spec, t.model, 0.15, 500, 77);
    const auto is = run_importance_sampling(spec, t.model, 0.15, 500, zero, 77);
    CHECK(is.hits == mc.hits);
    CHECK(is.estimate == mc.estimate);
    CHECK(is.std == mc.std);
}

TEST_CASE("results do not depend on the thread count") {
    const Baseline t;
    const auto spec = make_displacement(t.grid, t.wave, 1.0, std::sqrt(0.5));
    const auto a = run_basic_mc(spec, t.model, 0.2, 400, 5, McOptions{1});
    const auto b = run_basic_mc(spec, t.model, 0.2, 400, 5, McOptions{3});
    CHECK(a.estimate == b.estimate);
    CHECK(a.std == b.std);
    CHECK(a.hits == b.hits);
}

TEST_CASE("tilted trajectories follow the optimal path") {
    const Baseline t;
    const auto spec = make_displacement(t.grid, t.wave, 5.0, std::sqrt(0.5));
    const auto opt = minimize_ball(spec, t.model, linear_interpolation_path(spec));
    const auto tilt = tilt_from_forcing(opt.forcing, t.model);
    Engine rng = SeedTree(1).stream(0);
    const auto tr = simulate_trajectory(spec, t.model, 1e-9, &opt.forcing, &tilt, rng);
    for (std::size_t m = 0; m < t.grid.M; ++m) CHECK(tr.terminal[m] == doctest::Approx(opt.path.at(t.grid.N, m)).epsilon(1e-6));
    // log weight is close to -I / eps^2 for vanishing noise.
    CHECK(tr.log_weight == doctest::Approx(-opt.rate_value / 1e-18).epsilon(1e-3));
}

TEST_CASE("importance sampling weights are unbiased and agree with basic monte carlo") {
    const Baseline t;
    const auto spec = make_displacement(t.grid, t.wave, 5.0, std::sqrt(0.5));
    const auto opt = minimize_ball(spec, t.model, linear_interpolation_path(spec));
    const double eps = 0.15;
    const std::size_t K = 4000;

    // Mean weight under the tilted measure, ignoring the event.
    const auto tilt = tilt_from_forcing(opt.forcing, t.model);
    const SeedTree tree(123);
    std::vector<double> w(K);
    for (std::size_t k = 0; k < K; ++k) {
        Engine rng = tree.stream(k);
        w[k] = std::exp(simulate_trajectory(spec, t.model, eps, &opt.forcing, &tilt, rng).log_weight);
        CHECK(w[k] > 0.0);
    }
    const auto s = summarize(w, K);
    CHECK(std::abs(s.estimate - 1.0) <= 3.0 * s.std / std::sqrt(static_cast<double>(K)));

    const auto mc = run_basic_mc(spec, t.model, 0.2, K, 9);
    const auto is = run_importance_sampling(spec, t.model, 0.2, K, opt.forcing, 10);
    CHECK(is.ci_low <= mc.ci_high);
    CHECK(mc.ci_low <= is.ci_high);
    CHECK(is.estimate >= 0.0);
    CHECK(is.ci_low <= is.estimate);
    CHECK(is.estimate <= is.ci_high);
}

TEST_CASE("epsilon sweep seeds and shape") {
    const Baseline t;
    const auto spec = make_displacement(t.grid, t.wave, 1.0, std::sqrt(0.5));
    const std::vector<EstimatorChoice> est{{"mc", std::nullopt}};
    const auto one = epsilon_sweep(spec, t.model, {0.2}, 300, est, 4);
    REQUIRE(one.size() == 1);
    const auto direct = run_basic_mc(spec, t.model, 0.2, 300, sweep_seed(4, 0, 0));
    CHECK(one[0].estimate == direct.estimate);
    CHECK(one[0].seed == sweep_seed(4, 0, 0));
    CHECK(one[0].estimator == "mc");

    const auto two = epsilon_sweep(spec, t.model, {0.1, 0.2}, 100, est, 4);
    CHECK(two.size() == 2);
    CHECK(two[0].seed != two[1].seed);
    CHECK_THROWS_AS(epsilon_sweep(spec, t.model, {}, 100, est, 4), std::invalid_argument);
}
