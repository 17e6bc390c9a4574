// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "shockld/noise_model.hpp"
#include "shockld/rng.hpp"
#include "support.hpp"

using namespace shockld;

TEST_CASE("identity model is exactly the identity") {
    const auto g = testing::baseline_grid();
    const auto model = NoiseModel::build(testing::identity_noise(), g);
    CHECK(model.dim() == g.interior());
    CHECK(model.covariance() == Eigen::MatrixXd::Identity(68, 68));
    CHECK(model.factor() == Eigen::MatrixXd::Identity(68, 68));
    const std::vector<double> r{1.0, -2.0, 3.5};
    const auto small = NoiseModel::build(testing::identity_noise(), SpaceTimeGrid::with_counts(0, 1, 5, 1, 1));
    CHECK(whiten(small, r) == r);
}

TEST_CASE("two interior cells factor by hand") {
    // Four cells of width 0.5: interior centers are 0.5 apart.
    const auto g = SpaceTimeGrid::with_counts(0.0, 2.0, 4, 1.0, 1);
    const auto model = NoiseModel::build({NoiseKind::Exponential, 1.0, 5.0}, g);
    const double rho = std::exp(-0.1);
    const auto& C = model.covariance();
    CHECK(C(0, 0) == doctest::Approx(1.0));
    CHECK(C(0, 1) == doctest::Approx(rho));
    const auto& phi = model.factor();
    CHECK(phi(0, 0) == doctest::Approx(1.0));
    CHECK(phi(0, 1) == 0.0);
    CHECK(phi(1, 0) == doctest::Approx(rho));
    CHECK(phi(1, 1) == doctest::Approx(std::sqrt(1.0 - rho * rho)));

    const auto w = whiten(model, std::vector<double>{1.0, rho});
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(std::abs(w[1]) < 1e-14);
}

TEST_CASE("factor reproduces the covariance on the baseline grid") {
    const auto g = testing::baseline_grid();
    const auto model = NoiseModel::build(testing::baseline_noise(), g);
    const auto& C = model.covariance();
    const auto& phi = model.factor();
    CHECK((phi * phi.transpose() - C).norm() <= 1e-10 * C.norm());
    CHECK(model.jitter() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK((C - C.transpose()).norm() == 0.0);
}

TEST_CASE("doubling sigma scales covariance by 4 and factor by 2") {
    const auto g = testing::baseline_grid();
    const auto a = NoiseModel::build({NoiseKind::Exponential, 1.0, 5.0}, g);
    const auto b = NoiseModel::build({NoiseKind::Exponential, 2.0, 5.0}, g);
    CHECK((b.covariance() - 4.0 * a.covariance()).norm() == 0.0);
    CHECK((b.factor() - 2.0 * a.factor()).norm() <= 1e-14 * b.factor().norm());
}

TEST_CASE("invalid noise parameters") {
    const auto g = testing::baseline_grid();
    CHECK_THROWS_AS(NoiseModel::build({NoiseKind::Exponential, 0.0, 5.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::build({NoiseKind::Exponential, 1.0, -1.0}, g), std::invalid_argument);
}

TEST_CASE("whiten round trip and linearity") {
    const auto g = testing::baseline_grid();
    const auto model = NoiseModel::build(testing::baseline_noise(), g);
    Engine rng(5);
    std::normal_distribution<double> z;
    std::vector<double> r(model.dim()), s(model.dim());
    for (auto& v : r) v = z(rng);
    for (auto& v : s) v = z(rng);
    const auto w = whiten(model, r);
    std::vector<double> back(model.dim());
    model.apply_factor(w, back);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        err += (back[i] - r[i]) * (back[i] - r[i]);
        norm += r[i] * r[i];
    }
    CHECK(std::sqrt(err) <= 1e-10 * std::sqrt(norm));

    std::vector<double> comb(model.dim());
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.0 * r[i] - 0.5 * s[i];
    const auto wc = whiten(model, comb);
    const auto ws = whiten(model, s);
    for (std::size_t i = 0; i < comb.size(); ++i) CHECK(wc[i] == doctest::Approx(2.0 * w[i] - 0.5 * ws[i]).epsilon(1e-9));

    // Transposed solve: Phi^T y = s.
    std::vector<double> y(model.dim());
    model.whiten_transpose_into(s, y);
    const Eigen::VectorXd check = model.factor().transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), 68);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(check(static_cast<Eigen::Index>(i)) == doctest::Approx(s[i]).epsilon(1e-9));
}

TEST_CASE("total covariance mass") {
    const auto g = SpaceTimeGrid::with_counts(0.0, 2.5, 5, 1.0, 1);
    CHECK(total_covariance_mass(NoiseModel::build(testing::identity_noise(), g), 0.5) == doctest::Approx(0.75));
    const auto tiny = NoiseModel::build({NoiseKind::Exponential, 1e-8, 5.0}, g);
    CHECK(total_covariance_mass(tiny, 0.5) < 1e-15);
    const auto local = NoiseModel::build({NoiseKind::Exponential, 1.5, 1e-4}, g);
    CHECK(total_covariance_mass(local, 0.5) == doctest::Approx(0.25 * 3 * 1.5 * 1.5));
}

TEST_CASE("sampled increments have the prescribed moments") {
    const auto g = SpaceTimeGrid::uniform(0.0, 3.0, 0.5, 1.0, 0.05);
    const auto model = NoiseModel::build({NoiseKind::Exponential, 1.0, 1.0}, g);
    const double dt = 0.05, dx = 0.5;
    const std::size_t K = 100000, d = model.dim();
    Engine rng(17);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(4, 4);
    double cross = 0.0, cross2 = 0.0;
    std::vector<double> prev = sample_increments(model, dt, dx, rng);
    for (std::size_t k = 0; k < K; ++k) {
        const auto x = sample_increments(model, dt, dx, rng);
        const Eigen::Map<const Eigen::VectorXd> v(x.data(), 4);
        mean += v;
        second += v * v.transpose();
        cross += x[0] * prev[0];
        cross2 += x[0] * prev[0] * x[0] * prev[0];
        prev = x;
    }
    REQUIRE(d == 4);
    mean /= K;
    second /= K;
    const Eigen::MatrixXd cov = second - mean * mean.transpose();
    const Eigen::MatrixXd expected = (dt / dx) * model.covariance();
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(mean(i)) < 4.0 * std::sqrt(expected(i, i) / K));
    CHECK((cov - expected).norm() < 0.05 * expected.norm());
    const double c = cross / K;
    const double se = std::sqrt(cross2 / K - c * c) / std::sqrt(static_cast<double>(K));
    CHECK(std::abs(c) < 4.0 * se);
}
