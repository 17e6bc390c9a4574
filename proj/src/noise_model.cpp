// SPDX-License-Identifier: MIT
#include "shockld/noise_model.hpp"

#include <cmath>
#include <stdexcept>

namespace shockld {

namespace {

using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

}  // namespace

NoiseModel NoiseModel::build(const NoiseSpec& spec, const SpaceTimeGrid& grid) {
    grid.validate();
    NoiseModel model;
    model.spec_ = spec;
    model.dim_ = grid.interior();
    const auto n = static_cast<Eigen::Index>(model.dim_);

    if (spec.kind == NoiseKind::Identity) {
        model.cov_ = Eigen::MatrixXd::Identity(n, n);
        model.phi_ = Eigen::MatrixXd::Identity(n, n);
        return model;
    }

    if (!(spec.sigma > 0.0)) throw std::invalid_argument("noise: sigma must be positive");
    if (!(spec.l_c > 0.0)) throw std::invalid_argument("noise: l_c must be positive");

    const double s2 = spec.sigma * spec.sigma;
    model.cov_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = grid.center(static_cast<std::size_t>(i) + 1);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double xj = grid.center(static_cast<std::size_t>(j) + 1);
            model.cov_(i, j) = s2 * std::exp(-std::abs(xi - xj) / spec.l_c);
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(model.cov_);
    if (llt.info() != Eigen::Success) {
        model.jitter_ = 1e-12 * model.cov_.trace() / static_cast<double>(n);
        Eigen::MatrixXd jittered = model.cov_;
        jittered.diagonal().array() += model.jitter_;
        llt.compute(jittered);
        if (llt.info() != Eigen::Success) throw std::runtime_error("covariance not positive definite");
    }
    model.phi_ = llt.matrixL();
    return model;
}

void NoiseModel::apply_factor(std::span<const double> x, std::span<double> out) const {
    if (is_identity()) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    const auto n = static_cast<Eigen::Index>(dim_);
    VecMap(out.data(), n).noalias() = phi_.triangularView<Eigen::Lower>() * ConstVecMap(x.data(), n);
}

void NoiseModel::whiten_into(std::span<const double> r, std::span<double> out) const {
    std::copy(r.begin(), r.end(), out.begin());
    if (is_identity()) return;
    const auto n = static_cast<Eigen::Index>(dim_);
    phi_.triangularView<Eigen::Lower>().solveInPlace(VecMap(out.data(), n));
}

void NoiseModel::whiten_transpose_into(std::span<const double> s, std::span<double> out) const {
    std::copy(s.begin(), s.end(), out.begin());
    if (is_identity()) return;
    const auto n = static_cast<Eigen::Index>(dim_);
    phi_.transpose().triangularView<Eigen::Upper>().solveInPlace(VecMap(out.data(), n));
}

std::vector<double> sample_increments(const NoiseModel& model, double dt, double dx, Engine& rng) {
    std::normal_distribution<double> normal;
    std::vector<double> z(model.dim());
    for (double& v : z) v = normal(rng);
    std::vector<double> out(model.dim());
    model.apply_factor(z, out);
    const double scale = std::sqrt(dt / dx);
    for (double& v : out) v *= scale;
    return out;
}

std::vector<double> whiten(const NoiseModel& model, std::span<const double> r) {
    if (r.size() != model.dim()) throw std::invalid_argument("whiten: length must equal M - 2");
    std::vector<double> out(r.size());
    model.whiten_into(r, out);
    return out;
}

double total_covariance_mass(const NoiseModel& model, double dx) { return dx * dx * model.covariance().sum(); }

}  // namespace shockld
