// SPDX-License-Identifier: MIT
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shockld/grid_waves.hpp"
#include "shockld/rng.hpp"

namespace shockld {

enum class NoiseKind { Identity, Exponential };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Identity;
    double sigma = 1.0;
    double l_c = 1.0;
};

/// Spatial covariance of the interior noise increments and its Cholesky factor.
///
/// Increments at one time level are sqrt(dt/dx) Phi z with z standard normal,
/// so their covariance is (dt/dx) C with C = Phi Phi^T. Immutable once built.
class NoiseModel {
public:
    /// Assembles C at the interior cell centers and factors it. Throws
    /// std::runtime_error("covariance not positive definite") when the
    /// factorization fails even after one diagonal jitter retry.
    static NoiseModel build(const NoiseSpec& spec, const SpaceTimeGrid& grid);

    const NoiseSpec& spec() const { return spec_; }
    std::size_t dim() const { return dim_; }
    bool is_identity() const { return spec_.kind == NoiseKind::Identity; }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    const Eigen::MatrixXd& factor() const { return phi_; }
    /// Diagonal jitter added during factorization (0 when none was needed).
    double jitter() const { return jitter_; }

    /// out = Phi x
    void apply_factor(std::span<const double> x, std::span<double> out) const;
    /// out = Phi^{-1} r (forward substitution)
    void whiten_into(std::span<const double> r, std::span<double> out) const;
    /// out = Phi^{-T} s (back substitution)
    void whiten_transpose_into(std::span<const double> s, std::span<double> out) const;

private:
    NoiseSpec spec_;
    std::size_t dim_ = 0;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd phi_;
    double jitter_ = 0.0;
};

/// One time level of correlated increments sqrt(dt/dx) Phi z.
std::vector<double> sample_increments(const NoiseModel& model, double dt, double dx, Engine& rng);

/// Phi^{-1} r.
std::vector<double> whiten(const NoiseModel& model, std::span<const double> r);

/// dx^2 sum_ij C_ij: quadrature of the covariance kernel over the interior.
double total_covariance_mass(const NoiseModel& model, double dx);

}  // namespace shockld
