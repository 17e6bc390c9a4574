// SPDX-License-Identifier: MIT
#pragma once

#include <span>
#include <vector>

#include "shockld/flux_solver.hpp"
#include "shockld/grid_waves.hpp"
#include "shockld/noise_model.hpp"

namespace shockld {

/// Full discrete space-time solution Q^0..Q^N, stored row-major by time level.
class PathMatrix {
public:
    PathMatrix(const SpaceTimeGrid& grid, const WaveSpec& spec);

    const SpaceTimeGrid& grid() const { return grid_; }
    const WaveSpec& spec() const { return spec_; }
    std::size_t levels() const { return grid_.N + 1; }
    std::size_t cells() const { return grid_.M; }

    std::span<double> slice(std::size_t n) { return {data_.data() + n * grid_.M, grid_.M}; }
    std::span<const double> slice(std::size_t n) const { return {data_.data() + n * grid_.M, grid_.M}; }
    double& at(std::size_t n, std::size_t m) { return data_[n * grid_.M + m]; }
    double at(std::size_t n, std::size_t m) const { return data_[n * grid_.M + m]; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    void set_slice(std::size_t n, std::span<const double> q);

private:
    SpaceTimeGrid grid_;
    WaveSpec spec_;
    std::vector<double> data_;
};

/// Pre-whitened forcing hbar^1..hbar^N; each vector has length M - 2.
struct ForcingSequence {
    std::vector<std::vector<double>> h;
};

/// Flat indices (n * M + m) of the optimization variables, sorted.
struct FreeMask {
    std::vector<std::size_t> index;
    std::size_t size() const { return index.size(); }
};

/// Interior cells that are not pinned by the boundary policy, for levels
/// 1..N-1, plus level N when `terminal_free`.
FreeMask make_free_mask(const SpaceTimeGrid& grid, std::size_t pinned_width, bool terminal_free);

/// r^n = (Q^{n+1} - Q^n)/dt - b(Q^n) on interior cells, 0 <= n <= N-1.
std::vector<double> residual(const PathMatrix& path, std::size_t n);

/// I(q) = (dt dx / 2) sum_n || Phi^{-1} r^n ||^2.
double rate(const PathMatrix& path, const NoiseModel& model);

/// Rate with the drift b(Q^n) replaced by fixed vectors (one per level
/// 0..N-1); exactly quadratic in the path.
double rate_frozen_drift(const PathMatrix& path, const NoiseModel& model,
                         const std::vector<std::vector<double>>& frozen);

/// Rate and its gradient with respect to every cell value; `grad` has
/// (N + 1) M entries. Entries at pinned positions are still the exact
/// partial derivatives.
double rate_and_full_gradient(const PathMatrix& path, const NoiseModel& model, std::span<double> grad);

/// Gradient with respect to the free variables only.
std::vector<double> rate_gradient(const PathMatrix& path, const NoiseModel& model, const FreeMask& mask);

/// hbar^n = Phi^{-1}(Q^{n+1} - Q^n - dt b(Q^n)) = dt Phi^{-1} r^n.
ForcingSequence forcing_from_path(const PathMatrix& path, const NoiseModel& model);

/// Cauchy-Schwarz lower bound
///   (dt dx / (2 ||Phi^T 1||^2)) (sum_n <r^n, 1>)^2 / N  <=  I(q).
double discrete_lower_bound(const PathMatrix& path, const NoiseModel& model);

}  // namespace shockld
