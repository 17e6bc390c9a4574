// SPDX-License-Identifier: MIT
#include "shockld/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shockld {

PathMatrix::PathMatrix(const SpaceTimeGrid& grid, const WaveSpec& spec)
    : grid_(grid), spec_(spec), data_((grid.N + 1) * grid.M, 0.0) {
    grid_.validate();
}

void PathMatrix::set_slice(std::size_t n, std::span<const double> q) {
    if (q.size() != grid_.M) throw std::invalid_argument("set_slice: length must equal M");
    std::copy(q.begin(), q.end(), slice(n).begin());
}

FreeMask make_free_mask(const SpaceTimeGrid& grid, std::size_t pinned_width, bool terminal_free) {
    FreeMask mask;
    const std::size_t last = terminal_free ? grid.N : grid.N - 1;
    if (2 * pinned_width >= grid.M) return mask;
    for (std::size_t n = 1; n <= last; ++n) {
        for (std::size_t m = pinned_width; m + pinned_width < grid.M; ++m) mask.index.push_back(n * grid.M + m);
    }
    return mask;
}

namespace {

void residual_into(const PathMatrix& path, std::size_t n, std::span<double> out) {
    const auto& grid = path.grid();
    const double dt = grid.dt();
    const auto now = path.slice(n);
    const auto next = path.slice(n + 1);
    drift_into(now, path.spec(), grid.dx(), out);
    for (std::size_t i = 1; i + 1 < grid.M; ++i) out[i - 1] = (next[i] - now[i]) / dt - out[i - 1];
}

double squared_norm(std::span<const double> v) {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

std::vector<double> residual(const PathMatrix& path, std::size_t n) {
    if (n >= path.grid().N) throw std::out_of_range("residual: step index out of range");
    std::vector<double> r(path.grid().interior());
    residual_into(path, n, r);
    return r;
}

double rate(const PathMatrix& path, const NoiseModel& model) {
    const auto& grid = path.grid();
    if (model.dim() != grid.interior()) throw std::invalid_argument("rate: model and path grids differ");
    std::vector<double> r(grid.interior());
    std::vector<double> s(grid.interior());
    double sum = 0.0;
    for (std::size_t n = 0; n < grid.N; ++n) {
        residual_into(path, n, r);
        model.whiten_into(r, s);
        sum += squared_norm(s);
    }
    return 0.5 * grid.dt() * grid.dx() * sum;
}

double rate_frozen_drift(const PathMatrix& path, const NoiseModel& model,
                         const std::vector<std::vector<double>>& frozen) {
    const auto& grid = path.grid();
    if (frozen.size() != grid.N) throw std::invalid_argument("rate_frozen_drift: need one drift per step");
    const double dt = grid.dt();
    std::vector<double> r(grid.interior());
    std::vector<double> s(grid.interior());
    double sum = 0.0;
    for (std::size_t n = 0; n < grid.N; ++n) {
        const auto now = path.slice(n);
        const auto next = path.slice(n + 1);
        for (std::size_t i = 1; i + 1 < grid.M; ++i) r[i - 1] = (next[i] - now[i]) / dt - frozen[n][i - 1];
        model.whiten_into(r, s);
        sum += squared_norm(s);
    }
    return 0.5 * dt * grid.dx() * sum;
}

double rate_and_full_gradient(const PathMatrix& path, const NoiseModel& model, std::span<double> grad) {
    const auto& grid = path.grid();
    const std::size_t M = grid.M;
    if (grad.size() != (grid.N + 1) * M) throw std::invalid_argument("rate gradient: wrong output length");
    if (model.dim() != grid.interior()) throw std::invalid_argument("rate: model and path grids differ");
    std::fill(grad.begin(), grad.end(), 0.0);

    const double dt = grid.dt();
    const double dx = grid.dx();
    std::vector<double> r(grid.interior());
    std::vector<double> s(grid.interior());
    std::vector<double> g(grid.interior());
    std::vector<double> jt(M);
    double sum = 0.0;
    for (std::size_t n = 0; n < grid.N; ++n) {
        residual_into(path, n, r);
        model.whiten_into(r, s);
        sum += squared_norm(s);
        model.whiten_transpose_into(s, g);

        // dI/dQ^{n+1} (interior) = dx g ;  dI/dQ^n = -dx g - dt dx J_b^T g
        double* next = grad.data() + (n + 1) * M;
        double* now = grad.data() + n * M;
        for (std::size_t i = 1; i + 1 < M; ++i) {
            next[i] += dx * g[i - 1];
            now[i] -= dx * g[i - 1];
        }
        std::fill(jt.begin(), jt.end(), 0.0);
        drift_vjp_accumulate(path.slice(n), path.spec(), dx, g, jt);
        for (std::size_t i = 0; i < M; ++i) now[i] -= dt * dx * jt[i];
    }
    return 0.5 * dt * dx * sum;
}

std::vector<double> rate_gradient(const PathMatrix& path, const NoiseModel& model, const FreeMask& mask) {
    std::vector<double> full(path.values().size());
    rate_and_full_gradient(path, model, full);
    std::vector<double> out(mask.size());
    for (std::size_t k = 0; k < mask.size(); ++k) out[k] = full[mask.index[k]];
    return out;
}

ForcingSequence forcing_from_path(const PathMatrix& path, const NoiseModel& model) {
    const auto& grid = path.grid();
    ForcingSequence f;
    f.h.resize(grid.N);
    std::vector<double> r(grid.interior());
    for (std::size_t n = 0; n < grid.N; ++n) {
        // Q^{n+1} - Q^n - dt b(Q^n), formed directly to keep replay exact.
        const auto now = path.slice(n);
        const auto next = path.slice(n + 1);
        drift_into(now, path.spec(), grid.dx(), r);
        for (std::size_t i = 1; i + 1 < grid.M; ++i) r[i - 1] = next[i] - now[i] - grid.dt() * r[i - 1];
        f.h[n].resize(grid.interior());
        model.whiten_into(r, f.h[n]);
    }
    return f;
}

double discrete_lower_bound(const PathMatrix& path, const NoiseModel& model) {
    const auto& grid = path.grid();
    // ||Phi^T 1||^2 = 1^T C 1
    const double mass = model.covariance().sum();
    double total = 0.0;
    std::vector<double> r(grid.interior());
    for (std::size_t n = 0; n < grid.N; ++n) {
        residual_into(path, n, r);
        total += std::accumulate(r.begin(), r.end(), 0.0);
    }
    return grid.dt() * grid.dx() / (2.0 * mass) * total * total / static_cast<double>(grid.N);
}

}  // namespace shockld
