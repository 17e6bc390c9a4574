// SPDX-License-Identifier: MIT
#include "shockld/flux_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace shockld {

namespace {

inline double burgers(double q, double gamma) { return 0.5 * (q - gamma) * (q - gamma); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

GodunovEval godunov_eval(double q_left, double q_right, double gamma) {
    const double f_left = burgers(q_left, gamma);
    const double f_right = burgers(q_right, gamma);
    if (q_left <= q_right) {
        GodunovEval best{f_left, FluxBranch::Left};
        if (f_right < best.value) best = {f_right, FluxBranch::Right};
        if (q_left <= gamma && gamma <= q_right && 0.0 < best.value) best = {0.0, FluxBranch::Sonic};
        return best;
    }
    if (f_right > f_left) return {f_right, FluxBranch::Right};
    return {f_left, FluxBranch::Left};
}

FluxPartials godunov_partials(double q_left, double q_right, double gamma) {
    switch (godunov_eval(q_left, q_right, gamma).branch) {
        case FluxBranch::Left: return {q_left - gamma, 0.0};
        case FluxBranch::Right: return {0.0, q_right - gamma};
        case FluxBranch::Sonic: break;
    }
    return {0.0, 0.0};
}

void drift_into(std::span<const double> q, const WaveSpec& spec, double dx, std::span<double> out) {
    const std::size_t M = q.size();
    assert(M >= 4 && out.size() == M - 2);
    const double inv_dx = 1.0 / dx;
    const double nu = spec.D / (dx * dx);
    double f_west = godunov_flux(q[0], q[1], spec.gamma);
    for (std::size_t i = 1; i + 1 < M; ++i) {
        const double f_east = godunov_flux(q[i], q[i + 1], spec.gamma);
        out[i - 1] = -(f_east - f_west) * inv_dx + nu * (q[i + 1] - 2.0 * q[i] + q[i - 1]);
        f_west = f_east;
    }
}

std::vector<double> drift(std::span<const double> state, const WaveSpec& spec, double dx) {
    if (state.size() < 4) throw std::invalid_argument("drift: state needs at least 4 cells");
    std::vector<double> b(state.size() - 2);
    drift_into(state, spec, dx, b);
    return b;
}

void drift_vjp_accumulate(std::span<const double> q, const WaveSpec& spec, double dx,
                          std::span<const double> g, std::span<double> out) {
    const std::size_t M = q.size();
    assert(g.size() == M - 2 && out.size() == M);
    const double inv_dx = 1.0 / dx;
    const double nu = spec.D / (dx * dx);
    FluxPartials west = godunov_partials(q[0], q[1], spec.gamma);
    for (std::size_t i = 1; i + 1 < M; ++i) {
        const FluxPartials east = godunov_partials(q[i], q[i + 1], spec.gamma);
        const double gi = g[i - 1];
        out[i - 1] += gi * (west.d_left * inv_dx + nu);
        out[i] += gi * ((west.d_right - east.d_left) * inv_dx - 2.0 * nu);
        out[i + 1] += gi * (-east.d_right * inv_dx + nu);
        west = east;
    }
}

std::size_t pinned_width(const BoundaryPolicy& bc) {
    return std::visit(overloaded{[](const FixedStates&) -> std::size_t { return 1; },
                                 [](const TimeInterpolated& t) -> std::size_t { return t.width; }},
                      bc);
}

void apply_boundary(const BoundaryPolicy& bc, std::span<double> state, std::size_t n, std::size_t N) {
    const std::size_t M = state.size();
    std::visit(overloaded{[&](const FixedStates& f) {
                              state[0] = f.left;
                              state[M - 1] = f.right;
                          },
                          [&](const TimeInterpolated& t) {
                              const double w = static_cast<double>(n) / static_cast<double>(N);
                              for (std::size_t k = 0; k < t.width; ++k) {
                                  for (std::size_t i : {k, M - 1 - k}) {
                                      state[i] = (1.0 - w) * t.initial[i] + w * t.terminal[i];
                                  }
                              }
                          }},
               bc);
}

void euler_step_inplace(std::span<double> q, const WaveSpec& spec, const SpaceTimeGrid& grid,
                        const BoundaryPolicy& bc, std::span<const double> forcing,
                        std::span<const double> noise, double eps, std::size_t n,
                        std::span<double> scratch) {
    const std::size_t M = q.size();
    drift_into(q, spec, grid.dx(), scratch);
    const double dt = grid.dt();
    for (std::size_t i = 1; i + 1 < M; ++i) {
        double inc = dt * scratch[i - 1];
        if (!forcing.empty()) inc += forcing[i - 1];
        if (!noise.empty()) inc += eps * noise[i - 1];
        q[i] += inc;
    }
    apply_boundary(bc, q, n + 1, grid.N);
}

StateVector euler_step(std::span<const double> state, const WaveSpec& spec, const SpaceTimeGrid& grid,
                       const BoundaryPolicy& bc, std::span<const double> forcing,
                       std::span<const double> noise, double eps, std::size_t n) {
    if (state.size() != grid.M) throw std::invalid_argument("euler_step: state length must equal M");
    if (!forcing.empty() && forcing.size() != grid.M - 2)
        throw std::invalid_argument("euler_step: forcing length must equal M - 2");
    if (!noise.empty() && noise.size() != grid.M - 2)
        throw std::invalid_argument("euler_step: noise length must equal M - 2");
    StateVector next(state.begin(), state.end());
    std::vector<double> scratch(grid.M - 2);
    euler_step_inplace(next, spec, grid, bc, forcing, noise, eps, n, scratch);
    return next;
}

double stability_number(const WaveSpec& spec, const SpaceTimeGrid& grid, double u_lo, double u_hi) {
    const double speed = std::max(std::abs(u_lo - spec.gamma), std::abs(u_hi - spec.gamma));
    const double dx = grid.dx();
    return grid.dt() * (speed / dx + 2.0 * spec.D / (dx * dx));
}

}  // namespace shockld
