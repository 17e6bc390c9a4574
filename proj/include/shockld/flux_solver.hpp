// SPDX-License-Identifier: MIT
#pragma once

#include <span>
#include <variant>
#include <vector>

#include "shockld/grid_waves.hpp"

namespace shockld {

/// Cell values Q_m^n at one time level (length grid.M).
using StateVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Godunov flux for F(q) = 1/2 (q - gamma)^2
// ---------------------------------------------------------------------------

/// Which candidate state attained the Godunov min/max.
enum class FluxBranch { Left, Right, Sonic };

struct GodunovEval {
    double value;
    FluxBranch branch;
};

/// Exact Riemann flux by candidate enumeration: min over [q_left, q_right]
/// when q_left <= q_right, max over [q_right, q_left] otherwise. Ties select
/// the left state.
GodunovEval godunov_eval(double q_left, double q_right, double gamma);

inline double godunov_flux(double q_left, double q_right, double gamma) {
    return godunov_eval(q_left, q_right, gamma).value;
}

/// Partial derivatives (d/dq_left, d/dq_right) of the selected branch.
struct FluxPartials {
    double d_left;
    double d_right;
};
FluxPartials godunov_partials(double q_left, double q_right, double gamma);

// ---------------------------------------------------------------------------
// Semi-discrete operator
// ---------------------------------------------------------------------------

/// b_m(Q) = -(F_{m+1/2} - F_{m-1/2}) / dx + D (Q_{m+1} - 2 Q_m + Q_{m-1}) / dx^2
/// for the interior cells; `out` has length M - 2.
void drift_into(std::span<const double> state, const WaveSpec& spec, double dx,
                std::span<double> out);
std::vector<double> drift(std::span<const double> state, const WaveSpec& spec, double dx);

/// Accumulates J_b(Q)^T g into `out` (length M), where J_b is the Jacobian of
/// the interior drift with respect to all M cell values.
void drift_vjp_accumulate(std::span<const double> state, const WaveSpec& spec, double dx,
                          std::span<const double> g, std::span<double> out);

// ---------------------------------------------------------------------------
// Boundary policies
// ---------------------------------------------------------------------------

/// Pins the outermost cells to constant states at every time level.
struct FixedStates {
    double left;
    double right;
};

/// Pins the `width` outermost cells on each side to the linear-in-time blend
/// (1 - n/N) q^0 + (n/N) q^N of the given initial and terminal states.
struct TimeInterpolated {
    StateVector initial;
    StateVector terminal;
    std::size_t width = 2;
};

using BoundaryPolicy = std::variant<FixedStates, TimeInterpolated>;

/// Number of pinned cells on each side.
std::size_t pinned_width(const BoundaryPolicy& bc);

/// Overwrites the pinned cells of `state` with their values at level n of N.
void apply_boundary(const BoundaryPolicy& bc, std::span<double> state, std::size_t n, std::size_t N);

/// Explicit Euler update of the interior
///   Q^{n+1} = Q^n + dt b(Q^n) + forcing + eps noise
/// followed by strong imposition of the boundary cells at level n + 1.
/// `forcing` and `noise` have length M - 2; either may be empty (zero).
StateVector euler_step(std::span<const double> state, const WaveSpec& spec, const SpaceTimeGrid& grid,
                       const BoundaryPolicy& bc, std::span<const double> forcing,
                       std::span<const double> noise, double eps, std::size_t n);

/// In-place variant used by the Monte Carlo drivers; `scratch` must hold M - 2 values.
void euler_step_inplace(std::span<double> state, const WaveSpec& spec, const SpaceTimeGrid& grid,
                        const BoundaryPolicy& bc, std::span<const double> forcing,
                        std::span<const double> noise, double eps, std::size_t n,
                        std::span<double> scratch);

/// dt (max|F'| / dx + 2 D / dx^2) over states in [u_lo, u_hi]; explicit Euler
/// is expected to be stable when this is at most 1.
double stability_number(const WaveSpec& spec, const SpaceTimeGrid& grid, double u_lo, double u_hi);

}  // namespace shockld
