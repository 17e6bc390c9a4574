// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace shockld {

using CellValues = std::vector<double>;

/// Uniform finite-volume mesh on [L, R] x [0, T].
///
/// Cells are indexed 0..M-1 here; cell i has center L + (i + 1/2) dx.
/// Interior cells are 1..M-2, the two outermost cells carry boundary data.
struct SpaceTimeGrid {
    double L = 0.0;
    double R = 1.0;
    std::size_t M = 4;
    double T = 1.0;
    std::size_t N = 1;

    /// Builds a grid from spacings; throws std::invalid_argument unless dx
    /// divides R - L and dt divides T to 1e-9 relative.
    static SpaceTimeGrid uniform(double L, double R, double dx, double T, double dt);
    /// Builds a grid from counts.
    static SpaceTimeGrid with_counts(double L, double R, std::size_t M, double T, std::size_t N);

    double dx() const { return (R - L) / static_cast<double>(M); }
    double dt() const { return T / static_cast<double>(N); }
    double center(std::size_t i) const { return L + (static_cast<double>(i) + 0.5) * dx(); }
    double time(std::size_t n) const { return static_cast<double>(n) * dt(); }
    std::size_t interior() const { return M - 2; }
    std::vector<double> centers() const;

    void validate() const;
};

/// Viscous Burgers wave in a frame moving with speed gamma:
/// u_t + (1/2 (u - gamma)^2)_x = D u_xx, connecting u_minus (left) to u_plus.
struct WaveSpec {
    double u_minus = 2.0;
    double u_plus = 1.0;
    double D = 1.0;
    double gamma = 0.0;

    double flux(double u) const { return 0.5 * (u - gamma) * (u - gamma); }
    double flux_derivative(double u) const { return u - gamma; }
    double jump() const { return u_minus - u_plus; }
    /// Rankine-Hugoniot speed of the wave in this frame.
    double shock_speed() const;

    void validate() const;
};

/// (F(u+) - F(u-)) / (u+ - u-); throws std::invalid_argument("degenerate jump")
/// when the states coincide.
double rankine_hugoniot_speed(double u_minus, double u_plus,
                              const std::function<double(double)>& flux);

/// Closed-form viscous shock profile centered at x = 0.
double profile(const WaveSpec& spec, double x);
/// Derivative of the profile with respect to x.
double profile_slope(const WaveSpec& spec, double x);

/// Point samples of profile(x - shift) at every cell center.
CellValues sample_profile(const WaveSpec& spec, const SpaceTimeGrid& grid, double shift);

/// Distance over which the profile relaxes to its end states: 2 D / (u- - u+).
double profile_width(const WaveSpec& spec);

}  // namespace shockld
