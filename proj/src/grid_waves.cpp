// SPDX-License-Identifier: MIT
#include "shockld/grid_waves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shockld {

namespace {

std::size_t checked_count(double span, double step, const std::string& what,
                          const std::string& whole) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument(what + " must be positive");
    }
    const double ratio = span / step;
    const double count = std::round(ratio);
    if (count < 1.0 || std::abs(ratio - count) > 1e-9 * std::max(1.0, count)) {
        throw std::invalid_argument(what + " does not divide " + whole);
    }
    return static_cast<std::size_t>(count);
}

}  // namespace

SpaceTimeGrid SpaceTimeGrid::uniform(double L, double R, double dx, double T, double dt) {
    if (!(R > L)) throw std::invalid_argument("grid: R must exceed L");
    if (!(T > 0.0)) throw std::invalid_argument("grid: T must be positive");
    const std::size_t M = checked_count(R - L, dx, "dx", "domain");
    const std::size_t N = checked_count(T, dt, "dt", "duration");
    return with_counts(L, R, M, T, N);
}

SpaceTimeGrid SpaceTimeGrid::with_counts(double L, double R, std::size_t M, double T, std::size_t N) {
    SpaceTimeGrid g{L, R, M, T, N};
    g.validate();
    return g;
}

std::vector<double> SpaceTimeGrid::centers() const {
    std::vector<double> x(M);
    for (std::size_t i = 0; i < M; ++i) x[i] = center(i);
    return x;
}

void SpaceTimeGrid::validate() const {
    if (M < 4) throw std::invalid_argument("grid: need at least 4 cells");
    if (N < 1) throw std::invalid_argument("grid: need at least 1 time step");
    if (!(dx() > 0.0) || !(dt() > 0.0)) throw std::invalid_argument("grid: non-positive spacing");
}

double WaveSpec::shock_speed() const {
    return rankine_hugoniot_speed(u_minus, u_plus, [this](double u) { return flux(u); });
}

void WaveSpec::validate() const {
    if (!(u_minus > u_plus)) throw std::invalid_argument("wave: u_minus must exceed u_plus");
    if (!(D > 0.0)) throw std::invalid_argument("wave: D must be positive");
    if (!std::isfinite(gamma)) throw std::invalid_argument("wave: gamma must be finite");
}

double rankine_hugoniot_speed(double u_minus, double u_plus,
                              const std::function<double(double)>& flux) {
    if (u_minus == u_plus) throw std::invalid_argument("degenerate jump");
    return (flux(u_plus) - flux(u_minus)) / (u_plus - u_minus);
}

double profile(const WaveSpec& spec, double x) {
    const double jump = spec.jump();
    return 0.5 * (spec.u_minus + spec.u_plus) - 0.5 * jump * std::tanh(jump * x / (4.0 * spec.D));
}

double profile_slope(const WaveSpec& spec, double x) {
    const double jump = spec.jump();
    const double k = jump / (4.0 * spec.D);
    const double c = std::cosh(k * x);
    return -0.5 * jump * k / (c * c);
}

CellValues sample_profile(const WaveSpec& spec, const SpaceTimeGrid& grid, double shift) {
    CellValues q(grid.M);
    for (std::size_t i = 0; i < grid.M; ++i) q[i] = profile(spec, grid.center(i) - shift);
    return q;
}

double profile_width(const WaveSpec& spec) { return 2.0 * spec.D / spec.jump(); }

}  // namespace shockld
