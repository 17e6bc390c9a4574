// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <vector>

#include "shockld/grid_waves.hpp"
#include "shockld/noise_model.hpp"

namespace shockld::testing {

inline SpaceTimeGrid baseline_grid() { return SpaceTimeGrid::uniform(-15.0, 20.0, 0.5, 1.0, 0.05); }
inline WaveSpec baseline_wave() { return WaveSpec{2.0, 1.0, 1.0, 1.5}; }
inline NoiseSpec baseline_noise() { return NoiseSpec{NoiseKind::Exponential, 1.0, 5.0}; }
inline NoiseSpec identity_noise() { return NoiseSpec{NoiseKind::Identity, 1.0, 1.0}; }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace shockld::testing
