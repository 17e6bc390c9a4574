// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace shockld {

/// f(x), writing the gradient into g.
using Objective = std::function<double(std::span<const double> x, std::span<double> g)>;

struct MinimizerOptions {
    /// Stop when ||g||_inf <= grad_tol * max(1, |f|).
    double grad_tol = 1e-6;
    std::size_t max_iterations = 5000;
    /// Dense inverse-Hessian BFGS up to this many variables, L-BFGS above.
    std::size_t dense_limit = 10000;
    std::size_t memory = 20;
    double c1 = 1e-4;
    double c2 = 0.9;
    double initial_step = 1.0;
    std::size_t max_line_search_evals = 40;
};

enum class MinimizerStatus { Converged, MaxIterations, LineSearchFailed };

struct MinimizerResult {
    std::vector<double> x;
    double f = 0.0;
    double grad_inf = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    MinimizerStatus status = MinimizerStatus::MaxIterations;
};

/// Quasi-Newton minimization with a strong-Wolfe line search. Returns the best
/// iterate seen. Throws std::runtime_error if f is not finite at x0.
MinimizerResult minimize_bfgs(const Objective& fg, std::vector<double> x0, const MinimizerOptions& options = {});

/// Strong-Wolfe line search along d from x (Nocedal & Wright, Alg. 3.5/3.6).
/// On success returns true and leaves the accepted point in x_new/g_new.
struct LineSearchOutcome {
    bool ok = false;
    double step = 0.0;
    double f = 0.0;
    std::size_t evaluations = 0;
};
LineSearchOutcome strong_wolfe_search(const Objective& fg, std::span<const double> x, double f0,
                                      std::span<const double> g0, std::span<const double> d, double step0,
                                      const MinimizerOptions& options, std::vector<double>& x_new,
                                      std::vector<double>& g_new);

}  // namespace shockld
