// SPDX-License-Identifier: MIT
#include "shockld/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace shockld {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct Sample {
    double step;
    double f;
    double slope;
};

// Minimizer of the cubic through two (step, f, slope) samples, safeguarded
// into the interior of the bracket.
double interpolate(const Sample& a, const Sample& b) {
    const double lo = std::min(a.step, b.step);
    const double hi = std::max(a.step, b.step);
    const double width = hi - lo;
    double trial = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(a.f) && std::isfinite(b.f) && std::isfinite(a.slope) && std::isfinite(b.slope)) {
        const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.step - b.step);
        const double disc = d1 * d1 - a.slope * b.slope;
        if (disc >= 0.0) {
            const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
            const double denom = b.slope - a.slope + 2.0 * d2;
            if (denom != 0.0) trial = b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
        }
    }
    if (!std::isfinite(trial) || trial < lo + 0.1 * width || trial > hi - 0.1 * width) trial = lo + 0.5 * width;
    return trial;
}

}  // namespace

LineSearchOutcome strong_wolfe_search(const Objective& fg, std::span<const double> x, double f0,
                                      std::span<const double> g0, std::span<const double> d, double step0,
                                      const MinimizerOptions& opt, std::vector<double>& x_new,
                                      std::vector<double>& g_new) {
    const std::size_t n = x.size();
    const double slope0 = dot(g0, d);
    LineSearchOutcome out;
    x_new.resize(n);
    g_new.resize(n);

    std::vector<double> best_x;
    std::vector<double> best_g;
    double best_f = f0;
    double best_step = 0.0;

    auto evaluate = [&](double step) -> Sample {
        for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
        const double f = fg(x_new, g_new);
        ++out.evaluations;
        const double slope = std::isfinite(f) ? dot(g_new, d) : std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(f) && f < best_f && f <= f0 + opt.c1 * step * slope0) {
            best_f = f;
            best_step = step;
            best_x = x_new;
            best_g = g_new;
        }
        return {step, f, slope};
    };
    auto armijo_fails = [&](const Sample& s) { return !std::isfinite(s.f) || s.f > f0 + opt.c1 * s.step * slope0; };
    auto curvature_ok = [&](const Sample& s) { return std::abs(s.slope) <= -opt.c2 * slope0; };
    auto accept = [&](const Sample& s) {
        out.ok = true;
        out.step = s.step;
        out.f = s.f;
        return out;
    };

    auto zoom = [&](Sample lo, Sample hi) -> LineSearchOutcome {
        while (out.evaluations < opt.max_line_search_evals) {
            const Sample s = evaluate(interpolate(lo, hi));
            if (armijo_fails(s) || s.f >= lo.f) {
                hi = s;
            } else {
                if (curvature_ok(s)) return accept(s);
                if (s.slope * (hi.step - lo.step) >= 0.0) hi = lo;
                lo = s;
            }
            if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, lo.step)) break;
        }
        return out;
    };

    Sample prev{0.0, f0, slope0};
    double step = step0;
    for (std::size_t iter = 0; out.evaluations < opt.max_line_search_evals; ++iter) {
        const Sample s = evaluate(step);
        if (armijo_fails(s) || (iter > 0 && s.f >= prev.f)) {
            zoom(prev, s);
            break;
        }
        if (curvature_ok(s)) return accept(s);
        if (s.slope >= 0.0) {
            zoom(s, prev);
            break;
        }
        prev = s;
        step *= 2.0;
    }
    if (out.ok) return out;
    // Fall back to the best sufficient-decrease point, if any.
    if (!best_x.empty()) {
        x_new = best_x;
        g_new = best_g;
        out.ok = true;
        out.step = best_step;
        out.f = best_f;
    }
    return out;
}

MinimizerResult minimize_bfgs(const Objective& fg, std::vector<double> x0, const MinimizerOptions& opt) {
    const std::size_t n = x0.size();
    MinimizerResult res;
    std::vector<double> x = std::move(x0);
    std::vector<double> g(n);
    double f = fg(x, g);
    res.evaluations = 1;
    if (!std::isfinite(f)) throw std::runtime_error("objective is not finite at the initial point");

    auto converged = [&](double fv, std::span<const double> gv) {
        return inf_norm(gv) <= opt.grad_tol * std::max(1.0, std::abs(fv));
    };

    const bool dense = n <= opt.dense_limit;
    Eigen::MatrixXd H;  // inverse Hessian approximation (dense mode)
    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;  // (s, y), L-BFGS mode
    double h0 = 1.0;
    bool have_curvature = false;

    std::vector<double> d(n);
    std::vector<double> x_new;
    std::vector<double> g_new;
    std::vector<double> s(n);
    std::vector<double> y(n);
    std::vector<double> alpha;

    res.status = MinimizerStatus::MaxIterations;
    std::size_t iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        if (n == 0 || converged(f, g)) {
            res.status = MinimizerStatus::Converged;
            break;
        }

        // Search direction d = -H g.
        if (!have_curvature) {
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        } else if (dense) {
            Eigen::Map<Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(n)).noalias() =
                -(H.selfadjointView<Eigen::Lower>() *
                  Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(n)));
        } else {
            std::vector<double> q = g;
            alpha.assign(pairs.size(), 0.0);
            for (std::size_t k = pairs.size(); k-- > 0;) {
                const auto& [sk, yk] = pairs[k];
                alpha[k] = dot(sk, q) / dot(yk, sk);
                for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * yk[i];
            }
            for (double& v : q) v *= h0;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const auto& [sk, yk] = pairs[k];
                const double beta = dot(yk, q) / dot(yk, sk);
                for (std::size_t i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * sk[i];
            }
            for (std::size_t i = 0; i < n; ++i) d[i] = -q[i];
        }
        if (dot(d, g) >= 0.0) {
            // Not a descent direction: restart from steepest descent.
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            have_curvature = false;
            pairs.clear();
        }

        double step0 = opt.initial_step;
        if (!have_curvature) step0 = std::min(opt.initial_step, 1.0 / std::max(inf_norm(g), 1e-300));

        const LineSearchOutcome ls = strong_wolfe_search(fg, x, f, g, d, step0, opt, x_new, g_new);
        res.evaluations += ls.evaluations;
        if (!ls.ok) {
            if (have_curvature) {
                // Retry once along steepest descent with a fresh model.
                have_curvature = false;
                pairs.clear();
                continue;
            }
            res.status = MinimizerStatus::LineSearchFailed;
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = dot(s, y);
        x.swap(x_new);
        g.swap(g_new);
        const double f_prev = f;
        f = ls.f;

        if (sy > 1e-300 && std::isfinite(sy)) {
            const double yy = dot(y, y);
            if (dense) {
                const auto N = static_cast<Eigen::Index>(n);
                Eigen::Map<const Eigen::VectorXd> sv(s.data(), N);
                Eigen::Map<const Eigen::VectorXd> yv(y.data(), N);
                if (!have_curvature) {
                    H = Eigen::MatrixXd::Identity(N, N) * (sy / yy);
                }
                const double rho = 1.0 / sy;
                const Eigen::VectorXd Hy = H.selfadjointView<Eigen::Lower>() * yv;
                const double yHy = yv.dot(Hy);
                // H <- H - rho (s Hy^T + Hy s^T) + (rho^2 yHy + rho) s s^T
                H.selfadjointView<Eigen::Lower>().rankUpdate(sv, Hy, -rho);
                H.selfadjointView<Eigen::Lower>().rankUpdate(sv, rho * rho * yHy + rho);
            } else {
                pairs.emplace_back(s, y);
                if (pairs.size() > opt.memory) pairs.pop_front();
                h0 = sy / yy;
            }
            have_curvature = true;
        }

        if (std::abs(f_prev - f) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f)) &&
            !converged(f, g) && inf_norm(s) <= 1e-14 * std::max(1.0, inf_norm(x))) {
            res.status = MinimizerStatus::LineSearchFailed;
            ++iter;
            break;
        }
    }
    if (res.status == MinimizerStatus::MaxIterations && converged(f, g)) res.status = MinimizerStatus::Converged;
    res.iterations = iter;
    res.f = f;
    res.grad_inf = inf_norm(g);
    res.x = std::move(x);
    return res;
}

}  // namespace shockld
