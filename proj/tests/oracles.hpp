#pragma once

// Independent reference computations used only by the tests. None of these share
// code paths with the library beyond the parameter struct.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "affine_smile/model.hpp"

namespace oracle {

/// Composite Simpson rule on [lo, hi] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}

/// E[g(Y)] for a Gaussian jump by Simpson quadrature over ±12 standard deviations.
inline double gaussian_expectation(double mean, double variance, const std::function<double(double)>& g) {
    const double sd = std::sqrt(variance);
    auto density = [&](double y) {
        const double z = (y - mean) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    return simpson([&](double y) { return g(y) * density(y); }, mean - 12 * sd, mean + 12 * sd, 20000);
}

/// Γ(y, θ) from scratch for Gaussian jumps, compensator E[e^Y] − 1.
inline double gamma_gaussian(const affine_smile::ModelParams& p, double y, double theta) {
    const auto& g = std::get<affine_smile::GaussianJump>(p.jump);
    const double mgf = std::exp(theta * g.mean + 0.5 * theta * theta * g.variance);
    const double mu = std::exp(g.mean + 0.5 * g.variance) - 1.0;
    return -p.b * y + 0.5 * p.sigma_lam_sq * y * y + p.beta * (std::exp(p.a * y) * mgf - 1.0) - theta * mu * p.beta;
}

/// Fixed-step classical RK4 for E[e^{θX_t}] under Gaussian jumps (risk-neutral).
inline double rk4_mgf(const affine_smile::ModelParams& p, double t, double theta, int steps) {
    const auto& g = std::get<affine_smile::GaussianJump>(p.jump);
    const double mgf = std::exp(theta * g.mean + 0.5 * theta * theta * g.variance);
    const double mu = std::exp(g.mean + 0.5 * g.variance) - 1.0;
    auto rhs = [&](const std::array<double, 2>& s) {
        const double d = s[0];
        return std::array<double, 2>{
            -p.b * d + 0.5 * p.sigma_lam_sq * d * d + p.beta * (std::exp(p.a * d) * mgf - 1.0) - theta * mu * p.beta,
            p.b * p.c * d + p.alpha * (std::exp(p.a * d) * mgf - 1.0)};
    };
    std::array<double, 2> s{0.0, 0.0};
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) {
        const auto k1 = rhs(s);
        const auto k2 = rhs({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]});
        const auto k3 = rhs({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]});
        const auto k4 = rhs({s[0] + h * k3[0], s[1] + h * k3[1]});
        for (int j = 0; j < 2; ++j) s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    const double lin = (-0.5 * theta * p.sigma_s_sq + 0.5 * theta * theta * p.sigma_s_sq - theta * mu * p.alpha) * t;
    return std::exp(lin + s[0] * p.lambda0 + s[1]);
}

/// sup over a uniform θ-grid of θx − Λ(θ).
template <class Lambda>
double grid_sup(Lambda&& lambda, double x, double lo, double hi, int points) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double th = lo + (hi - lo) * i / (points - 1);
        const double v = lambda(th);
        if (std::isfinite(v)) best = std::max(best, th * x - v);
    }
    return best;
}

/// Central difference.
template <class F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
