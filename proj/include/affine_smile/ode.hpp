#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "affine_smile/errors.hpp"

namespace affine_smile::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Blow-up is declared once |y[guard_index]| exceeds this.
    double blowup_guard = 1e8;
    std::size_t guard_index = 0;
    std::size_t max_steps = 50'000'000;
};

enum class Status { Completed, BlowUp };

template <std::size_t N>
struct Result {
    Status status = Status::Completed;
    double t = 0.0;
    std::array<double, N> y{};
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
bool all_finite(const std::array<double, N>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

/// Dormand–Prince 5(4) with FSAL and elementary step control, integrating
/// y' = rhs(t, y) from t = 0 to t_end.
///
/// Stops early with Status::BlowUp when the guarded component exceeds the guard.
/// It also stops with BlowUp when the step size can no longer advance t while that
/// component is above 1 and e-folds faster than the smallest resolvable step. Any
/// other stall throws StepSizeUnderflow.
template <std::size_t N, class Rhs>
Result<N> integrate_dopri5(Rhs&& rhs, std::array<double, N> y, double t_end, const Options& opt = {}) {
    using State = std::array<double, N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    Result<N> out;
    out.y = y;
    if (!(t_end > 0.0)) return out;

    auto combine = [](const State& base, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        State r = base;
        for (const auto& [coef, k] : terms) {
            if (coef == 0.0) continue;
            for (std::size_t i = 0; i < N; ++i) r[i] += h * coef * (*k)[i];
        }
        return r;
    };

    double t = 0.0;
    State k1 = rhs(t, y);
    if (!detail::all_finite(k1)) throw NumericalError("integrate_dopri5: right-hand side not finite at t = 0");
    double h = std::min(t_end, 1e-3);

    const auto guard_hit = [&](const State& s) { return std::abs(s[opt.guard_index]) > opt.blowup_guard; };

    while (t < t_end) {
        if (out.accepted + out.rejected > opt.max_steps) throw NumericalError("integrate_dopri5: step budget exhausted");
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < h_min) {
            const double g = std::abs(y[opt.guard_index]);
            const double rate = std::abs(k1[opt.guard_index]);
            if (g > 1.0 && (!std::isfinite(rate) || g / rate < 1e3 * h_min)) {
                out.status = Status::BlowUp;
                break;
            }
            throw StepSizeUnderflow("integrate_dopri5: step size underflow without blow-up");
        }
        if (t + h > t_end) h = t_end - t;

        const State k2 = rhs(t + c2 * h, combine(y, h, {{a21, &k1}}));
        const State k3 = rhs(t + c3 * h, combine(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(t + c4 * h, combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(t + c5 * h, combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 =
            rhs(t + h, combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y_new = combine(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = rhs(t + h, y_new);

        double err = 0.0;
        bool finite = detail::all_finite(y_new) && detail::all_finite(k7);
        if (finite) {
            for (std::size_t i = 0; i < N; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                err = std::max(err, std::abs(e) / scale);
            }
            finite = std::isfinite(err);
        }
        if (!finite) {
            h *= 0.25;
            ++out.rejected;
            continue;
        }
        if (err <= 1.0) {
            t = (t_end - t <= h) ? t_end : t + h;
            y = y_new;
            k1 = k7;
            ++out.accepted;
            if (guard_hit(y)) {
                out.status = Status::BlowUp;
                break;
            }
            const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= grow;
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            ++out.rejected;
        }
    }
    out.t = t;
    out.y = y;
    return out;
}

}  // namespace affine_smile::ode
