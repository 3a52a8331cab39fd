#include "affine_smile/ldp.hpp"

#include "affine_smile/errors.hpp"
#include "affine_smile/parallel.hpp"
#include "affine_smile/roots.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace affine_smile {

namespace {

constexpr double kThetaTolerance = 1e-10;

/// Distance kept from a finite endpoint when probing Λ' there.
double endpoint_margin(double theta) { return 1e-9 * std::max(1.0, std::abs(theta)); }

}  // namespace

RateFunction::RateFunction(ModelParams params) : params_(std::move(params)), domain_(critical_domain(params_)) {}

double RateFunction::slope_at(double theta) const { return limiting_cgf_deriv(params_, theta); }

RatePoint RateFunction::rate(double x) const {
    if (!std::isfinite(x)) throw DomainError("rate: x must be finite");
    RatePoint out;
    out.x = x;

    // Bracket θ* with Λ'(lo) < x < Λ'(hi), or detect that the sup sits at an endpoint.
    double lo = 0.0;
    double hi = 0.0;
    if (domain_.right_bounded()) {
        hi = domain_.theta_max - endpoint_margin(domain_.theta_max);
        if (x >= slope_at(hi)) {
            out.theta_star = domain_.theta_max;
            out.value = domain_.theta_max * x - limiting_cgf(params_, domain_.theta_max);
            out.boundary_attained = true;
            return out;
        }
    } else {
        double step = 1.0;
        hi = step;
        while (slope_at(hi) <= x) {
            step *= 2.0;
            hi = step;
            if (step > 1e12) throw NumericalError("rate: cannot bracket theta* on the right");
        }
    }
    if (domain_.left_bounded()) {
        lo = domain_.theta_min + endpoint_margin(domain_.theta_min);
        if (x <= slope_at(lo)) {
            out.theta_star = domain_.theta_min;
            out.value = domain_.theta_min * x - limiting_cgf(params_, domain_.theta_min);
            out.boundary_attained = true;
            return out;
        }
    } else {
        double step = 1.0;
        lo = -step;
        while (slope_at(lo) >= x) {
            step *= 2.0;
            lo = -step;
            if (step > 1e12) throw NumericalError("rate: cannot bracket theta* on the left");
        }
    }

    const auto [below, above] =
        roots::bisect_boundary([&](double th) { return slope_at(th) < x; }, lo, hi, kThetaTolerance);
    const double theta = 0.5 * (below + above);
    out.theta_star = theta;
    out.value = theta * x - limiting_cgf(params_, theta);
    return out;
}

RatePoint RateFunction::rate_bar(double x) const {
    RatePoint p = rate(x);
    p.value -= x;
    p.theta_star -= 1.0;
    return p;
}

RatePoint RateFunction::evaluate(double x, RateKind kind) const {
    return kind == RateKind::I ? rate(x) : rate_bar(x);
}

RatePoint rate_I(const ModelParams& p, double x) { return RateFunction(p).rate(x); }

RatePoint rate_I_bar(const ModelParams& p, double x) { return RateFunction(p).rate_bar(x); }

XBoundaries x_boundaries(const ModelParams& p) {
    require_valid(p);
    const double kappa = p.compensator();
    // Λ'(θ0) at a θ0 where y(θ0) = 0, using y'(θ0) = β(κ − E[Y e^{θ0 Y}])/(aβE[e^{θ0 Y}] − b).
    auto slope_at_zero_root = [&](double theta0) {
        const auto m = jump_exp_moments(p.jump, theta0);
        const double denom = p.a * p.beta * m.m0 - p.b;
        if (!(denom < 0.0)) {
            throw ModelRegimeError(fmt::format(
                "x_boundaries: a*beta*E[e^({}Y)] = {} >= b = {}; y({}) = 0 is not the smaller root", theta0,
                p.a * p.beta * m.m0, p.b, theta0));
        }
        const double dy = p.beta * (kappa - m.m1) / denom;
        return p.sigma_s_sq * theta0 + p.drift() - kappa * p.alpha + (p.b * p.c + p.a * p.alpha * m.m0) * dy +
               p.alpha * m.m1;
    };
    return {slope_at_zero_root(0.0), slope_at_zero_root(1.0)};
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> xs(points);
    if (points == 1) {
        xs[0] = lo;
        return xs;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) xs[i] = lo + step * static_cast<double>(i);
    xs.back() = hi;
    return xs;
}

std::vector<double> default_x_grid(const ModelParams& p, std::size_t points) {
    const auto xb = x_boundaries(p);
    const double w = std::max(0.5, 3.0 * (xb.x_right - xb.x_left));
    return linspace(xb.x_left - w, xb.x_right + w, points);
}

RateCurve rate_curve(const RateFunction& rf, std::span<const double> xs, RateKind kind) {
    RateCurve curve;
    curve.params_digest = params_digest(rf.params());
    curve.points.resize(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { curve.points[i] = rf.evaluate(xs[i], kind); });
    return curve;
}

RateCurve rate_curve_serial(const RateFunction& rf, std::span<const double> xs, RateKind kind) {
    RateCurve curve;
    curve.params_digest = params_digest(rf.params());
    curve.points.reserve(xs.size());
    for (double x : xs) curve.points.push_back(rf.evaluate(x, kind));
    return curve;
}

}  // namespace affine_smile
