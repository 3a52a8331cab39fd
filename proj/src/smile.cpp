#include "affine_smile/smile.hpp"

#include "affine_smile/errors.hpp"
#include "affine_smile/ode.hpp"
#include "affine_smile/parallel.hpp"
#include "affine_smile/roots.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace affine_smile {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadicandSlack = 1e-12;
constexpr double kMomentTolerance = 1e-9;
constexpr int kScanPoints = 32;

double clamp_radicand(double r, const char* what) {
    if (r >= 0.0) return r;
    if (r > -kRadicandSlack) return 0.0;
    throw NumericalError(fmt::format("sigma_inf_sq: {} = {} is negative", what, r));
}

}  // namespace

const char* to_string(Side side) { return side == Side::Right ? "right" : "left"; }

Smile::Smile(ModelParams params) : rate_(std::move(params)), bounds_(x_boundaries(rate_.params())) {}

double Smile::from_rate(double x, double rate) const {
    // 2(2I − x ∓ 2√(I² − xI)) = 2(√I ∓ √(I − x))²
    const double r1 = std::sqrt(clamp_radicand(rate, "I(x)"));
    const double r2 = std::sqrt(clamp_radicand(rate - x, "I(x) - x"));
    const bool inner = x >= bounds_.x_left && x <= bounds_.x_right;
    if (inner) return 2.0 * (r1 + r2) * (r1 + r2);
    const double sum = r1 + r2;
    return 2.0 * x * x / (sum * sum);
}

double Smile::operator()(double x) const { return from_rate(x, rate_.rate(x).value); }

double sigma_inf_sq(const ModelParams& p, double x) { return Smile(p)(x); }

std::vector<double> sigma_inf_sq_curve(const Smile& smile, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = smile(xs[i]); });
    return out;
}

std::vector<double> sigma_inf_sq_curve_serial(const Smile& smile, std::span<const double> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(smile(x));
    return out;
}

double blowup_time(const ModelParams& p, double theta) {
    if (std::isfinite(gamma_smaller_root(p, theta))) return kInf;

    const double log_m0 = log_mgf(p.jump, theta);
    const double kappa = p.compensator();
    const double yc = gamma_critical_point(p, theta);
    const double g_min = gamma_minimum(p, theta);

    // Beyond `cut` the exponential term dominates βE[e^{θY}]e^{aD} ≥ 1e14.
    const double cut = std::max({(std::log(1e14) - std::log(p.beta) - log_m0) / p.a, p.b / p.sigma_lam_sq,
                                 yc + 1.0, 1.0});

    // With D = y_c + w·tan φ and w² = 2G/Γ_yy(y_c), the peak of 1/Γ at y_c becomes a
    // nearly flat integrand w·sec²φ/Γ, however close θ is to the domain edge.
    const double curvature = p.sigma_lam_sq + p.a * p.a * p.beta * std::exp(p.a * yc + log_m0);
    const double width = std::sqrt(2.0 * g_min / curvature);
    // Γ(y_c + s) = G + Γ_y(y_c)s + ½σ_λ²s² + βE[e^{θY}]e^{a y_c}(e^{as} − 1 − as), free of the
    // cancellation that swamps a tiny G.
    const double slope_c = gamma_dy(p, yc, theta);
    const double jump_c = p.beta * std::exp(p.a * yc + log_m0);
    auto excess = [&](double s) {
        const double as = p.a * s;
        const double em = std::abs(as) < 1e-2
                              ? as * as * (0.5 + as * (1.0 / 6 + as * (1.0 / 24 + as * (1.0 / 120 + as / 720))))
                              : std::expm1(as) - as;
        return slope_c * s + 0.5 * p.sigma_lam_sq * s * s + jump_c * em;
    };
    auto mapped = [&](double phi) {
        const double sec = 1.0 / std::cos(phi);
        return width * sec * sec / (g_min + excess(width * std::tan(phi)));
    };
    std::vector<double> knots{std::atan((0.0 - yc) / width), std::atan((cut - yc) / width)};
    for (double k : {-1.0, 0.0, 1.0}) {
        if (k > knots[0] && k < knots[1]) knots.push_back(k);
    }
    std::sort(knots.begin(), knots.end());

    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double piece_error = 0.0;
        total += Quad::integrate(mapped, knots[i], knots[i + 1], 15, 1e-12, &piece_error);
        error += piece_error;
    }

    // Tail: Γ(D) ≥ A e^{aD} − s on [cut, ∞) because the quadratic part increases past b/σ_λ².
    const double amp = p.beta * std::exp(log_m0 + p.a * cut);
    const double quad_at_cut =
        0.5 * p.sigma_lam_sq * cut * cut - p.b * cut - p.beta - theta * kappa * p.beta;
    const double slack = std::max(0.0, -quad_at_cut);
    double tail = 0.0;
    if (std::isfinite(amp)) {
        if (slack > 0.0) {
            if (!(amp > slack)) throw NumericalError("blowup_time: tail bound is not applicable");
            tail = -std::log1p(-slack / amp) / (p.a * slack);
        } else {
            tail = 1.0 / (p.a * amp);
        }
    }
    total += tail;

    if (!std::isfinite(total) || error > 1e-8 * total) {
        throw NumericalError(
            fmt::format("blowup_time: quadrature did not converge at theta = {} (estimate {}, error {})", theta,
                        total, error));
    }
    return total;
}

double blowup_time_ode(const ModelParams& p, double theta, double t_cap) {
    const double log_m0 = log_mgf(p.jump, theta);
    const double shift = -theta * p.compensator() * p.beta;
    auto rhs = [&](double, const std::array<double, 1>& s) {
        // Overflow shows up as +inf and is handled by the integrator as a rejected step.
        const double v = -p.b * s[0] + 0.5 * p.sigma_lam_sq * s[0] * s[0] +
                         p.beta * (std::exp(p.a * s[0] + log_m0) - 1.0) + shift;
        return std::array<double, 1>{v};
    };
    const auto res = ode::integrate_dopri5<1>(rhs, {0.0}, t_cap);
    return res.status == ode::Status::BlowUp ? res.t : kInf;
}

double critical_moment(const ModelParams& p, const CgfDomain& domain, double maturity, Side side) {
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw DomainError("critical_moment: maturity must be > 0");
    const double direction = side == Side::Right ? 1.0 : -1.0;
    const double edge = side == Side::Right ? domain.theta_max : domain.theta_min;
    if (!std::isfinite(edge)) return direction * kInf;

    // Moments beyond the edge blow up before T once θ has moved far enough out.
    auto survives = [&](double th) { return blowup_time(p, th) > maturity; };
    double inner = edge;
    double step = 0.5;
    double outer = edge + direction * step;
    while (survives(outer)) {
        inner = outer;
        step *= 2.0;
        outer = edge + direction * step;
        if (step > 1e6) throw NumericalError("critical_moment: could not bracket the critical moment");
    }

    // Blow-up time must fall monotonically moving away from the domain.
    double previous = kInf;
    for (int i = 1; i <= kScanPoints; ++i) {
        const double th = inner + (outer - inner) * static_cast<double>(i) / kScanPoints;
        const double bt = blowup_time(p, th);
        if (bt > previous * (1.0 + 1e-9)) {
            throw NumericalError(fmt::format(
                "critical_moment: blow-up time is not monotone near theta = {} ({} after {})", th, bt, previous));
        }
        previous = bt;
    }

    const auto [in, out] = roots::bisect_boundary(survives, inner, outer, kMomentTolerance);
    return 0.5 * (in + out);
}

double critical_moment(const ModelParams& p, double maturity, Side side) {
    return critical_moment(p, critical_domain(p), maturity, side);
}

double lee_slope(double exponent) {
    if (std::isinf(exponent) && exponent > 0.0) return 0.0;
    if (exponent > 0.0) return 2.0 - 4.0 * exponent / (std::sqrt(exponent * exponent + exponent) + exponent);
    return 2.0 - 4.0 * (std::sqrt(exponent * exponent + exponent) - exponent);
}

WingResult wing_slope(const ModelParams& p, const CgfDomain& domain, double maturity, Side side) {
    WingResult out;
    out.maturity = maturity;
    out.side = side;
    out.critical_moment = critical_moment(p, domain, maturity, side);
    out.lee_exponent = side == Side::Right ? out.critical_moment - 1.0 : -out.critical_moment;
    out.regime_warning = out.lee_exponent < 0.0;
    out.slope = lee_slope(out.lee_exponent);
    out.ratio = out.slope / maturity;
    return out;
}

WingResult wing_slope(const ModelParams& p, double maturity, Side side) {
    return wing_slope(p, critical_domain(p), maturity, side);
}

std::vector<WingResult> wing_table(const ModelParams& p, std::span<const double> maturities, Side side) {
    const CgfDomain domain = critical_domain(p);
    std::vector<WingResult> out(maturities.size());
    parallel_for(maturities.size(), [&](std::size_t i) { out[i] = wing_slope(p, domain, maturities[i], side); });
    return out;
}

std::vector<WingResult> wing_table_serial(const ModelParams& p, std::span<const double> maturities, Side side) {
    const CgfDomain domain = critical_domain(p);
    std::vector<WingResult> out;
    out.reserve(maturities.size());
    for (double t : maturities) out.push_back(wing_slope(p, domain, t, side));
    return out;
}

}  // namespace affine_smile
