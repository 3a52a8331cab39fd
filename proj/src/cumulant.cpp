#include "affine_smile/cumulant.hpp"

#include "affine_smile/errors.hpp"
#include "affine_smile/ode.hpp"
#include "affine_smile/roots.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <limits>

namespace affine_smile {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Γ(·, θ) with the θ-dependent pieces evaluated once.
struct GammaSlice {
    double b, half_s2, s2, a, beta;
    double log_m0;    // log E[e^{θY}]
    double constant;  // −β − θκβ

    GammaSlice(const ModelParams& p, double theta)
        : b(p.b),
          half_s2(0.5 * p.sigma_lam_sq),
          s2(p.sigma_lam_sq),
          a(p.a),
          beta(p.beta),
          log_m0(log_mgf(p.jump, theta)),
          constant(-theta * p.compensator() * p.beta) {}

    double jump_term(double y) const { return std::exp(a * y + log_m0); }
    double value(double y) const { return -b * y + half_s2 * y * y + beta * (jump_term(y) - 1.0) + constant; }
    double slope(double y) const { return -b + s2 * y + a * beta * jump_term(y); }

    /// Zero of slope(): solved as log(aβ) + a y + log m0 = log(b − σ² y), whose
    /// left side increases and right side decreases in y.
    double critical_point() const {
        const double cap = b / s2;
        const double log_ab = std::log(a * beta);
        auto h = [&](double y) -> std::pair<double, double> {
            const double room = b - s2 * y;
            if (room <= 0.0) return {kInf, kInf};
            return {log_ab + a * y + log_m0 - std::log(room), a + s2 / room};
        };
        double lo = std::min(0.0, (std::log(b) - log_ab - log_m0) / a) - 1.0;
        double step = 1.0;
        while (h(lo).first > 0.0) {
            step *= 2.0;
            lo -= step;
        }
        return roots::newton_bisect(h, lo, cap, 1e-15 * std::max(1.0, std::abs(lo)));
    }
};

bool theta_free(const ModelParams& p) { return is_degenerate_zero(p.jump) && p.compensator() == 0.0; }

double smaller_root(const GammaSlice& g) {
    const double yc = g.critical_point();
    const double g_min = g.value(yc);
    if (g_min > 0.0) return kInf;
    if (g_min == 0.0) return yc;
    if (g.value(0.0) == 0.0 && 0.0 < yc) return 0.0;

    const double anchor = std::min(0.0, yc);
    double step = 1.0;
    double lo = anchor - step;
    while (g.value(lo) <= 0.0) {
        step *= 2.0;
        lo = anchor - step;
    }
    auto fdf = [&g](double y) { return std::pair{g.value(y), g.slope(y)}; };
    return roots::newton_bisect(fdf, lo, yc, 1e-14 * std::max(1.0, std::abs(yc)));
}

}  // namespace

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::CaseOne: return "CaseOne";
        case CaseTag::CaseTwo: return "CaseTwo";
        case CaseTag::Unbounded: return "Unbounded";
    }
    return "?";
}

bool CgfDomain::right_bounded() const { return std::isfinite(theta_max); }
bool CgfDomain::left_bounded() const { return std::isfinite(theta_min); }

double gamma_fn(const ModelParams& p, double y, double theta) {
    const double v = GammaSlice(p, theta).value(y);
    if (std::isinf(v) && v > 0.0 && std::isfinite(y)) throw RangeError("gamma_fn: overflow");
    return v;
}

double gamma_dy(const ModelParams& p, double y, double theta) { return GammaSlice(p, theta).slope(y); }

double gamma_critical_point(const ModelParams& p, double theta) { return GammaSlice(p, theta).critical_point(); }

double gamma_minimum(const ModelParams& p, double theta) {
    const GammaSlice g(p, theta);
    return g.value(g.critical_point());
}

double gamma_minimum_deriv(const ModelParams& p, double theta) {
    const GammaSlice g(p, theta);
    const double yc = g.critical_point();
    const double mean = tilted_moments(p.jump, theta).mean;
    return p.beta * (g.jump_term(yc) * mean - p.compensator());
}

double gamma_smaller_root(const ModelParams& p, double theta) { return smaller_root(GammaSlice(p, theta)); }

CgfDomain critical_domain(const ModelParams& p) {
    require_valid(p);
    CgfDomain dom;
    if (theta_free(p)) {
        dom.theta_min = -kInf;
        dom.theta_max = kInf;
        dom.case_tag = CaseTag::Unbounded;
        return dom;
    }

    const double g0 = gamma_minimum(p, 0.0);
    if (g0 > 1e-12) {
        throw NumericalError(fmt::format("critical_domain: G(0) = {} > 0, so 0 would lie outside the domain", g0));
    }
    auto inside = [&p](double th) { return gamma_minimum(p, th) <= 0.0; };

    // Walk outwards from 0 geometrically, then bisect the sign change of G.
    auto endpoint = [&](double direction) {
        if (direction * gamma_minimum_deriv(p, direction * kDomainProbe) <= 0.0) return direction * kInf;
        double in = 0.0;
        double step = 1.0;
        double out = direction * step;
        while (inside(out)) {
            in = out;
            step *= 2.0;
            out = direction * step;
            if (step > 1e12) throw NumericalError("critical_domain: endpoint search diverged");
        }
        return roots::bisect_boundary(inside, in, out, kDomainTolerance).first;
    };

    dom.theta_max = endpoint(+1.0);
    dom.theta_min = endpoint(-1.0);

    if (!dom.right_bounded() && !dom.left_bounded()) {
        dom.case_tag = CaseTag::Unbounded;
    } else if (!dom.right_bounded()) {
        dom.case_tag = CaseTag::CaseOne;
    } else {
        dom.case_tag = CaseTag::CaseTwo;
        if (dom.left_bounded()) {
            auto descending = [&p](double th) { return gamma_minimum_deriv(p, th) < 0.0; };
            const auto [l, r] = roots::bisect_boundary(descending, dom.theta_min, dom.theta_max, kDomainTolerance);
            dom.theta_c = 0.5 * (l + r);
        }
    }
    return dom;
}

double limiting_cgf(const ModelParams& p, double theta) {
    const GammaSlice g(p, theta);
    const double y = smaller_root(g);
    if (!std::isfinite(y)) return kInf;
    return 0.5 * p.sigma_s_sq * theta * theta + p.drift() * theta - p.compensator() * p.alpha * theta +
           p.b * p.c * y + p.alpha * (g.jump_term(y) - 1.0);
}

double limiting_cgf_deriv(const ModelParams& p, double theta) {
    const GammaSlice g(p, theta);
    const double yc = g.critical_point();
    if (!(g.value(yc) < 0.0) && !theta_free(p)) {
        throw DomainError(fmt::format("limiting_cgf_deriv: theta = {} is not inside the domain", theta));
    }
    const double y = smaller_root(g);
    const double denom = g.slope(y);
    if (!(denom < 0.0)) {
        throw DomainError(fmt::format("limiting_cgf_deriv: dy/dtheta diverges at theta = {}", theta));
    }
    const double kappa = p.compensator();
    const double jump = g.jump_term(y);
    const double mean = tilted_moments(p.jump, theta).mean;
    const double dy = p.beta * (kappa - jump * mean) / denom;
    return p.sigma_s_sq * theta + p.drift() - kappa * p.alpha + p.b * p.c * dy + p.alpha * jump * (p.a * dy + mean);
}

RiccatiSolution integrate_riccati(const ModelParams& p, double t, double theta) {
    if (!(t >= 0.0)) throw DomainError("integrate_riccati: t must be >= 0");
    const GammaSlice g(p, theta);
    const double bc = p.b * p.c;
    auto rhs = [&](double, const std::array<double, 2>& s) {
        return std::array<double, 2>{g.value(s[0]), bc * s[0] + p.alpha * (g.jump_term(s[0]) - 1.0)};
    };
    const auto res = ode::integrate_dopri5<2>(rhs, {0.0, 0.0}, t);
    RiccatiSolution out;
    out.state = {res.t, res.y[0], res.y[1]};
    out.blew_up = res.status == ode::Status::BlowUp;
    return out;
}

double finite_time_mgf(const ModelParams& p, double t, double theta, double lambda0) {
    require_valid(p);
    if (!(t >= 0.0)) throw DomainError("finite_time_mgf: t must be >= 0");
    if (!(lambda0 >= 0.0)) throw DomainError("finite_time_mgf: lambda0 must be >= 0");
    if (t == 0.0) return 1.0;
    const auto sol = integrate_riccati(p, t, theta);
    if (sol.blew_up) return kInf;
    const double linear =
        (p.drift() * theta + 0.5 * p.sigma_s_sq * theta * theta - theta * p.compensator() * p.alpha) * t;
    return std::exp(linear + sol.state.D * lambda0 + sol.state.F);
}

double finite_time_mgf(const ModelParams& p, double t, double theta) {
    return finite_time_mgf(p, t, theta, p.lambda0);
}

}  // namespace affine_smile
