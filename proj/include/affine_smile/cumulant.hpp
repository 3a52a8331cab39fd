#pragma once

#include <optional>

#include "affine_smile/model.hpp"

namespace affine_smile {

enum class CaseTag { CaseOne, CaseTwo, Unbounded };

const char* to_string(CaseTag tag);

/// Effective domain {θ : Λ(θ) < ∞} = {θ : G(θ) ≤ 0}. Endpoints may be ±∞.
struct CgfDomain {
    double theta_min = 0.0;
    double theta_max = 0.0;
    CaseTag case_tag = CaseTag::Unbounded;
    std::optional<double> theta_c;  ///< argmin of G when it exists

    bool contains(double theta) const { return theta >= theta_min && theta <= theta_max; }
    bool right_bounded() const;
    bool left_bounded() const;
};

/// Forward Riccati state (D̄, F̄) at time t.
struct OdeState {
    double t = 0.0;
    double D = 0.0;
    double F = 0.0;
};

/// Γ(y, θ) = −b y + ½σ_λ² y² + β(E[e^{ay+θY}] − 1) − θκβ, the right-hand side of
/// the D̄ equation.
double gamma_fn(const ModelParams& p, double y, double theta);

/// ∂Γ/∂y.
double gamma_dy(const ModelParams& p, double y, double theta);

/// y_c(θ): the unique zero of ∂Γ/∂y.
double gamma_critical_point(const ModelParams& p, double theta);

/// G(θ) = Γ(y_c(θ), θ) = min_y Γ(y, θ).
double gamma_minimum(const ModelParams& p, double theta);

/// G'(θ) = β(e^{a y_c} E[Y e^{θY}] − κ).
double gamma_minimum_deriv(const ModelParams& p, double theta);

/// Smaller real root of Γ(·, θ), or +∞ when Γ(·, θ) has no root.
double gamma_smaller_root(const ModelParams& p, double theta);

/// Probe used to decide whether a side of the domain is unbounded.
inline constexpr double kDomainProbe = 50.0;
/// Bisection tolerance on the domain endpoints.
inline constexpr double kDomainTolerance = 1e-10;

CgfDomain critical_domain(const ModelParams& p);

/// Λ(θ) = lim (1/t) log E[e^{θ X_t}]; +∞ outside the domain.
double limiting_cgf(const ModelParams& p, double theta);

/// Analytic Λ'(θ). Throws DomainError unless θ lies strictly inside the domain.
double limiting_cgf_deriv(const ModelParams& p, double theta);

struct RiccatiSolution {
    OdeState state;
    bool blew_up = false;
};

/// Integrates D̄' = Γ(D̄, θ), F̄' = bc D̄ + α(E[e^{aD̄+θY}] − 1) from (0, 0) up to
/// t, stopping early if D̄ blows up.
RiccatiSolution integrate_riccati(const ModelParams& p, double t, double theta);

/// E[e^{θ X_t}] with λ_0 = lambda0 and L_0 = 0; +∞ if D̄ blows up before t.
double finite_time_mgf(const ModelParams& p, double t, double theta, double lambda0);

/// Same, with λ_0 = p.lambda0.
double finite_time_mgf(const ModelParams& p, double t, double theta);

}  // namespace affine_smile
