#pragma once

#include <string>
#include <variant>
#include <vector>

namespace affine_smile {

struct GaussianJump {
    double mean = 0.0;
    double variance = 0.0;
};

struct ConstantJump {
    double value = 0.0;
};

struct MixtureAtom {
    double weight = 0.0;
    double value = 0.0;
};

struct MixtureJump {
    std::vector<MixtureAtom> atoms;
};

/// Jump-size law Q(dy). Every variant has finite exponential moments of all orders.
using JumpLaw = std::variant<GaussianJump, ConstantJump, MixtureJump>;

/// Exponentially tilted moments (E[e^{θY}], E[Y e^{θY}], E[Y² e^{θY}]).
struct ExpMoments {
    double m0 = 1.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

/// The same moments in overflow-safe form: log m0 plus the first two moments of
/// the tilted law (m1/m0 and m2/m0).
struct TiltedMoments {
    double log_m0 = 0.0;
    double mean = 0.0;
    double second = 0.0;
};

TiltedMoments tilted_moments(const JumpLaw& law, double theta);

/// log E[e^{θY}].
double log_mgf(const JumpLaw& law, double theta);

/// Throws RangeError if m0 (or the scaled moments) overflow.
ExpMoments jump_exp_moments(const JumpLaw& law, double theta);

/// μ_Y = E[e^Y] − 1.
double mu_y(const JumpLaw& law);

/// Law with density e^{shift·y}/E[e^{shift·Y}] against Q.
JumpLaw tilt_law(const JumpLaw& law, double shift);

/// True when Y ≡ 0 almost surely, so θ drops out of every jump term.
bool is_degenerate_zero(const JumpLaw& law);

enum class Measure { RiskNeutral, Share };

struct ModelParams {
    double a = 0.5;             ///< intensity jump on each event
    double b = 1.0;             ///< mean-reversion speed of λ
    double c = 0.05;            ///< mean-reversion level of λ
    double alpha = 1.0;         ///< baseline event intensity
    double beta = 0.25;         ///< loading of λ in λ^N = α + βλ
    double sigma_s_sq = 0.1;    ///< stock diffusion variance
    double sigma_lam_sq = 0.1;  ///< intensity diffusion variance
    double lambda0 = 0.05;      ///< initial intensity
    JumpLaw jump = GaussianJump{0.0, 0.1};

    /// Measure under which X is described. Share parameters come from
    /// tilt_share_measure and remember E[e^Y] of the original law.
    Measure measure = Measure::RiskNeutral;
    double share_mass = 1.0;

    /// Coefficient of t in X: −½σ_s² under the pricing measure, +½σ_s² under the share measure.
    double drift() const;
    /// κ in the compensator −κ∫λ^N ds of X.
    double compensator() const;
};

/// Parameters used in the numerical study: a = 0.5, β = 0.25, b = 1, c = 0.05,
/// α = 1, σ_s² = σ_λ² = 0.1, Y ~ N(0, 0.1), λ0 = c.
ModelParams reference_params();

struct Violation {
    std::string rule;
    std::string message;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

/// Rule identifiers: "finite", "positivity", "stationarity", "nonnegativity",
/// "lambda0", "jump_law".
ValidationReport validate_params(const ModelParams& p);

/// Throws ValidationError listing every violation.
void require_valid(const ModelParams& p);

/// Parameters under the share measure dQ̄/dQ = S_t/S_0. Rejects invalid or
/// already-tilted input. The result may itself fail validation (b > aβ̄); callers
/// that need it valid should check.
ModelParams tilt_share_measure(const ModelParams& p);

std::string describe(const JumpLaw& law);

/// Stable hex identifier of every field (SHA-256 prefix).
std::string params_digest(const ModelParams& p);

}  // namespace affine_smile
