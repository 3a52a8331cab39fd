#pragma once

#include <span>
#include <vector>

#include "affine_smile/cumulant.hpp"
#include "affine_smile/ldp.hpp"
#include "affine_smile/model.hpp"

namespace affine_smile {

enum class Side { Right, Left };

const char* to_string(Side side);

/// Fixed-maturity wing: the critical exponential moment at T and the Lee slope it implies.
struct WingResult {
    double maturity = 0.0;
    Side side = Side::Right;
    double critical_moment = 0.0;  ///< p* (Right) or q* (Left)
    double lee_exponent = 0.0;     ///< p̃ = p* − 1 or q̃ = −q*
    double slope = 0.0;            ///< limsup σ²_BS(k,T)·T/|k| ∈ [0, 2]
    double ratio = 0.0;            ///< slope / T, i.e. limsup σ²_BS/|k|
    bool regime_warning = false;   ///< set when the exponent is negative
};

/// Large-maturity implied variance σ∞²(x) from a prepared rate function.
class Smile {
public:
    explicit Smile(ModelParams params);

    const RateFunction& rate_function() const { return rate_; }
    const XBoundaries& boundaries() const { return bounds_; }

    double operator()(double x) const;

    /// σ∞² from a precomputed I(x).
    double from_rate(double x, double rate) const;

private:
    RateFunction rate_;
    XBoundaries bounds_;
};

double sigma_inf_sq(const ModelParams& p, double x);

/// σ∞² over a grid (OpenMP); serial twin below.
std::vector<double> sigma_inf_sq_curve(const Smile& smile, std::span<const double> xs);
std::vector<double> sigma_inf_sq_curve_serial(const Smile& smile, std::span<const double> xs);

/// ∫₀^∞ dD/Γ(D, θ): the time at which D̄(·; θ) explodes; +∞ when Γ(·, θ) has a root.
double blowup_time(const ModelParams& p, double theta);

/// Blow-up time observed by integrating D̄' = Γ(D̄, θ) directly; +∞ if no blow-up
/// happens before t_cap.
double blowup_time_ode(const ModelParams& p, double theta, double t_cap = 1e6);

/// Critical moment of E[e^{θ X_T}] beyond the domain edge on `side`; ±∞ when that
/// side of the domain is unbounded.
double critical_moment(const ModelParams& p, const CgfDomain& domain, double maturity, Side side);
double critical_moment(const ModelParams& p, double maturity, Side side);

/// 2 − 4(√(e² + e) − e), read as 0 for e = ∞.
double lee_slope(double exponent);

WingResult wing_slope(const ModelParams& p, const CgfDomain& domain, double maturity, Side side);
WingResult wing_slope(const ModelParams& p, double maturity, Side side);

/// Wing results for every maturity (OpenMP); serial twin below.
std::vector<WingResult> wing_table(const ModelParams& p, std::span<const double> maturities, Side side);
std::vector<WingResult> wing_table_serial(const ModelParams& p, std::span<const double> maturities, Side side);

}  // namespace affine_smile
