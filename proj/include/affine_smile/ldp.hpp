#pragma once

#include <span>
#include <string>
#include <vector>

#include "affine_smile/cumulant.hpp"
#include "affine_smile/model.hpp"

namespace affine_smile {

/// One evaluation of a rate function: value = θ*·x − Λ(θ*).
struct RatePoint {
    double x = 0.0;
    double value = 0.0;
    double theta_star = 0.0;
    /// The supremum is approached at a domain endpoint and evaluated there.
    bool boundary_attained = false;
};

struct RateCurve {
    std::vector<RatePoint> points;
    std::string params_digest;
};

struct XBoundaries {
    double x_left = 0.0;   ///< x_L = Λ'(0), the zero of I
    double x_right = 0.0;  ///< x_R = Λ'(1), the zero of Ī
};

enum class RateKind { I, IBar };

/// Legendre transform of Λ for a fixed parameter set; the domain is computed once.
class RateFunction {
public:
    explicit RateFunction(ModelParams params);

    const ModelParams& params() const { return params_; }
    const CgfDomain& domain() const { return domain_; }

    /// I(x) = sup_θ {θx − Λ(θ)}.
    RatePoint rate(double x) const;
    /// Ī(x) = I(x) − x; theta_star is the maximiser for Λ̄(θ) = Λ(θ + 1).
    RatePoint rate_bar(double x) const;
    RatePoint evaluate(double x, RateKind kind) const;

private:
    double slope_at(double theta) const;

    ModelParams params_;
    CgfDomain domain_;
};

RatePoint rate_I(const ModelParams& p, double x);
RatePoint rate_I_bar(const ModelParams& p, double x);

/// Closed forms for x_L and x_R. Throws ModelRegimeError when aβE[e^Y] ≥ b, where
/// y(1) = 0 stops being the smaller root.
XBoundaries x_boundaries(const ModelParams& p);

/// Uniform grid on [x_L − W, x_R + W] with W = max(0.5, 3(x_R − x_L)).
std::vector<double> default_x_grid(const ModelParams& p, std::size_t points = 201);

std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Point-wise evaluation over `xs` (OpenMP). Output order follows `xs`.
RateCurve rate_curve(const RateFunction& rf, std::span<const double> xs, RateKind kind = RateKind::I);

/// Serial reference for rate_curve.
RateCurve rate_curve_serial(const RateFunction& rf, std::span<const double> xs, RateKind kind = RateKind::I);

}  // namespace affine_smile
