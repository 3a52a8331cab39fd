#include <gtest/gtest.h>

#include <cmath>

#include "affine_smile/cumulant.hpp"
#include "affine_smile/errors.hpp"
#include "affine_smile/ldp.hpp"
#include "oracles.hpp"

using namespace affine_smile;

namespace {

ModelParams bs_params() {
    auto p = reference_params();
    p.jump = ConstantJump{0.0};
    return p;
}

}  // namespace

TEST(XBoundaries, MatchDerivative) {
    const auto p = reference_params();
    const auto xb = x_boundaries(p);
    EXPECT_LT(xb.x_left, xb.x_right);
    EXPECT_NEAR(xb.x_left, limiting_cgf_deriv(p, 0.0), 1e-8);
    EXPECT_NEAR(xb.x_right, limiting_cgf_deriv(p, 1.0), 1e-8);
    EXPECT_NEAR(xb.x_right, limiting_cgf_deriv(tilt_share_measure(p), 0.0), 1e-8);
    // finite differences of Λ at 0 and of Λ̄ at 0
    const auto q = tilt_share_measure(p);
    EXPECT_NEAR(xb.x_left, oracle::central_diff([&](double t) { return limiting_cgf(p, t); }, 0.0, 1e-5), 1e-8);
    EXPECT_NEAR(xb.x_right, oracle::central_diff([&](double t) { return limiting_cgf(q, t); }, 0.0, 1e-5), 1e-8);
}

TEST(XBoundaries, ZeroJumps) {
    const auto xb = x_boundaries(bs_params());
    EXPECT_NEAR(xb.x_left, -0.05, 1e-15);
    EXPECT_NEAR(xb.x_right, 0.05, 1e-15);
}

TEST(XBoundaries, TiltedRegimeError) {
    auto p = reference_params();
    p.jump = ConstantJump{1.0};
    p.a = 1.0;
    p.beta = 0.5;
    EXPECT_THROW(x_boundaries(p), ModelRegimeError);
}

TEST(RateI, BoundaryValues) {
    const auto p = reference_params();
    const auto xb = x_boundaries(p);
    const auto l = rate_I(p, xb.x_left);
    EXPECT_LT(l.value, 1e-9);
    EXPECT_NEAR(l.theta_star, 0.0, 1e-6);
    const auto r = rate_I(p, xb.x_right);
    EXPECT_LT(std::abs(r.value - xb.x_right), 1e-9);
    EXPECT_NEAR(r.theta_star, 1.0, 1e-6);
    EXPECT_NEAR(rate_I_bar(p, xb.x_right).value, 0.0, 1e-9);
    EXPECT_NEAR(rate_I_bar(p, xb.x_left).value, -xb.x_left, 1e-9);
}

TEST(RateI, ZeroJumpsClosedForm) {
    const auto p = bs_params();
    const RateFunction rf(p);
    for (double x = -3.0; x <= 3.0; x += 0.05) {
        const double want = (x + 0.05) * (x + 0.05) / (2 * 0.1);
        EXPECT_NEAR(rf.rate(x).value, want, 1e-8 * std::max(1.0, want)) << x;
    }
}

TEST(RateI, BruteForceGridSup) {
    const auto p = reference_params();
    const auto dom = critical_domain(p);
    const auto xb = x_boundaries(p);
    const RateFunction rf(p);
    auto lam = [&](double th) { return limiting_cgf(p, th); };
    for (int i = 0; i <= 10; ++i) {
        const double x = xb.x_left - 0.2 + (xb.x_right - xb.x_left + 0.4) * i / 10.0;
        const double brute = oracle::grid_sup(lam, x, dom.theta_min, dom.theta_max, 10000);
        EXPECT_NEAR(rf.rate(x).value, brute, 1e-6) << x;
    }
}

TEST(RateI, PointInvariants) {
    const auto p = reference_params();
    const RateFunction rf(p);
    double prev_theta = -1e300;
    for (double x : default_x_grid(p)) {
        const auto pt = rf.rate(x);
        EXPECT_GE(pt.value, std::max(0.0, x) - 1e-10);
        EXPECT_NEAR(pt.value, pt.theta_star * x - limiting_cgf(p, pt.theta_star), 1e-9);
        EXPECT_GE(pt.theta_star, prev_theta);
        prev_theta = pt.theta_star;
    }
}

TEST(RateI, SteepNearTheEdges) {
    // Λ' grows without bound at the domain edges, so θ* creeps towards them
    const auto p = reference_params();
    const RateFunction rf(p);
    const auto& dom = rf.domain();
    const auto at50 = rf.rate(50.0);
    EXPECT_FALSE(at50.boundary_attained);
    EXPECT_LT(at50.theta_star, dom.theta_max);
    EXPECT_GT(at50.theta_star, dom.theta_max - 0.01);
    const auto far = rf.rate(1e7);
    EXPECT_TRUE(far.boundary_attained);
    EXPECT_NEAR(far.theta_star, dom.theta_max, 1e-8);
    EXPECT_NEAR(far.value, far.theta_star * 1e7 - limiting_cgf(p, far.theta_star), 1e-9 * 1e7);
    const auto left = rf.rate(-1e7);
    EXPECT_TRUE(left.boundary_attained);
    EXPECT_NEAR(left.theta_star, dom.theta_min, 1e-8);
    EXPECT_FALSE(rf.rate(0.0).boundary_attained);
}

TEST(RateCurve, ConvexAndOrdered) {
    const auto p = reference_params();
    const RateFunction rf(p);
    const auto xs = default_x_grid(p);
    EXPECT_EQ(xs.size(), 201u);
    const auto curve = rate_curve(rf, xs);
    EXPECT_EQ(curve.params_digest, params_digest(p));
    for (std::size_t i = 1; i < curve.points.size(); ++i) EXPECT_GT(curve.points[i].x, curve.points[i - 1].x);
    for (std::size_t i = 1; i + 1 < curve.points.size(); ++i)
        EXPECT_GE(curve.points[i - 1].value - 2 * curve.points[i].value + curve.points[i + 1].value, -1e-8);
}

TEST(RateCurve, ParallelMatchesSerial) {
    const auto p = reference_params();
    const RateFunction rf(p);
    const auto xs = default_x_grid(p);
    for (auto kind : {RateKind::I, RateKind::IBar}) {
        const auto a = rate_curve(rf, xs, kind);
        const auto b = rate_curve_serial(rf, xs, kind);
        ASSERT_EQ(a.points.size(), b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            EXPECT_EQ(a.points[i].value, b.points[i].value);
            EXPECT_EQ(a.points[i].theta_star, b.points[i].theta_star);
        }
    }
}

TEST(RateIBar, ShareMeasureDuality) {
    const auto p = reference_params();
    const auto q = tilt_share_measure(p);
    const RateFunction rf(p);
    const RateFunction tilted(q);
    for (double x : {-0.3, -0.1, 0.0, 0.05, 0.2, 0.4}) {
        const auto direct = rf.rate_bar(x);
        const auto via_tilt = tilted.rate(x);
        EXPECT_NEAR(direct.value, via_tilt.value, 1e-7) << x;
        EXPECT_NEAR(direct.theta_star, via_tilt.theta_star, 1e-6) << x;
    }
    EXPECT_NEAR(rf.rate_bar(0.0).value, rate_I(q, 0.0).value, 1e-7);
}

TEST(RateIBar, EqualsIMinusX) {
    const auto p = reference_params();
    const RateFunction rf(p);
    for (double x : {-1.0, 0.0, 0.7}) EXPECT_DOUBLE_EQ(rf.rate_bar(x).value, rf.rate(x).value - x);
}

TEST(Grid, Linspace) {
    const auto g = linspace(-1.0, 1.0, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), -1.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_EQ(g[2], 0.0);
}
