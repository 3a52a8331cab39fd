#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "affine_smile/cumulant.hpp"
#include "affine_smile/errors.hpp"
#include "oracles.hpp"

using namespace affine_smile;

namespace {

ModelParams bs_params() {
    auto p = reference_params();
    p.jump = ConstantJump{0.0};
    return p;
}

}  // namespace

TEST(Gamma, FixedPoints) {
    const auto p = reference_params();
    EXPECT_EQ(gamma_fn(p, 0.0, 0.0), 0.0);
    EXPECT_NEAR(gamma_fn(p, 0.0, 1.0), 0.0, 1e-16);
    for (double y : {-1.0, 0.3, 2.0})
        for (double th : {-2.0, 0.5, 3.0}) EXPECT_NEAR(gamma_fn(p, y, th), oracle::gamma_gaussian(p, y, th), 1e-13);
}

TEST(Gamma, ThetaFreeForZeroJumps) {
    const auto p = bs_params();
    for (double y : {-0.5, 0.0, 1.5}) {
        const double ref = gamma_fn(p, y, 0.0);
        for (double th : {-10.0, 3.0, 40.0}) EXPECT_EQ(gamma_fn(p, y, th), ref);
    }
}

TEST(Gamma, ConvexInY) {
    const auto p = reference_params();
    for (double th : {-4.0, 0.0, 2.0, 4.5})
        for (double y = -3.0; y < 4.0; y += 0.1) {
            const double h = 1e-3;
            const double second = gamma_fn(p, y - h, th) - 2 * gamma_fn(p, y, th) + gamma_fn(p, y + h, th);
            EXPECT_GT(second, 0.0);
        }
}

TEST(Gamma, DerivativesAgainstFiniteDifferences) {
    const auto p = reference_params();
    for (double th : {-3.0, 0.5, 4.0}) {
        const double yc = gamma_critical_point(p, th);
        EXPECT_NEAR(gamma_dy(p, yc, th), 0.0, 1e-12);
        EXPECT_NEAR(gamma_dy(p, 0.7, th), oracle::central_diff([&](double y) { return gamma_fn(p, y, th); }, 0.7, 1e-5),
                    1e-8);
        EXPECT_NEAR(gamma_minimum(p, th), gamma_fn(p, yc, th), 1e-15);
        EXPECT_NEAR(gamma_minimum_deriv(p, th),
                    oracle::central_diff([&](double t) { return gamma_minimum(p, t); }, th, 1e-5), 1e-7);
    }
}

TEST(SmallerRoot, Examples) {
    const auto p = reference_params();
    EXPECT_EQ(gamma_smaller_root(p, 0.0), 0.0);
    EXPECT_NEAR(gamma_smaller_root(p, 1.0), 0.0, 1e-12);
    const auto dom = critical_domain(p);
    EXPECT_EQ(gamma_smaller_root(p, dom.theta_max + 0.01), std::numeric_limits<double>::infinity());
    EXPECT_EQ(gamma_smaller_root(p, dom.theta_min - 0.01), std::numeric_limits<double>::infinity());
}

TEST(SmallerRoot, Certificate) {
    const auto p = reference_params();
    const auto dom = critical_domain(p);
    for (int i = 0; i <= 60; ++i) {
        const double th = dom.theta_min + (dom.theta_max - dom.theta_min) * i / 60.0;
        const double y = gamma_smaller_root(p, th);
        ASSERT_TRUE(std::isfinite(y)) << th;
        EXPECT_LE(gamma_fn(p, y, th), 1e-10);
        EXPECT_LE(gamma_dy(p, y, th), 1e-9);
    }
}

TEST(SmallerRoot, MatchesGridScan) {
    // the first sign change of Γ(·, θ) on a fine grid approximates the smaller root
    const auto p = reference_params();
    for (double th : {-3.0, -0.5, 0.5, 2.0, 4.0}) {
        const double y = gamma_smaller_root(p, th);
        double prev = gamma_fn(p, -5.0, th);
        double scan = std::numeric_limits<double>::quiet_NaN();
        for (int i = 1; i <= 900000; ++i) {
            const double yy = -5.0 + i * 1e-5;
            const double v = gamma_fn(p, yy, th);
            if ((prev > 0) != (v > 0) || v == 0.0) {
                scan = yy;
                break;
            }
            prev = v;
        }
        EXPECT_NEAR(y, scan, 2e-5) << th;
    }
}

TEST(Domain, ReferenceParams) {
    const auto p = reference_params();
    const auto dom = critical_domain(p);
    EXPECT_EQ(dom.case_tag, CaseTag::CaseTwo);
    EXPECT_LE(dom.theta_min, 0.0);
    EXPECT_GT(dom.theta_max, 1.0);
    EXPECT_TRUE(dom.right_bounded());
    EXPECT_TRUE(dom.left_bounded());
    ASSERT_TRUE(dom.theta_c.has_value());
    EXPECT_NEAR(gamma_minimum_deriv(p, *dom.theta_c), 0.0, 1e-9);
    // endpoints are zeros of G, located on the G ≤ 0 side
    EXPECT_LE(gamma_minimum(p, dom.theta_max), 0.0);
    EXPECT_GT(gamma_minimum(p, dom.theta_max + 1e-9), 0.0);
    EXPECT_LE(gamma_minimum(p, dom.theta_min), 0.0);
    EXPECT_GT(gamma_minimum(p, dom.theta_min - 1e-9), 0.0);
}

TEST(Domain, DenseScanOracle) {
    const auto p = reference_params();
    const auto dom = critical_domain(p);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= 200000; ++i) {
        const double th = -10.0 + i * 1e-4;
        if (gamma_minimum(p, th) <= 0.0) {
            lo = std::min(lo, th);
            hi = std::max(hi, th);
        }
    }
    EXPECT_NEAR(dom.theta_min, lo, 1e-4);
    EXPECT_NEAR(dom.theta_max, hi, 1e-4);
}

TEST(Domain, ZeroJumpsUnbounded) {
    const auto dom = critical_domain(bs_params());
    EXPECT_EQ(dom.case_tag, CaseTag::Unbounded);
    EXPECT_TRUE(std::isinf(dom.theta_min) && dom.theta_min < 0);
    EXPECT_TRUE(std::isinf(dom.theta_max) && dom.theta_max > 0);
}

TEST(Domain, ContainsZeroAndOneAcrossParams) {
    for (double a : {0.05, 0.5, 1.0})
        for (double beta : {0.1, 0.25, 0.5}) {
            auto p = reference_params();
            p.a = a;
            p.beta = beta;
            const auto dom = critical_domain(p);
            EXPECT_TRUE(dom.contains(0.0) && dom.contains(1.0)) << a << " " << beta;
            if (dom.case_tag == CaseTag::CaseOne) {
                EXPECT_TRUE(std::isinf(dom.theta_max));
            }
        }
}

TEST(Domain, MixtureMatchesDenseScan) {
    auto p = reference_params();
    p.jump = MixtureJump{{{0.5, 0.1}, {0.5, 0.3}}};
    const auto dom = critical_domain(p);
    EXPECT_EQ(dom.case_tag, CaseTag::CaseTwo);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= 150000; ++i) {
        const double th = -120.0 + i * 1.2e-3;
        if (gamma_minimum(p, th) <= 0.0) {
            lo = std::min(lo, th);
            hi = std::max(hi, th);
        }
    }
    EXPECT_NEAR(dom.theta_min, lo, 1.2e-3);
    EXPECT_NEAR(dom.theta_max, hi, 1.2e-3);
}

TEST(Lambda, Normalisation) {
    const auto p = reference_params();
    EXPECT_NEAR(limiting_cgf(p, 0.0), 0.0, 1e-10);
    EXPECT_NEAR(limiting_cgf(p, 1.0), 0.0, 1e-10);
    const auto dom = critical_domain(p);
    EXPECT_EQ(limiting_cgf(p, dom.theta_max + 0.1), std::numeric_limits<double>::infinity());
}

TEST(Lambda, ClosedFormWithoutJumps) {
    const auto p = bs_params();
    for (double th : {-20.0, -1.0, 0.3, 7.0})
        EXPECT_NEAR(limiting_cgf(p, th), 0.5 * p.sigma_s_sq * (th * th - th), 1e-12);
}

TEST(Lambda, ConvexOnGrid) {
    const auto p = reference_params();
    const auto dom = critical_domain(p);
    const int n = 400;
    const double lo = dom.theta_min + 1e-6, hi = dom.theta_max - 1e-6;
    const double h = (hi - lo) / n;
    for (int i = 1; i < n; ++i) {
        const double th = lo + i * h;
        EXPECT_GE(limiting_cgf(p, th - h) - 2 * limiting_cgf(p, th) + limiting_cgf(p, th + h), -1e-8);
    }
}

TEST(Lambda, DerivativeAgainstFiniteDifferences) {
    const auto p = reference_params();
    for (double th : {-4.0, -1.0, 0.0, 0.5, 1.0, 3.0, 4.5})
        EXPECT_NEAR(limiting_cgf_deriv(p, th),
                    oracle::central_diff([&](double t) { return limiting_cgf(p, t); }, th, 1e-5), 1e-7)
            << th;
    EXPECT_THROW(limiting_cgf_deriv(p, 100.0), DomainError);
}

TEST(Lambda, IndependentOfLambda0) {
    auto p = reference_params();
    const double ref = limiting_cgf(p, 2.0);
    p.lambda0 = 3.0;
    EXPECT_EQ(limiting_cgf(p, 2.0), ref);
}

TEST(Lambda, ShareMeasureIdentity) {
    const auto p = reference_params();
    const auto q = tilt_share_measure(p);
    for (double th : {-0.5, 0.0, 0.5}) EXPECT_NEAR(limiting_cgf(q, th), limiting_cgf(p, th + 1.0), 1e-8);
}

TEST(FiniteMgf, TrivialCases) {
    const auto p = reference_params();
    EXPECT_EQ(finite_time_mgf(p, 0.0, 2.5), 1.0);
    for (double t : {0.1, 1.0, 30.0}) EXPECT_EQ(finite_time_mgf(p, t, 0.0), 1.0);
}

TEST(FiniteMgf, AgainstRk4) {
    const auto p = reference_params();
    for (double th : {-0.5, 0.5, 1.5, 3.0})
        for (double t : {0.5, 1.0, 5.0}) {
            const double ref = oracle::rk4_mgf(p, t, th, 20000);
            EXPECT_NEAR(finite_time_mgf(p, t, th), ref, 1e-9 * ref) << th << " " << t;
        }
}

TEST(FiniteMgf, MartingaleAtOne) {
    const auto p = reference_params();
    for (double t : {0.5, 1.0, 10.0}) EXPECT_NEAR(finite_time_mgf(p, t, 1.0), 1.0, 1e-9);
}

TEST(FiniteMgf, BlowUpBeyondCriticalMoment) {
    const auto p = reference_params();
    EXPECT_EQ(finite_time_mgf(p, 10.0, 8.0), std::numeric_limits<double>::infinity());
    EXPECT_TRUE(std::isfinite(finite_time_mgf(p, 0.1, 8.0)));
}

TEST(FiniteMgf, MonotoneInLambda0) {
    const auto p = reference_params();
    for (double th : {-1.0, 2.0}) {
        const auto sol = integrate_riccati(p, 2.0, th);
        ASSERT_GT(sol.state.D, 0.0);
        double prev = 0.0;
        for (double l0 : {0.0, 0.05, 0.5, 2.0}) {
            const double v = finite_time_mgf(p, 2.0, th, l0);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(FiniteMgf, ConvergesAtRateOneOverT) {
    // (1/t)log M(t) − Λ ≈ C/t, so the t = 200 gap is about half the t = 100 gap
    const auto p = reference_params();
    for (double th : {-0.5, 0.5, 1.5}) {
        const double lam = limiting_cgf(p, th);
        const double g100 = std::log(finite_time_mgf(p, 100.0, th)) / 100.0 - lam;
        const double g200 = std::log(finite_time_mgf(p, 200.0, th)) / 200.0 - lam;
        EXPECT_LT(std::abs(g200), 10 * 0.5 * std::abs(g100)) << th;
        EXPECT_NEAR(g200 / g100, 0.5, 0.05) << th;
    }
}
