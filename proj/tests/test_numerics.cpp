#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "affine_smile/errors.hpp"
#include "affine_smile/ode.hpp"
#include "affine_smile/parallel.hpp"
#include "affine_smile/philox.hpp"
#include "affine_smile/roots.hpp"

using namespace affine_smile;

// Known-answer vectors from the Random123 distribution (kat_vectors, philox4x32 10 rounds).
TEST(Philox, KnownAnswers) {
    constexpr auto zero = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    static_assert(zero[0] == 0x6627e8d5u);
    EXPECT_EQ(zero, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    const auto ones = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                           {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(ones, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    const auto pi = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                         {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(pi, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, OpenUnitInterval) {
    EXPECT_GT(Philox4x32::to_open_unit(0u), 0.0);
    EXPECT_LT(Philox4x32::to_open_unit(0xffffffffu), 1.0);
    const auto key = Philox4x32::key_from_seed(0x0123456789abcdefULL);
    EXPECT_EQ(key[0], 0x89abcdefu);
    EXPECT_EQ(key[1], 0x01234567u);
}

TEST(Philox, UniformMoments) {
    double s = 0.0, s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto w = Philox4x32::generate({static_cast<std::uint32_t>(i), 7, 0, 0}, {42, 0});
        for (auto x : w) {
            const double u = Philox4x32::to_open_unit(x);
            s += u;
            s2 += u * u;
        }
    }
    const double m = s / (4.0 * n);
    EXPECT_NEAR(m, 0.5, 4 * std::sqrt(1.0 / 12 / (4.0 * n)));
    EXPECT_NEAR(s2 / (4.0 * n) - m * m, 1.0 / 12, 2e-3);
}

TEST(Dopri5, ExponentialDecay) {
    auto rhs = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{-2.0 * y[0]}; };
    const auto r = ode::integrate_dopri5<1>(rhs, {1.0}, 3.0);
    EXPECT_EQ(r.status, ode::Status::Completed);
    EXPECT_DOUBLE_EQ(r.t, 3.0);
    EXPECT_NEAR(r.y[0], std::exp(-6.0), 1e-11);
}

TEST(Dopri5, Oscillator) {
    auto rhs = [](double, const std::array<double, 2>& y) { return std::array<double, 2>{y[1], -y[0]}; };
    const auto r = ode::integrate_dopri5<2>(rhs, {1.0, 0.0}, 10.0);
    EXPECT_NEAR(r.y[0], std::cos(10.0), 1e-8);
    EXPECT_NEAR(r.y[1], -std::sin(10.0), 1e-8);
}

TEST(Dopri5, RiccatiBlowUp) {
    // y' = 1 + y², y(0) = 0 explodes at π/2
    auto rhs = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{1.0 + y[0] * y[0]}; };
    const auto r = ode::integrate_dopri5<1>(rhs, {0.0}, 5.0);
    EXPECT_EQ(r.status, ode::Status::BlowUp);
    EXPECT_NEAR(r.t, M_PI / 2, 1e-7);
}

TEST(Dopri5, ExponentialBlowUpPastGuard) {
    // y' = e^y explodes at t = 1; overflow hits before any finite guard matters
    auto rhs = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{std::exp(y[0])}; };
    ode::Options opt;
    opt.blowup_guard = 1e300;
    const auto r = ode::integrate_dopri5<1>(rhs, {0.0}, 2.0, opt);
    EXPECT_EQ(r.status, ode::Status::BlowUp);
    EXPECT_NEAR(r.t, 1.0, 1e-9);
}

TEST(Roots, BisectBoundary) {
    auto holds = [](double x) { return x * x < 2.0; };
    const auto [in, out] = roots::bisect_boundary(holds, 0.0, 3.0, 1e-12);
    EXPECT_TRUE(holds(in));
    EXPECT_FALSE(holds(out));
    EXPECT_NEAR(in, std::sqrt(2.0), 1e-12);
}

TEST(Roots, NewtonBisect) {
    auto fdf = [](double x) { return std::pair{std::cos(x) - x, -std::sin(x) - 1.0}; };
    EXPECT_NEAR(roots::newton_bisect(fdf, 0.0, 1.0, 1e-15), 0.739085133215160641, 1e-14);
    auto flat = [](double x) { return std::pair{std::pow(x - 1.0, 3), 3 * std::pow(x - 1.0, 2)}; };
    EXPECT_NEAR(roots::newton_bisect(flat, -3.0, 4.0, 1e-13), 1.0, 1e-4);
    auto nobracket = [](double x) { return std::pair{x * x + 1, 2 * x}; };
    EXPECT_THROW(roots::newton_bisect(nobracket, -1.0, 1.0, 1e-12), NumericalError);
}

TEST(Threads, EnvironmentCap) {
    ::setenv("AFFINE_SMILE_THREADS", "1", 1);
    EXPECT_EQ(worker_threads(), 1);
    ::setenv("AFFINE_SMILE_THREADS", "garbage", 1);
    EXPECT_GE(worker_threads(), 1);
    ::unsetenv("AFFINE_SMILE_THREADS");
    EXPECT_GE(worker_threads(), 1);
}

TEST(Threads, ParallelForRethrows) {
    EXPECT_THROW(parallel_for(64,
                              [](std::size_t i) {
                                  if (i == 17) throw DomainError("boom");
                              }),
                 DomainError);
}
