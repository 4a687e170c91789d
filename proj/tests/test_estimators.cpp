#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "inertia/estimators.hpp"

using namespace inertia;

namespace {

constexpr double kDt = 0.01;
constexpr double kTDist = 1.0;
constexpr double kDp = -0.05;  // 0.05 pu load increase

/// Pure swing, no governors, D = 0: delta_f = dp/(2H) (t - t_dist) after the step.
TimeSeries swing_ramp(double h, double duration = 25.0, double dp = kDp) {
    const auto n = static_cast<std::size_t>(std::llround(duration / kDt)) + 1;
    std::vector<double> f(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * kDt;
        if (t > kTDist) f[k] = dp / (2.0 * h) * (t - kTDist);
    }
    return {0.0, kDt, f};
}

TimeSeries load_step(std::size_t n, double size = 0.05) {
    std::vector<double> u(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (static_cast<double>(k) * kDt >= kTDist - 1e-9) u[k] = size;
    return {0.0, kDt, u};
}

/// Closed-form response of 2H df/dt = -R0 f + dp, f(t_dist) = 0.
TimeSeries constant_r_response(double h, double r0, double dp, double duration = 20.0) {
    const auto n = static_cast<std::size_t>(std::llround(duration / kDt)) + 1;
    std::vector<double> f(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * kDt - kTDist;
        if (t > 0.0) f[k] = dp / r0 * (1.0 - std::exp(-r0 * t / (2.0 * h)));
    }
    return {0.0, kDt, f};
}

const DisturbanceInfo kDist{kDp, kTDist};

}  // namespace

// ---- oracle suite ------------------------------------------------------------

class PureSwing : public ::testing::TestWithParam<double> {};

TEST_P(PureSwing, InoueRecoversH) {
    const double h = GetParam();
    EXPECT_NEAR(estimate_inoue(swing_ramp(h), kDist).h_est, h, 0.01 * h);
}

TEST_P(PureSwing, ChassinRecoversH) {
    const double h = GetParam();
    EXPECT_NEAR(estimate_chassin(swing_ramp(h), kDist).h_est, h, 0.01 * h);
}

TEST_P(PureSwing, Zografos17RecoversH) {
    const double h = GetParam();
    EXPECT_NEAR(estimate_zografos17(swing_ramp(h), kDist).h_est, h, 0.01 * h);
}

TEST_P(PureSwing, ZografosRRecoversH) {
    const double h = GetParam();
    EXPECT_NEAR(estimate_zografos_r(swing_ramp(h), kDist).h_est, h, 0.01 * h);
}

TEST_P(PureSwing, TuttelbergRecoversH) {
    const double h = GetParam();
    const TimeSeries f = swing_ramp(h);
    const ReducedModel m = identify_reduced_model(load_step(f.size()), f, 1);
    EXPECT_NEAR(estimate_tuttelberg(m).h_est, h, 0.01 * h);
}

TEST_P(PureSwing, WallRecoversH) {
    const double h = GetParam();
    const TimeSeries f = swing_ramp(h);
    std::vector<double> p(f.size(), 0.0), r(f.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k)
        if (f.time(k) >= kTDist - 1e-9) {
            p[k] = kDp;
            r[k] = kDp / (2.0 * h);
        }
    const WallResult w = estimate_wall({0.0, kDt, p}, {0.0, kDt, r}, {5, 2});
    EXPECT_NEAR(w.estimate.h_est, h, 1e-9 * h);
}

INSTANTIATE_TEST_SUITE_P(Oracle, PureSwing, ::testing::Values(2.0, 3.3, 4.8, 6.0));

// ---- Inoue -------------------------------------------------------------------

TEST(Inoue, LinearCoefficientFormula) {
    // delta_f = -0.005 t exactly, so A1 = -0.005 and H = -0.05 / (2 * -0.005)
    const auto n = static_cast<std::size_t>(301);
    std::vector<double> f(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) f[k] = -0.005 * std::max(0.0, static_cast<double>(k) * kDt - kTDist);
    const InertiaEstimate e = estimate_inoue({0.0, kDt, f}, kDist);
    EXPECT_NEAR(e.h_est, 5.0, 1e-9);
    EXPECT_NEAR(e.diagnostics.at("a1"), -0.005, 1e-12);
}

TEST(Inoue, OriginPolynomialRecoversCoefficients) {
    std::vector<double> y(200);
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double t = static_cast<double>(k) * kDt;
        y[k] = 0.3 * t - 0.2 * t * t + 0.05 * t * t * t;
    }
    const PolynomialFit fit = fit_origin_polynomial({0.0, kDt, y}, 3);
    ASSERT_EQ(fit.coefficients.size(), 3);
    EXPECT_NEAR(fit.coefficients[0], 0.3, 1e-9);
    EXPECT_NEAR(fit.coefficients[1], -0.2, 1e-9);
    EXPECT_NEAR(fit.coefficients[2], 0.05, 1e-9);
}

TEST(Inoue, WindowChecks) {
    const TimeSeries f = swing_ramp(4.8, 3.0);
    EXPECT_THROW(estimate_inoue(f, kDist, 5.0), WindowError);
    EXPECT_THROW(estimate_inoue(f, kDist, 0.2), WindowError);
    EXPECT_THROW(estimate_inoue(f, kDist, -1.0), WindowError);
    EXPECT_THROW(estimate_inoue(f, {kDp, 10.0}), WindowError);
}

TEST(Inoue, FlatFrequencyIsUndefined) {
    EXPECT_THROW(estimate_inoue(TimeSeries(0.0, kDt, std::vector<double>(500, 0.0)), kDist), UndefinedEstimate);
}

// ---- Chassin / Zografos17 -------------------------------------------------------

TEST(Chassin, NoisyRampWithinFivePercent) {
    const double sigma_pu = 1e-3 / 50.0;  // 1 mHz at 50 Hz
    TimeSeries clean = swing_ramp(4.8);
    std::vector<double> v(clean.values().begin(), clean.values().end());
    std::mt19937_64 rng(0);
    std::normal_distribution<double> noise(0.0, sigma_pu);
    for (double& x : v) x += noise(rng);
    EXPECT_NEAR(estimate_chassin({0.0, kDt, v}, kDist).h_est, 4.8, 0.05 * 4.8);
}

TEST(Chassin, NoiseAveragesOut) {
    const double sigma_pu = 1e-3 / 50.0;
    const TimeSeries clean = swing_ramp(4.8, 5.0);
    double sum = 0.0;
    const int trials = 200;
    for (int seed = 1; seed <= trials; ++seed) {
        std::vector<double> v(clean.values().begin(), clean.values().end());
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        std::normal_distribution<double> noise(0.0, sigma_pu);
        for (double& x : v) x += noise(rng);
        sum += estimate_chassin({0.0, kDt, v}, kDist).h_est;
    }
    EXPECT_NEAR(sum / trials, 4.8, 0.01 * 4.8);
}

TEST(Chassin, FlatFrequencyIsUndefined) {
    const TimeSeries flat(0.0, kDt, std::vector<double>(500, 0.0));
    EXPECT_THROW(estimate_chassin(flat, kDist), UndefinedEstimate);
    EXPECT_THROW(estimate_zografos17(flat, kDist), UndefinedEstimate);
}

TEST(Chassin, ScalesWithTheImbalance) {
    const TimeSeries f = swing_ramp(3.3);
    const double base = estimate_chassin(f, kDist).h_est;
    const double base_inoue = estimate_inoue(f, kDist).h_est;
    for (double k : {0.5, 2.0, 7.0}) {
        const DisturbanceInfo scaled{k * kDp, kTDist};
        EXPECT_NEAR(estimate_chassin(f, scaled).h_est, k * base, 1e-12 * k * base);
        EXPECT_NEAR(estimate_inoue(f, scaled).h_est, k * base_inoue, 1e-12 * k * base_inoue);
    }
}

TEST(Chassin, ZeroImbalanceIsRejected) {
    EXPECT_THROW(estimate_chassin(swing_ramp(4.8), {0.0, kTDist}), InvalidParameter);
}

TEST(Zografos17, MatchesChassinSampling) {
    const TimeSeries f = constant_r_response(4.0, 20.0, kDp);
    EXPECT_DOUBLE_EQ(estimate_zografos17(f, kDist).h_est, estimate_chassin(f, kDist).h_est);
}

// ---- Wall ------------------------------------------------------------------------

TEST(Wall, SyntheticStepHandComputation) {
    std::vector<double> p(40, 0.0), r(40, 0.0);
    for (std::size_t k = 20; k < 40; ++k) {
        p[k] = -0.05;
        r[k] = -0.0052083;
    }
    const WallResult w = estimate_wall({0.0, kDt, p}, {0.0, kDt, r}, {5, 2});
    // every window pair straddling the step cleanly: (P2 - P1) / (2 (R2 - R1))
    EXPECT_NEAR(w.estimate.h_est, 0.5 * -0.05 / -0.0052083, 1e-9);
    EXPECT_NEAR(w.estimate.h_est, 4.8, 1e-4);
    EXPECT_NEAR(w.estimate.diagnostics.at("t_onset"), 0.20, 1e-12);
}

TEST(Wall, ConstantSignalsAreUndefined) {
    const TimeSeries p(0.0, kDt, std::vector<double>(100, -0.05));
    const TimeSeries r(0.0, kDt, std::vector<double>(100, -0.005));
    EXPECT_THROW(estimate_wall(p, r, {5, 2}), UndefinedEstimate);
}

TEST(Wall, GeometryChecks) {
    const TimeSeries s(0.0, kDt, std::vector<double>(10, 0.0));
    EXPECT_THROW(estimate_wall(s, s, {1, 2}), InvalidParameter);
    EXPECT_THROW(estimate_wall(s, s, {5, 0}), InvalidParameter);
    EXPECT_THROW(estimate_wall(s, s, {5, 2}), WindowError);
    EXPECT_THROW(estimate_wall(s, TimeSeries(0.0, kDt, std::vector<double>(9, 0.0)), {2, 1}), InvalidParameter);
}

TEST(Wall, ScaleInvariance) {
    std::vector<double> p(300, 0.0), r(300, 0.0);
    for (std::size_t k = 100; k < 300; ++k) {
        const double t = static_cast<double>(k - 100) * kDt;
        p[k] = -0.05 + 0.02 * (1.0 - std::exp(-t / 0.7));
        r[k] = p[k] / 9.0;
    }
    const WallResult a = estimate_wall({0.0, kDt, p}, {0.0, kDt, r}, {20, 2});
    for (double k : {0.1, 3.0}) {
        std::vector<double> pk(p), rk(r);
        for (auto& x : pk) x *= k;
        for (auto& x : rk) x *= k;
        const WallResult b = estimate_wall({0.0, kDt, pk}, {0.0, kDt, rk}, {20, 2});
        for (std::size_t i = 0; i < a.h.size(); ++i) {
            ASSERT_EQ(std::isnan(a.h[i]), std::isnan(b.h[i]));
            if (!std::isnan(a.h[i])) {
                EXPECT_NEAR(a.h[i], b.h[i], 1e-9 * std::abs(a.h[i]));
            }
        }
    }
}

TEST(Wall, FarFromTheEventIsFlagged) {
    std::vector<double> p(1000, 0.0), r(1000, 0.0);
    for (std::size_t k = 100; k < 1000; ++k) {
        const double t = static_cast<double>(k - 100) * kDt;
        r[k] = -0.005 * std::exp(-t / 0.5);
        p[k] = -0.05 * std::exp(-t / 0.5);
    }
    const WallResult w = estimate_wall({0.0, kDt, p}, {0.0, kDt, r}, {10, 2});
    EXPECT_TRUE(w.valid[w.estimate.diagnostics.at("index")]);
    EXPECT_FALSE(w.valid[900]);
    EXPECT_TRUE(std::isnan(w.h[900]));
}

// ---- Tuttelberg --------------------------------------------------------------------

TEST(Tuttelberg, GenerateAndRecoverIntegrator) {
    const TimeSeries f = swing_ramp(4.8);
    const ReducedModel m = identify_reduced_model(load_step(f.size()), f, 1);
    ASSERT_EQ(m.order(), 1);
    EXPECT_LT(std::abs(std::abs(m.impulse_at_zero()) - 1.0 / 9.6), 1e-4);
    EXPECT_LT(m.impulse_at_zero(), 0.0);
    EXPECT_NEAR(std::abs(m.den.front() / m.num.front()), 9.6, 9.6e-3);
    EXPECT_LT(m.rms_residual, 1e-10);
}

TEST(Tuttelberg, RecoversASecondOrderModel) {
    // y'' + 2 y' + 5 y = -0.5 u' - 1 u, simulated exactly for a step
    // via its closed-form response; h(0+) = -0.5
    const double zeta_w = 1.0, wd = 2.0;
    std::vector<double> y(2001, 0.0);
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double t = static_cast<double>(k) * kDt - kTDist;
        if (t <= 0.0) continue;
        // step response of (-0.5 s - 1)/(s^2 + 2 s + 5) times 0.05
        const double e = std::exp(-zeta_w * t);
        const double step = -0.2 * (1.0 - e * (std::cos(wd * t) + 0.5 * std::sin(wd * t))) - 0.25 * e * std::sin(wd * t);
        y[k] = 0.05 * step;
    }
    const TimeSeries f(0.0, kDt, y);
    const ReducedModel m = identify_reduced_model(load_step(f.size()), f, 2);
    EXPECT_NEAR(m.impulse_at_zero(), -0.5, 5e-3);
}

TEST(Tuttelberg, ZeroDataIsRankDeficient) {
    const TimeSeries z(0.0, kDt, std::vector<double>(500, 0.0));
    EXPECT_THROW(identify_reduced_model(z, z, 3), RankDeficient);
}

TEST(Tuttelberg, InversionIdentityAndGuards) {
    ReducedModel m;
    m.num = {1.0};
    m.den = {9.6, 0.0};
    EXPECT_NEAR(estimate_tuttelberg(m).h_est, 4.8, 1e-12);
    m.num = {0.0};
    EXPECT_THROW(estimate_tuttelberg(m), UndefinedEstimate);
    m.num = {1.0, 2.0};
    EXPECT_THROW(estimate_tuttelberg(m), InvalidParameter);
    m.num = {1.0};
    m.den = {};
    EXPECT_THROW(estimate_tuttelberg(m), InvalidParameter);
}

TEST(Tuttelberg, ShortRecordsAreRejected) {
    const TimeSeries s(0.0, kDt, std::vector<double>(10, 1.0));
    EXPECT_THROW(identify_reduced_model(s, s, 3), WindowError);
    EXPECT_THROW(identify_reduced_model(s, s, 0), InvalidParameter);
}

TEST(Tuttelberg, BilinearHelpers) {
    EXPECT_EQ(detail::poly_mul({1.0, 2.0}, {3.0, 1.0}), (std::vector<double>{3.0, 7.0, 2.0}));
}

// ---- Zografos-R ----------------------------------------------------------------------

TEST(ZografosR, ConstantDroopOracle) {
    const TimeSeries f = constant_r_response(4.0, 20.0, kDp);
    const double h10 = estimate_zografos_r(f, kDist, {10, 10.0}).h_est;
    const double h2 = estimate_zografos_r(f, kDist, {2, 10.0}).h_est;
    EXPECT_NEAR(h10, 4.0, 0.04);
    EXPECT_NEAR(h2, 4.0, 0.04);
    EXPECT_NEAR(h10, h2, 1e-3);
}

TEST(ZografosR, NeighbourCountChecks) {
    const TimeSeries f = constant_r_response(4.0, 20.0, kDp);
    EXPECT_THROW(estimate_zografos_r(f, kDist, {3, 10.0}), InvalidParameter);
    EXPECT_THROW(estimate_zografos_r(f, kDist, {0, 10.0}), InvalidParameter);
}

TEST(ZografosR, FlatFrequencyHasNoExtremum) {
    EXPECT_THROW(estimate_zografos_r(TimeSeries(0.0, kDt, std::vector<double>(500, 0.0)), kDist), UndefinedEstimate);
}

// ---- regression ------------------------------------------------------------------------

TEST(Regression, ExactLinearRelation) {
    const LinearRelation r = fit_virtual_inertia_relation({{15, 0.5355}, {30, 1.071}, {45, 1.6065}});
    EXPECT_NEAR(r.slope, 0.0357, 1e-12);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
}

TEST(Regression, ZeroVirtualInertia) {
    const LinearRelation r = fit_virtual_inertia_relation({{15, 0.0}, {30, 0.0}, {45, 0.0}});
    EXPECT_EQ(r.slope, 0.0);
}

TEST(Regression, NeedsDistinctPoints) {
    EXPECT_THROW(fit_virtual_inertia_relation({{30, 1.0}, {30, 1.1}}), InvalidParameter);
    EXPECT_THROW(fit_virtual_inertia_relation({{30, 1.0}}), InvalidParameter);
}

TEST(Regression, ZeroInterceptLeastSquares) {
    const std::vector<VirtualInertiaPoint> pts{{10, 0.3}, {20, 0.8}, {40, 1.5}};
    const double by_hand = (10 * 0.3 + 20 * 0.8 + 40 * 1.5) / (100.0 + 400.0 + 1600.0);
    EXPECT_NEAR(fit_virtual_inertia_relation(pts).slope, by_hand, 1e-15);
}

TEST(Methods, NamesRoundTrip) {
    for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_THROW(parse_method("bogus"), InvalidParameter);
}
