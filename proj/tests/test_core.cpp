#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "inertia/core.hpp"

using namespace inertia;

namespace {

TimeSeries sampled(double dt, std::size_t n, double (*f)(double)) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = f(static_cast<double>(k) * dt);
    return {0.0, dt, v};
}

}  // namespace

TEST(KineticEnergy, ZeroInertiaHoldsNoEnergy) { EXPECT_EQ(kinetic_energy({0.0, 50.0, 1e6}), 0.0); }

TEST(KineticEnergy, UnitAngularSpeed) {
    EXPECT_NEAR(kinetic_energy({1.0, 1.0 / (2.0 * std::numbers::pi), 1.0}), 0.5, 1e-15);
}

TEST(KineticEnergy, LargeRotorAtFiftyHertz) {
    const double omega = 100.0 * std::numbers::pi;
    const double expected = 0.5 * 1e4 * omega * omega;
    EXPECT_NEAR(kinetic_energy({1e4, 50.0, 1.0}), expected, 1e-9 * expected);
}

TEST(KineticEnergy, RejectsNegativeInputs) {
    EXPECT_THROW(kinetic_energy({-1.0, 50.0, 1.0}), InvalidParameter);
    EXPECT_THROW(kinetic_energy({1.0, -50.0, 1.0}), InvalidParameter);
}

TEST(InertiaConstant, RatioOfEnergyToRating) {
    // J chosen so E_kin = 4 S_r
    const double s_r = 2.0e6;
    const double omega = 100.0 * std::numbers::pi;
    const double j = 2.0 * 4.0 * s_r / (omega * omega);
    EXPECT_NEAR(inertia_constant({j, 50.0, s_r}), 4.0, 1e-12);
    EXPECT_EQ(inertia_constant({0.0, 50.0, s_r}), 0.0);
}

TEST(InertiaConstant, TypicalTurbineGenerator) {
    // 500 MVA set at 3000 rpm with J = 8e4 kg m^2
    const double omega = 2.0 * std::numbers::pi * 50.0;
    const double by_hand = 0.5 * 8e4 * omega * omega / 500e6;
    const double h = inertia_constant({8e4, 50.0, 500e6});
    EXPECT_NEAR(h, by_hand, 1e-12);
    EXPECT_GT(h, 2.0);
    EXPECT_LT(h, 10.0);
}

TEST(InertiaConstant, RejectsNonPositiveRating) {
    EXPECT_THROW(inertia_constant({1.0, 50.0, 0.0}), InvalidParameter);
    EXPECT_THROW(inertia_constant({1.0, 50.0, -3.0}), InvalidParameter);
}

TEST(Aggregation, TableMixes) {
    const std::array<PlantShare, 2> s1{{{5.0, 0.88}, {10.0 / 3.0, 0.12}}};
    EXPECT_NEAR(aggregate_rotational_inertia(s1), 4.80, 1e-12);
    const std::array<PlantShare, 3> s4{{{5.0, 0.43}, {10.0 / 3.0, 0.12}, {0.0, 0.45}}};
    EXPECT_NEAR(aggregate_rotational_inertia(s4), 2.55, 1e-12);
    const std::array<PlantShare, 2> rounded{{{5.0, 0.88}, {3.33, 0.12}}};
    EXPECT_NEAR(aggregate_rotational_inertia(rounded), 4.80, 1e-3);
}

TEST(Aggregation, SinglePlantIsIdentity) {
    const std::array<PlantShare, 1> one{{{4.0, 1.0}}};
    EXPECT_EQ(aggregate_rotational_inertia(one), 4.0);
}

TEST(Aggregation, EmptyMixIsRejected) {
    EXPECT_THROW(aggregate_rotational_inertia({}), InvalidParameter);
    EXPECT_THROW(aggregate_with_virtual({}, {}), InvalidParameter);
}

TEST(Aggregation, NegativeShareIsRejected) {
    const std::array<PlantShare, 1> bad{{{4.0, -0.1}}};
    EXPECT_THROW(aggregate_rotational_inertia(bad), InvalidParameter);
}

TEST(Aggregation, VirtualInertiaAddsOnTop) {
    const std::array<PlantShare, 3> rot{{{5.0, 0.43}, {10.0 / 3.0, 0.12}, {0.0, 0.45}}};
    const std::array<PlantShare, 1> virt{{{3.57, 0.45}}};
    EXPECT_NEAR(aggregate_with_virtual(rot, virt), 2.55 + 1.6065, 1e-12);
    EXPECT_NEAR(aggregate_with_virtual(rot, virt), 4.16, 1e-2);
    EXPECT_EQ(aggregate_with_virtual(rot, {}), aggregate_rotational_inertia(rot));
    const std::array<PlantShare, 1> only{{{3.57, 1.0}}};
    EXPECT_EQ(aggregate_with_virtual({}, only), 3.57);
}

TEST(AggregationProperty, LinearAndPermutationInvariant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> h(0.0, 10.0), share(0.0, 1.0), scale(0.1, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PlantShare> mix(1 + trial % 6);
        for (auto& p : mix) p = {h(rng), share(rng)};
        const double base = aggregate_rotational_inertia(mix);

        double by_hand = 0.0;
        for (const auto& p : mix) by_hand += p.h * p.share;
        EXPECT_NEAR(base, by_hand, 1e-12 * std::max(1.0, by_hand));

        const double k = scale(rng);
        auto scaled_h = mix, scaled_s = mix;
        for (auto& p : scaled_h) p.h *= k;
        for (auto& p : scaled_s) p.share *= k;
        EXPECT_NEAR(aggregate_rotational_inertia(scaled_h), k * base, 1e-12 * std::max(1.0, k * base));
        EXPECT_NEAR(aggregate_rotational_inertia(scaled_s), k * base, 1e-12 * std::max(1.0, k * base));

        auto shuffled = mix;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_NEAR(aggregate_rotational_inertia(shuffled), base, 1e-12 * std::max(1.0, base));
        EXPECT_EQ(aggregate_with_virtual(mix, {}), base);
    }
}

TEST(TimeSeriesTest, ValidatesConstruction) {
    EXPECT_THROW(TimeSeries(0.0, 0.0, {1.0}), InvalidParameter);
    EXPECT_THROW(TimeSeries(0.0, -0.1, {1.0}), InvalidParameter);
    EXPECT_THROW(TimeSeries(0.0, 0.1, {1.0, std::nan("")}), InvalidParameter);
    EXPECT_THROW(TimeSeries(0.0, 0.1, {INFINITY}), InvalidParameter);
}

TEST(TimeSeriesTest, IndexingAndSlicing) {
    const TimeSeries ts(10.0, 0.5, {0, 1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(ts.time(3), 11.5);
    EXPECT_DOUBLE_EQ(ts.end_time(), 12.0);
    EXPECT_EQ(ts.index_of(11.26), 3u);
    EXPECT_EQ(ts.index_of(-5.0), 0u);
    EXPECT_EQ(ts.index_of(99.0), 4u);
    EXPECT_TRUE(ts.covers(12.2));
    EXPECT_FALSE(ts.covers(12.3));
    const TimeSeries s = ts.slice(1, 3);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_DOUBLE_EQ(s.t0(), 10.5);
    EXPECT_EQ(s[2], 3.0);
    EXPECT_THROW(ts.slice(3, 5), WindowError);
    EXPECT_THROW(ts.slice(3, 2), WindowError);
    EXPECT_EQ(ts.scaled(-2.0)[4], -8.0);
}

TEST(TimeSeriesTest, AlignmentCheck) {
    const TimeSeries a(0.0, 0.1, {1, 2, 3});
    EXPECT_NO_THROW(check_aligned(a, TimeSeries(0.0, 0.1, {0, 0, 0}), "t"));
    EXPECT_THROW(check_aligned(a, TimeSeries(0.0, 0.1, {0, 0}), "t"), InvalidParameter);
    EXPECT_THROW(check_aligned(a, TimeSeries(0.0, 0.2, {0, 0, 0}), "t"), InvalidParameter);
    EXPECT_THROW(check_aligned(a, TimeSeries(1.0, 0.1, {0, 0, 0}), "t"), InvalidParameter);
}

TEST(Derivative, ConstantGivesZero) {
    const TimeSeries d = derivative(TimeSeries(0.0, 0.01, std::vector<double>(50, 3.7)));
    for (double v : d.values()) EXPECT_EQ(v, 0.0);
}

TEST(Derivative, RampGivesSlope) {
    std::vector<double> v(100);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = -0.25 * 0.01 * static_cast<double>(k) + 1.0;
    const TimeSeries d = derivative(TimeSeries(0.0, 0.01, v));
    for (double x : d.values()) EXPECT_NEAR(x, -0.25, 1e-10);
}

TEST(Derivative, SineMatchesCosine) {
    const TimeSeries s = sampled(0.01, 1000, [](double t) { return std::sin(t); });
    const TimeSeries d = derivative(s);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < d.size(); ++k) worst = std::max(worst, std::abs(d[k] - std::cos(s.time(k))));
    EXPECT_LT(worst, 1e-3);
    // one-sided ends are first order
    EXPECT_LT(std::abs(d[0] - 1.0), 1e-2);
}

TEST(Derivative, SecondDerivativeOfQuadraticIsConstant) {
    const double dt = 0.01;
    const TimeSeries q = sampled(dt, 500, [](double t) { return 3.0 * t * t - t; });
    const TimeSeries dd = derivative(derivative(q));
    for (std::size_t k = 2; k + 2 < dd.size(); ++k) EXPECT_NEAR(dd[k], 6.0, 10.0 * dt * dt);
}

TEST(Derivative, NeedsTwoSamples) { EXPECT_THROW(derivative(TimeSeries(0.0, 0.1, {1.0})), WindowError); }

TEST(MovingAverage, CentredWindowWithShrinkingEdges) {
    const TimeSeries ts(0.0, 1.0, {1, 2, 3, 4, 5, 6});
    const TimeSeries m = moving_average(ts, 3);
    EXPECT_DOUBLE_EQ(m[0], 1.5);
    EXPECT_DOUBLE_EQ(m[1], 2.0);
    EXPECT_DOUBLE_EQ(m[4], 5.0);
    EXPECT_DOUBLE_EQ(m[5], 5.5);
    // even widths are widened to the next odd number
    EXPECT_DOUBLE_EQ(moving_average(ts, 2)[2], 3.0);
    EXPECT_THROW(moving_average(ts, 0), InvalidParameter);
}

TEST(MovingAverage, PreservesLinearInterior) {
    const TimeSeries ramp = sampled(0.01, 300, [](double t) { return 2.0 * t + 1.0; });
    const TimeSeries m = moving_average(ramp, 15);
    for (std::size_t k = 7; k + 7 < m.size(); ++k) EXPECT_NEAR(m[k], ramp[k], 1e-12);
}

TEST(PerUnit, Validation) {
    EXPECT_NO_THROW(PerUnitSystem{}.validate());
    EXPECT_THROW((PerUnitSystem{0.0, 50.0}.validate()), InvalidParameter);
    EXPECT_THROW((PerUnitSystem{1350.0, -1.0}.validate()), InvalidParameter);
}
