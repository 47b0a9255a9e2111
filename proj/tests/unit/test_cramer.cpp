#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "arithdyn/cramer.hpp"
#include "support/zero_tables.hpp"

using namespace arithdyn;
using arithdyn::testing::zeros_to;

namespace {

const std::vector<double> ladder{0.05, 0.02, 0.01};

std::vector<double> locations(const SingularityReport& r)
{
    std::vector<double> out;
    for (const auto& d : r.detected) out.push_back(d.location);
    return out;
}

void expect_detects(const SingularityReport& r, const std::vector<double>& expected)
{
    const auto found = locations(r);
    ASSERT_EQ(found.size(), expected.size()) << ::testing::PrintToString(found);
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(found[i], expected[i], 1e-3);
}

} // namespace

TEST(CramerW, ImaginaryAxisValues)
{
    const ZeroTable& zeros = zeros_to(100.0);
    double direct = 0.0;
    for (double t : zeros.ordinates()) direct += std::exp(-t);
    const CramerValue w1 = cramer_W(Complex{0.0, 1.0}, zeros);
    EXPECT_NEAR(w1.value.real(), direct, 1e-18);
    // The direct sum is 7.2748e-7; the quoted 7.29e-7 is a loose rounding.
    EXPECT_NEAR(w1.value.real(), 7.29e-7, 0.02e-7);
    EXPECT_NEAR(w1.value.imag(), 0.0, 1e-20);
    const CramerValue w2 = cramer_W(Complex{0.0, 2.0}, zeros);
    EXPECT_NEAR(w2.value.real() / std::exp(-2.0 * 14.134725141734693), 1.0, 1e-3);
    EXPECT_NEAR(w2.value.real(), 5.3e-13, 0.05e-13);
}

TEST(CramerW, TailErrorForShortTable)
{
    try {
        cramer_W(Complex{0.0, 1e-4}, zeros_to(100.0));
        FAIL() << "expected a tail error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::tail);
    }
}

TEST(CramerW, RequiresUpperHalfPlane)
{
    EXPECT_THROW(cramer_W(Complex{1.0, 0.0}, zeros_to(100.0)), Error);
    EXPECT_THROW(cramer_W(Complex{1.0, -0.5}, zeros_to(100.0)), Error);
    EXPECT_THROW(cramer_W(Complex{0.0, 1.0}, ZeroTable()), Error);
}

TEST(CramerW, PartialSumsAreCauchyWithinTailBound)
{
    const ZeroTable& full = zeros_to(2000.0);
    for (double y : {0.5, 0.8, 1.5}) {
        for (double T : {200.0, 500.0}) {
            const ZeroTable part = full.truncated(T);
            const Complex z{0.7, y};
            const Complex a = cramer_W(z, part, 1.0).value;
            const Complex b = cramer_W(z, full, 1.0).value;
            EXPECT_LE(std::abs(a - b), cramer_tail_bound(T, y) + 1e-15) << y << " " << T;
        }
    }
}

TEST(SmoothedTrace, PoleDominatesRegularPoint)
{
    const ZeroTable& zeros = zeros_to(2000.0);
    const double at_pole = std::abs(smoothed_trace(std::log(2.0), 0.01, zeros).value);
    const double regular = std::abs(smoothed_trace(0.9, 0.01, zeros).value);
    EXPECT_GT(at_pole, 10.0 * regular);
}

TEST(SmoothedTrace, BoundedAtRegularPoint)
{
    const ZeroTable& zeros = zeros_to(2000.0);
    double lo = 1e300, hi = 0.0;
    for (double e : ladder) {
        const double v = std::abs(smoothed_trace(0.9, e, zeros).value);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(hi / lo, 2.0);
}

TEST(SmoothedTrace, SimplePoleScaling)
{
    const ZeroTable& zeros = zeros_to(2000.0);
    const double t = std::log(3.0);
    const double a = std::abs(smoothed_trace(t, 0.02, zeros).value);
    const double b = std::abs(smoothed_trace(t, 0.01, zeros).value);
    EXPECT_GT(b / a, 1.6);
    EXPECT_LT(b / a, 2.4);
}

TEST(SmoothedTrace, RejectsNonPositiveEps)
{
    EXPECT_THROW(smoothed_trace(1.0, 0.0, zeros_to(100.0)), Error);
}

TEST(SingularityScan, LowWindow)
{
    const auto r = singularity_scan({0.5, 1.5}, ladder, zeros_to(2000.0));
    expect_detects(r, {std::log(2.0), std::log(3.0), 2.0 * std::log(2.0)});
    for (const auto& d : r.detected) {
        EXPECT_LE(d.distance, 1e-3);
        EXPECT_GE(d.location, 0.5);
        EXPECT_LE(d.location, 1.5);
    }
    EXPECT_EQ(r.epsilon_ladder, ladder);
}

TEST(SingularityScan, HighWindow)
{
    expect_detects(singularity_scan({1.55, 2.0}, ladder, zeros_to(2000.0)), {std::log(5.0), std::log(7.0)});
}

TEST(SingularityScan, EmptyWindow)
{
    expect_detects(singularity_scan({0.75, 1.05}, ladder, zeros_to(2000.0)), {});
}

TEST(SingularityScan, PoleOrderNearOne)
{
    const auto r = singularity_scan({0.5, 2.0}, ladder, zeros_to(2000.0));
    ASSERT_EQ(r.detected.size(), 5u);
    for (const auto& d : r.detected) {
        EXPECT_GT(d.pole_order, 0.8) << d.location;
        EXPECT_LT(d.pole_order, 1.2) << d.location;
    }
}

TEST(SingularityScan, ValidatesInputs)
{
    const ZeroTable& zeros = zeros_to(2000.0);
    EXPECT_THROW(singularity_scan({0.1, 1.0}, ladder, zeros), Error);
    EXPECT_THROW(singularity_scan({1.0, 0.9}, ladder, zeros), Error);
    EXPECT_THROW(singularity_scan({0.5, 1.0}, {0.05, 0.02}, zeros), Error);
    EXPECT_THROW(singularity_scan({0.5, 1.0}, {0.01, 0.02, 0.05}, zeros), Error);
    ScanOptions coarse;
    coarse.grid_step = 0.05;
    try {
        singularity_scan({0.5, 1.0}, ladder, zeros, coarse);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::resolution);
    }
}

TEST(GrowthExponent, RegularPointsFarFromGrid)
{
    const ZeroTable& zeros = zeros_to(2000.0);
    const auto grid = prime_power_grid(3.0);
    for (double t : {0.45, 0.5, 0.85, 0.9, 0.95}) {
        double dist = 1e9;
        for (double g : grid) dist = std::min(dist, std::abs(g - t));
        ASSERT_GE(dist, 0.14) << t;
        const double a = growth_exponent(t, ladder, zeros);
        EXPECT_GE(a, -0.2) << t;
        EXPECT_LE(a, 0.4) << t;
    }
}

TEST(PrimePowerGrid, Examples)
{
    const auto g2 = prime_power_grid(2.0);
    const std::vector<double> want{std::log(2.0), std::log(3.0), std::log(4.0), std::log(5.0), std::log(7.0)};
    ASSERT_EQ(g2.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(g2[i], want[i], 1e-14);
    EXPECT_TRUE(prime_power_grid(0.5).empty());
    const auto g22 = prime_power_grid(2.2);
    ASSERT_EQ(g22.size(), 7u); // adds 3 log 2 = 2.079 and 2 log 3 = 2.197
    EXPECT_NEAR(g22.back(), 2.0 * std::log(3.0), 1e-14);
}

TEST(PrimePowerGrid, Sorted)
{
    const auto g = prime_power_grid(8.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LE(g[i - 1], g[i]);
}

TEST(PoleWeight, Values)
{
    EXPECT_NEAR(pole_weight(2, 1), std::log(2.0) / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(pole_weight(3, 2), std::log(3.0) / 3.0, 1e-15);
}
