#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "arithdyn/analytic_kernel.hpp"

using namespace arithdyn;

namespace {

constexpr double pi = std::numbers::pi;

// Independent Hurwitz oracle: partial sum to N plus the first Euler-Maclaurin
// terms, valid for Re s > 1 and real a.
double hurwitz_oracle(double s, double a)
{
    const int N = 2000;
    double sum = 0.0;
    for (int n = N - 1; n >= 0; --n) sum += std::pow(n + a, -s);
    const double x = N + a;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s * std::pow(x, -s - 1.0) / 12.0;
    return sum;
}

} // namespace

TEST(LogGamma, SpecialValues)
{
    EXPECT_NEAR(std::abs(log_gamma(1.0)), 0.0, 1e-14);
    EXPECT_NEAR(log_gamma(0.5).real(), 0.5 * std::log(pi), 1e-13);
    EXPECT_NEAR(log_gamma(0.5).real(), 0.5723649, 1e-7);
    EXPECT_NEAR(log_gamma(5.0).real(), std::log(24.0), 1e-13);
}

TEST(LogGamma, AgreesWithLgammaOnRealLine)
{
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(0.05, 40.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        EXPECT_NEAR(log_gamma(x).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
    }
}

TEST(LogGamma, RecurrenceInComplexPlane)
{
    // log Gamma(z + 1) - log Gamma(z) = log z modulo 2 pi i
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> re(0.2, 10.0), im(-30.0, 30.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z{re(rng), im(rng)};
        const Complex d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
        EXPECT_NEAR(d.real(), 0.0, 1e-11);
        const double k = std::round(d.imag() / (2.0 * pi));
        EXPECT_NEAR(d.imag() - 2.0 * pi * k, 0.0, 1e-10);
    }
}

TEST(Hurwitz, SpecialValues)
{
    EXPECT_NEAR(hurwitz_zeta(2.0, 1.0).real(), pi * pi / 6.0, 1e-12);
    EXPECT_NEAR(hurwitz_zeta(0.0, 0.25).real(), 0.25, 1e-13);
    EXPECT_NEAR(hurwitz_zeta(-1.0, 1.0).real(), -1.0 / 12.0, 1e-13);
}

TEST(Hurwitz, ZeroValueIsHalfMinusA)
{
    for (double a : {0.1, 0.3, 0.5, 0.77, 1.0}) EXPECT_NEAR(hurwitz_zeta(0.0, a).real(), 0.5 - a, 1e-13) << a;
}

TEST(Hurwitz, AgreesWithDirectSumForLargeRealPart)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> s(1.5, 6.0), a(0.05, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double si = s(rng), ai = a(rng);
        EXPECT_NEAR(hurwitz_zeta(si, ai).real(), hurwitz_oracle(si, ai), 1e-9 * hurwitz_oracle(si, ai))
            << si << " " << ai;
    }
}

TEST(Hurwitz, ShiftRelation)
{
    // zeta_H(s, a) = a^{-s} + zeta_H(s, a + 1) with a + 1 handled by the general routine.
    for (Complex s : {Complex{0.5, 3.0}, Complex{-1.5, 0.0}, Complex{2.0, -7.0}}) {
        for (double a : {0.2, 0.6}) {
            const Complex lhs = hurwitz_zeta(s, a);
            const Complex rhs = std::pow(Complex{a, 0.0}, -s) + hurwitz_zeta_general(s, a + 1.0, false).value;
            EXPECT_LT(std::abs(lhs - rhs), 1e-11);
        }
    }
}

TEST(Hurwitz, SDerivativeAtZero)
{
    EXPECT_NEAR(hurwitz_zeta_s_derivative(0.0, 1.0).real(), -0.5 * std::log(2.0 * pi), 1e-12);
    EXPECT_NEAR(hurwitz_zeta_s_derivative(0.0, 1.0).real(), -0.9189385, 1e-7);
    EXPECT_NEAR(hurwitz_zeta_s_derivative(0.0, 0.5).real(), -0.3465736, 1e-7);
    const double lg14 = std::lgamma(0.25) - 0.5 * std::log(2.0 * pi);
    EXPECT_NEAR(hurwitz_zeta_s_derivative(0.0, 0.25).real(), lg14, 1e-12);
}

TEST(Hurwitz, SDerivativeMatchesCentralDifferences)
{
    const double h = 1e-3;
    for (double a : {0.25, 0.5, 0.9, 1.0}) {
        for (double s : {0.0, 0.5, 2.5, -1.0}) {
            // Five-point stencil; the pole at s = 1 makes the three-point error visible near s = 0.5.
            const auto f = [&](double x) { return hurwitz_zeta(x, a).real(); };
            const double fd = (8.0 * (f(s + h) - f(s - h)) - (f(s + 2 * h) - f(s - 2 * h))) / (12.0 * h);
            EXPECT_NEAR(hurwitz_zeta_s_derivative(s, a).real(), fd, 1e-7) << s << " " << a;
        }
    }
}

TEST(Hurwitz, RejectsParameterOutsideUnitInterval)
{
    EXPECT_THROW(hurwitz_zeta(2.0, 0.0), Error);
    EXPECT_THROW(hurwitz_zeta(2.0, 1.5), Error);
}

TEST(Hurwitz, PoleAtOne)
{
    try {
        hurwitz_zeta(1.0, 0.5);
        FAIL() << "expected a pole error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::pole);
    }
}

TEST(HardyZ, ValueAtZero)
{
    EXPECT_NEAR(std::abs(hardy_Z(0.0)), 1.4603545, 1e-7);
}

TEST(HardyZ, SignChangesAtFirstZeros)
{
    EXPECT_LT(hardy_Z(14.0) * hardy_Z(14.2), 0.0);
    EXPECT_LT(hardy_Z(20.9) * hardy_Z(21.1), 0.0);
    EXPECT_GT(hardy_Z(14.2) * hardy_Z(20.9), 0.0);
}

TEST(HardyZ, IsRealUpToRoundoff)
{
    for (double t : {5.0, 33.3, 101.7, 999.0}) {
        const HardyZValue z = hardy_Z_detail(t);
        EXPECT_LT(std::abs(z.imag_residue), 1e-8) << t;
    }
}

TEST(HardyZ, RejectsNegativeHeight)
{
    EXPECT_THROW(hardy_Z(-1.0), Error);
}
