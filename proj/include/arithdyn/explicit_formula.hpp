#ifndef ARITHDYN_EXPLICIT_FORMULA_HPP
#define ARITHDYN_EXPLICIT_FORMULA_HPP

// Both sides of the explicit formula on R^{>0}
//
//     1 - sum_rho e^{t rho} + e^t  =  sum_p log p sum_{k>=1} delta_{k log p} + (1 - e^{-2t})^{-1}
//
// paired with smooth bumps, plus the Poisson-summation identity that plays the
// same role for a circle fibration (spectrum 2 pi i nu / log q, orbits k log q).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"
#include "primes.hpp"
#include "zeta_zeros.hpp"

namespace arithdyn {

/// One mollifier bump scale * exp(1 - 1/(1 - u^2)), u = (t - center)/width.
struct Bump {
    double center = 1.0;
    double width = 0.1;
    double scale = 1.0;

    double lo() const noexcept { return center - width; }
    double hi() const noexcept { return center + width; }

    /// Value and first two t-derivatives; all vanish outside |u| < 1.
    std::array<double, 3> jet(double t) const noexcept
    {
        const double u = (t - center) / width;
        const double v = 1.0 - u * u;
        if (!(v > 0.0)) return {0.0, 0.0, 0.0};
        const double f = scale * std::exp(1.0 - 1.0 / v);
        if (f == 0.0) return {0.0, 0.0, 0.0};
        const double g1 = -2.0 * u / (v * v);
        const double g2 = -2.0 / (v * v) - 8.0 * u * u / (v * v * v);
        return {f, f * g1 / width, f * (g2 + g1 * g1) / (width * width)};
    }
    double operator()(double t) const noexcept { return jet(t)[0]; }
};

/// Finite sum of bumps with support in (0, infinity). A single bump is the common case.
class TestFunction {
public:
    TestFunction() = default;
    explicit TestFunction(Bump b) : parts_{b} { validate(b); }

    const std::vector<Bump>& parts() const noexcept { return parts_; }
    double center() const { return parts_.front().center; }
    double width() const { return parts_.front().width; }

    double lo() const
    {
        double v = parts_.front().lo();
        for (const auto& b : parts_) v = std::min(v, b.lo());
        return v;
    }
    double hi() const
    {
        double v = parts_.front().hi();
        for (const auto& b : parts_) v = std::max(v, b.hi());
        return v;
    }

    double operator()(double t) const noexcept
    {
        double s = 0.0;
        for (const auto& b : parts_) s += b(t);
        return s;
    }

    friend TestFunction operator+(TestFunction a, const TestFunction& b)
    {
        a.parts_.insert(a.parts_.end(), b.parts_.begin(), b.parts_.end());
        return a;
    }

private:
    static void validate(const Bump& b)
    {
        if (!(b.width > 0.0) || !std::isfinite(b.center) || !std::isfinite(b.width))
            throw Error(ErrorKind::support, "bump width must be positive and finite");
        if (!(b.center - b.width > 0.0))
            throw Error(ErrorKind::support, "bump support must lie in (0, infinity)");
    }

    std::vector<Bump> parts_;
};

inline TestFunction bump(double center, double width, double scale = 1.0)
{
    return TestFunction(Bump{center, width, scale});
}

struct PairingResult {
    double value = 0.0;
    double truncation_bound = 0.0;
    long zeros_used = 0;
    long primes_used = 0; // prime-power atoms inside the support
};

constexpr double quadrature_tolerance = 1e-12;

namespace detail {

/// Integral of phi(t) * weight(t) over the support, adaptive Simpson per bump.
template <class W>
double pair_smooth(const TestFunction& phi, W weight)
{
    const AdaptiveSimpson simpson(quadrature_tolerance);
    return simpson.integrate([&](double t) { return phi(t) * weight(t); }, phi.lo(), phi.hi());
}

/// Nodes and weights of psi''(t) = (phi e^{t/2})'' for the twice-integrated-by-parts
/// zero transform, one composite Gauss–Legendre grid per bump.
struct ZeroTransformGrid {
    std::vector<double> nodes;
    std::vector<double> weighted; // w_j * psi''(t_j)
    std::vector<double> weighted_psi; // w_j * psi(t_j), for the direct transform

    ZeroTransformGrid(const TestFunction& phi, double max_frequency)
    {
        for (const auto& b : phi.parts()) {
            // At most ~3 radians of phase per 16-point panel.
            const int panels = std::max(64, static_cast<int>(std::ceil(2.0 * b.width * max_frequency / 3.0)));
            const QuadratureRule rule = composite_gauss_legendre(b.lo(), b.hi(), panels, 16);
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const double t = rule.nodes[j];
                const auto f = b.jet(t);
                const double e = std::exp(0.5 * t);
                nodes.push_back(t);
                weighted.push_back(rule.weights[j] * (f[2] + f[1] + 0.25 * f[0]) * e);
                weighted_psi.push_back(rule.weights[j] * f[0] * e);
            }
        }
    }

    /// Re int psi(t) e^{i gamma t} dt = -(1/gamma^2) Re int psi''(t) e^{i gamma t} dt.
    double cos_transform(double gamma) const
    {
        CompensatedSum<double> acc;
        for (std::size_t j = 0; j < nodes.size(); ++j) acc += weighted[j] * std::cos(gamma * nodes[j]);
        return -acc.value() / (gamma * gamma);
    }

    /// |int psi(t) e^{i gamma t} dt| evaluated directly (no integration by parts).
    double abs_transform(double gamma) const
    {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            re += weighted_psi[j] * std::cos(gamma * nodes[j]);
            im += weighted_psi[j] * std::sin(gamma * nodes[j]);
        }
        return std::hypot(re, im);
    }

    double direct_cos_transform(double gamma) const
    {
        CompensatedSum<double> acc;
        for (std::size_t j = 0; j < nodes.size(); ++j) acc += weighted_psi[j] * std::cos(gamma * nodes[j]);
        return acc.value();
    }
};

inline double zero_density(double t)
{
    return std::max(0.0, std::log(t / (2.0 * std::numbers::pi)) / (2.0 * std::numbers::pi));
}

/// Estimate of the omitted zero tail sum_{gamma > T} 2|psi^(gamma)|: the running
/// envelope of |psi^| integrated against the zero density N'(t).
inline double zero_tail_estimate(const TestFunction& phi, double T)
{
    double wmin = phi.parts().front().width;
    for (const auto& b : phi.parts()) wmin = std::min(wmin, b.width);
    const double step = 0.5 / wmin;        // sampling step in frequency
    const double window = 2.0 * std::numbers::pi / wmin; // envelope window
    const int per_window = static_cast<int>(std::ceil(window / step));

    std::vector<double> samples;
    double total = 0.0;
    double first_env = -1.0;
    const double max_freq = T + 4000.0 / wmin;
    for (double xi = T; xi < max_freq; xi += step * per_window) {
        const ZeroTransformGrid grid(phi, xi + window);
        double env = 0.0;
        for (int j = 0; j <= per_window; ++j) env = std::max(env, grid.abs_transform(xi + j * step));
        const double chunk = 2.0 * env * zero_density(xi + window) * window;
        total += chunk;
        if (first_env < 0.0) first_env = env;
        if (env <= 1e-7 * first_env || chunk <= 1e-4 * total || env < 1e-22) break;
    }
    return total;
}

} // namespace detail

/// Prime side: sum over k log p in the support of log p * phi(k log p), plus the
/// archimedean integral of phi(t) / (1 - e^{-2t}).
inline PairingResult arithmetic_side(const TestFunction& phi)
{
    PairingResult r;
    CompensatedSum<double> atoms;
    for (const auto& a : prime_power_atoms(phi.lo(), phi.hi())) {
        atoms += a.weight * phi(a.location);
        ++r.primes_used;
    }
    const double archimedean =
        detail::pair_smooth(phi, [](double t) { return 1.0 / (-std::expm1(-2.0 * t)); });
    r.value = atoms.value() + archimedean;
    r.truncation_bound = quadrature_tolerance;
    return r;
}

/// Zero side: int phi - sum over ordinates of 2 int phi(t) e^{t/2} cos(gamma t) dt
/// + int phi e^t. Each table ordinate stands for the conjugate pair of zeros.
/// Throws a tail error when the omitted-zero estimate exceeds `tolerance`.
inline PairingResult spectral_side(const TestFunction& phi, const ZeroTable& zeros, double tolerance = 1e-6)
{
    zeros.require_nonempty();
    if (!(tolerance > 0.0)) throw Error(ErrorKind::domain, "tolerance must be positive");
    PairingResult r;
    const double T = zeros.coverage();
    r.truncation_bound = detail::zero_tail_estimate(phi, T);
    if (r.truncation_bound > tolerance)
        throw Error(ErrorKind::tail, "zeros up to T = " + std::to_string(T)
                                         + " leave an estimated tail of " + std::to_string(r.truncation_bound)
                                         + " above tolerance " + std::to_string(tolerance));

    const detail::ZeroTransformGrid grid(phi, zeros.ordinates().back());
    CompensatedSum<double> zero_sum;
    for (double gamma : zeros.ordinates()) zero_sum += 2.0 * grid.cos_transform(gamma);
    r.zeros_used = static_cast<long>(zeros.size());

    const double one = detail::pair_smooth(phi, [](double) { return 1.0; });
    const double exp_term = detail::pair_smooth(phi, [](double t) { return std::exp(t); });
    r.value = one - zero_sum.value() + exp_term;
    return r;
}

struct ExplicitFormulaCheck {
    PairingResult spectral;
    PairingResult arithmetic;
    double residual = 0.0;
};

inline ExplicitFormulaCheck explicit_formula_check(const TestFunction& phi, const ZeroTable& zeros,
                                                   double tolerance = 1e-6)
{
    ExplicitFormulaCheck c;
    c.spectral = spectral_side(phi, zeros, tolerance);
    c.arithmetic = arithmetic_side(phi);
    c.residual = std::abs(c.spectral.value - c.arithmetic.value);
    return c;
}

/// |spectral - arithmetic|, the headline verification statistic.
inline double residual(const TestFunction& phi, const ZeroTable& zeros, double tolerance = 1e-6)
{
    return explicit_formula_check(phi, zeros, tolerance).residual;
}

/// Poisson summation on the circle of length L = log q:
/// | sum_{|nu|<=N} int phi(t) e^{2 pi i nu t / L} dt - L sum_{k>=1} phi(k L) |.
inline double fibration_trace_check(double q, const TestFunction& phi, long N)
{
    if (!(q > 1.0)) throw Error(ErrorKind::domain, "fibration check needs q > 1");
    if (N < 0) throw Error(ErrorKind::domain, "N must be nonnegative");
    const double L = std::log(q);
    const double top = 2.0 * std::numbers::pi * static_cast<double>(N) / L;

    std::vector<double> nodes, weights;
    for (const auto& b : phi.parts()) {
        const int panels = std::max(64, static_cast<int>(std::ceil(2.0 * b.width * top / 3.0)));
        const QuadratureRule rule = composite_gauss_legendre(b.lo(), b.hi(), panels, 16);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            nodes.push_back(rule.nodes[j]);
            weights.push_back(rule.weights[j] * b(rule.nodes[j]));
        }
    }
    CompensatedSum<double> spectral;
    for (std::size_t j = 0; j < nodes.size(); ++j) spectral += weights[j];
    for (long nu = 1; nu <= N; ++nu) {
        const double xi = 2.0 * std::numbers::pi * static_cast<double>(nu) / L;
        CompensatedSum<double> c;
        for (std::size_t j = 0; j < nodes.size(); ++j) c += weights[j] * std::cos(xi * nodes[j]);
        spectral += 2.0 * c.value();
    }
    CompensatedSum<double> orbit;
    for (long k = 1; k * L < phi.hi(); ++k) orbit += phi(static_cast<double>(k) * L);
    return std::abs(spectral.value() - L * orbit.value());
}

} // namespace arithdyn

#endif
