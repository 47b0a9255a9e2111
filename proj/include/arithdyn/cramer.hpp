#ifndef ARITHDYN_CRAMER_HPP
#define ARITHDYN_CRAMER_HPP

// Cramér's function W(z) = sum_{t_nu > 0} e^{i t_nu z} on the upper half-plane and
// a probe of its boundary singularities: at m log p the smoothed trace
// W(t + i eps) grows like 1/eps (first-order pole), elsewhere it stays bounded.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "numeric.hpp"
#include "primes.hpp"
#include "zeta_zeros.hpp"

namespace arithdyn {

struct CramerValue {
    Complex value;
    double tail_bound = 0.0;
};

/// Bound for the omitted terms sum_{t > T} e^{-t y}, using the zero density
/// (1/2pi) log(t/2pi) integrated against e^{-t y}.
inline double cramer_tail_bound(double T, double y)
{
    const double dens = std::max(0.0, std::log(T / (2.0 * std::numbers::pi))) + 1.0 / (T * y);
    return dens / (2.0 * std::numbers::pi) * std::exp(-T * y) / y;
}

constexpr double default_cramer_tolerance = 1e-6;

/// W(z) = sum over the table of e^{i t_nu z}, Im z > 0.
inline CramerValue cramer_W(Complex z, const ZeroTable& zeros, double tolerance = default_cramer_tolerance)
{
    zeros.require_nonempty();
    if (!(z.imag() > 0.0) || !is_finite(z)) throw Error(ErrorKind::domain, "cramer_W requires Im z > 0");
    CramerValue out;
    out.tail_bound = cramer_tail_bound(zeros.coverage(), z.imag());
    if (out.tail_bound > tolerance)
        throw Error(ErrorKind::tail, "zero table to T = " + std::to_string(zeros.coverage())
                                         + " is too short for Im z = " + std::to_string(z.imag()));
    CompensatedSum<Complex> acc;
    for (double t : zeros.ordinates()) {
        const double mag = std::exp(-t * z.imag());
        if (mag == 0.0) break;
        acc += std::polar(mag, t * z.real());
    }
    out.value = acc.value();
    return out;
}

/// W(t + i eps): the boundary distribution seen through smoothing.
inline CramerValue smoothed_trace(double t, double eps, const ZeroTable& zeros,
                                  double tolerance = default_cramer_tolerance)
{
    if (!(eps > 0.0)) throw Error(ErrorKind::domain, "smoothing eps must be positive");
    return cramer_W(Complex{t, eps}, zeros, tolerance);
}

/// Slope of log|W(t + i eps)| against -log eps over the ladder.
inline double growth_exponent(double t, const std::vector<double>& ladder, const ZeroTable& zeros,
                              double tolerance = default_cramer_tolerance)
{
    std::vector<double> x, y;
    for (double e : ladder) {
        x.push_back(-std::log(e));
        y.push_back(std::log(std::abs(smoothed_trace(t, e, zeros, tolerance).value)));
    }
    return regression_slope(x, y);
}

/// Exponent alpha of a fit W(t + i eps) ~ C eps^{-alpha} + B through the first,
/// middle and last ladder levels. The constant B absorbs the regular part.
inline double pole_order(double t, const std::vector<double>& ladder, const ZeroTable& zeros,
                         double tolerance = default_cramer_tolerance)
{
    if (ladder.size() < 3) throw Error(ErrorKind::domain, "pole order needs at least 3 ladder levels");
    const double e0 = ladder.front(), e1 = ladder[ladder.size() / 2], e2 = ladder.back();
    const Complex w0 = smoothed_trace(t, e0, zeros, tolerance).value;
    const Complex w1 = smoothed_trace(t, e1, zeros, tolerance).value;
    const Complex w2 = smoothed_trace(t, e2, zeros, tolerance).value;
    const double target = std::abs((w2 - w1) / (w1 - w0));
    // (e2^-a - e1^-a) / (e1^-a - e0^-a) increases with a.
    auto ratio = [&](double a) {
        if (std::abs(a) < 1e-9) return std::log(e1 / e2) / std::log(e0 / e1);
        return (std::pow(e2, -a) - std::pow(e1, -a)) / (std::pow(e1, -a) - std::pow(e0, -a));
    };
    double lo = -4.0, hi = 4.0;
    if (!(target > ratio(lo))) return lo;
    if (!(target < ratio(hi))) return hi;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ratio(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct DetectedSingularity {
    double location = 0.0;
    double growth_exponent = 0.0;
    double pole_order = 0.0;
    double nearest_prime_power = 0.0;
    double distance = 0.0;
};

struct SingularityReport {
    std::vector<DetectedSingularity> detected;
    std::pair<double, double> window{0.0, 0.0};
    std::vector<double> epsilon_ladder;
    std::vector<double> regular_grid_points;
};

struct ScanOptions {
    double growth_threshold = 0.8;
    /// Grid spacing; must not exceed the smallest ladder eps. Defaults to half of it.
    std::optional<double> grid_step;
    double min_window_start = 0.3;
    double tolerance = default_cramer_tolerance;
};

namespace detail {

/// Fits W(z) ~ (a z + b)/(z + c) through samples on the line Im z = eps and
/// returns the real part of the pole -c.
inline double mobius_pole(double center, double eps, double half_span, const ZeroTable& zeros,
                          double tolerance)
{
    constexpr int n = 7;
    Eigen::MatrixXcd A(n, 3);
    Eigen::VectorXcd rhs(n);
    for (int k = 0; k < n; ++k) {
        const Complex z{center + half_span * (2.0 * k / (n - 1) - 1.0), eps};
        const Complex w = cramer_W(z, zeros, tolerance).value;
        // a z + b - c w = w z
        A(k, 0) = z;
        A(k, 1) = 1.0;
        A(k, 2) = -w;
        rhs(k) = w * z;
    }
    const Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(rhs);
    return -sol(2).real();
}

} // namespace detail

/// Locates points of the window where |W(t + i eps)| grows like 1/eps along the
/// ladder, refining each by a local pole fit.
inline SingularityReport singularity_scan(std::pair<double, double> window, const std::vector<double>& ladder,
                                          const ZeroTable& zeros, const ScanOptions& opt = {})
{
    const auto [a, b] = window;
    if (!(a >= opt.min_window_start && b > a))
        throw Error(ErrorKind::domain, "scan window must lie in (0.3, infinity) with a < b");
    if (ladder.size() < 3) throw Error(ErrorKind::domain, "epsilon ladder needs at least 3 levels");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0)) throw Error(ErrorKind::domain, "ladder entries must be positive");
        if (i > 0 && !(ladder[i] < ladder[i - 1]))
            throw Error(ErrorKind::domain, "ladder must be strictly decreasing");
    }
    const double eps_min = ladder.back();
    const double h = opt.grid_step.value_or(0.5 * eps_min);
    if (!(h > 0.0) || h > eps_min)
        throw Error(ErrorKind::resolution, "grid spacing exceeds the smallest ladder eps");

    SingularityReport rep;
    rep.window = window;
    rep.epsilon_ladder = ladder;

    const auto n = static_cast<std::size_t>(std::floor((b - a) / h)) + 1;
    std::vector<double> ts(n), mags(n), expo(n);
    parallel_indexed(n, [&](std::size_t i) {
        ts[i] = a + static_cast<double>(i) * h;
        mags[i] = std::abs(smoothed_trace(ts[i], eps_min, zeros, opt.tolerance).value);
        expo[i] = growth_exponent(ts[i], ladder, zeros, opt.tolerance);
    });

    const auto grid = prime_power_grid(b + 1.0);
    auto nearest = [&](double x) {
        double best = grid.empty() ? 0.0 : grid.front();
        for (double g : grid)
            if (std::abs(g - x) < std::abs(best - x)) best = g;
        return best;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (expo[i] < opt.growth_threshold) rep.regular_grid_points.push_back(ts[i]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(mags[i] >= mags[i - 1] && mags[i] > mags[i + 1])) continue;
        if (expo[i] < opt.growth_threshold) continue;
        double loc = detail::mobius_pole(ts[i], eps_min, 2.0 * eps_min, zeros, opt.tolerance);
        if (!(std::abs(loc - ts[i]) <= 2.0 * h)) loc = ts[i];
        if (loc <= a || loc >= b) continue;
        if (!rep.detected.empty() && std::abs(rep.detected.back().location - loc) < 2.0 * h) continue;
        DetectedSingularity d;
        d.location = loc;
        d.growth_exponent = growth_exponent(loc, ladder, zeros, opt.tolerance);
        d.pole_order = pole_order(loc, ladder, zeros, opt.tolerance);
        d.nearest_prime_power = nearest(loc);
        d.distance = std::abs(loc - d.nearest_prime_power);
        rep.detected.push_back(d);
    }
    return rep;
}

/// Residue weight log p / p^{m/2} of the pole at m log p.
inline double pole_weight(std::uint64_t p, int m)
{
    return std::log(static_cast<double>(p)) / std::pow(static_cast<double>(p), 0.5 * m);
}

} // namespace arithdyn

#endif
