#ifndef ARITHDYN_NUMERIC_HPP
#define ARITHDYN_NUMERIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <exception>
#include <thread>
#include <vector>

#include "error.hpp"

namespace arithdyn {

using Complex = std::complex<double>;

/// Accuracy contract shared by the series evaluators.
struct PrecisionPolicy {
    double target_abs_error = 1e-13;
    long max_terms = 2'000'000;

    void validate() const
    {
        if (!(target_abs_error >= 4.0 * std::numeric_limits<double>::epsilon()) || max_terms <= 0)
            throw Error(ErrorKind::domain, "precision policy out of range");
    }
};

inline bool is_finite(Complex z) noexcept
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Kahan–Babuška (Neumaier) accumulation. Works for double and std::complex<double>
/// since complex addition is componentwise.
template <class T>
class CompensatedSum {
public:
    CompensatedSum& operator+=(T x) noexcept
    {
        add_component(sum_, comp_, x);
        return *this;
    }
    T value() const noexcept { return sum_ + comp_; }

private:
    static void add_scalar(double& s, double& c, double x) noexcept
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    static void add_component(double& s, double& c, double x) noexcept { add_scalar(s, c, x); }
    static void add_component(Complex& s, Complex& c, Complex x) noexcept
    {
        double sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
        add_scalar(sr, cr, x.real());
        add_scalar(si, ci, x.imag());
        s = {sr, si};
        c = {cr, ci};
    }

    T sum_{};
    T comp_{};
};

template <class Range>
double compensated_total(const Range& xs)
{
    CompensatedSum<double> acc;
    for (double x : xs) acc += x;
    return acc.value();
}

namespace detail {

inline std::vector<double> make_bernoulli_ratios(int count)
{
    // b_k = B_{2k} / (2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
    std::vector<double> out(static_cast<std::size_t>(count) + 1, 0.0);
    out[0] = 1.0;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int k = 1; k <= count; ++k) {
        double zeta2k;
        if (k == 1) {
            zeta2k = std::numbers::pi * std::numbers::pi / 6.0;
        } else if (k == 2) {
            zeta2k = std::pow(std::numbers::pi, 4) / 90.0;
        } else {
            CompensatedSum<double> acc;
            for (int n = 1000; n >= 2; --n) acc += std::pow(static_cast<double>(n), -2.0 * k);
            acc += std::pow(1000.5, 1.0 - 2.0 * k) / (2.0 * k - 1.0);
            zeta2k = 1.0 + acc.value();
        }
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        out[static_cast<std::size_t>(k)] = sign * 2.0 * zeta2k * std::pow(two_pi, -2.0 * k);
    }
    return out;
}

} // namespace detail

/// B_{2k}/(2k)! for k = 0..max_bernoulli_index().
inline const std::vector<double>& bernoulli_ratios()
{
    static const std::vector<double> table = detail::make_bernoulli_ratios(120);
    return table;
}
constexpr int max_bernoulli_index() noexcept { return 120; }

/// Adaptive Simpson with Richardson correction. Intended for smooth integrands.
class AdaptiveSimpson {
public:
    explicit AdaptiveSimpson(double abs_tol = 1e-12, int max_depth = 40)
        : abs_tol_(abs_tol), max_depth_(max_depth)
    {
    }

    template <class F>
    double integrate(F&& f, double a, double b) const
    {
        // Split into a few panels first so a narrow feature cannot be skipped.
        constexpr int panels = 16;
        const double h = (b - a) / panels;
        CompensatedSum<double> acc;
        for (int i = 0; i < panels; ++i) {
            const double lo = a + i * h;
            const double hi = (i + 1 == panels) ? b : lo + h;
            const double m = 0.5 * (lo + hi);
            const double flo = f(lo), fm = f(m), fhi = f(hi);
            const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
            acc += recurse(f, lo, hi, flo, fm, fhi, whole, abs_tol_ / panels, max_depth_);
        }
        return acc.value();
    }

private:
    template <class F>
    double recurse(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) const
    {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    double abs_tol_;
    int max_depth_;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton on P_n).
inline QuadratureRule gauss_legendre(int n)
{
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

/// Composite Gauss–Legendre rule on [a, b] with `panels` equal panels.
inline QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 16)
{
    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule out;
    out.nodes.reserve(static_cast<std::size_t>(panels * order));
    out.weights.reserve(static_cast<std::size_t>(panels * order));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int j = 0; j < order; ++j) {
            out.nodes.push_back(lo + 0.5 * h * (base.nodes[static_cast<std::size_t>(j)] + 1.0));
            out.weights.push_back(0.5 * h * base.weights[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

/// Worker count: ARITHDYN_THREADS caps the hardware concurrency.
inline unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ARITHDYN_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Calls f(i) for i in [0, n) on contiguous blocks, one per worker. Results must
/// be written by index; the first exception thrown is rethrown.
template <class F>
void parallel_indexed(std::size_t n, F&& f)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / 16)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = n * w / workers; i < n * (w + 1) / workers; ++i) f(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Least-squares slope of y against x.
inline double regression_slope(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace arithdyn

#endif
