#ifndef ARITHDYN_ANALYTIC_KERNEL_HPP
#define ARITHDYN_ANALYTIC_KERNEL_HPP

// Special-function backbone: complex log-Gamma, Hurwitz zeta with its analytic
// continuation and s-derivative (Euler–Maclaurin with an explicit remainder
// bound), and the Hardy Z function.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "error.hpp"
#include "numeric.hpp"

namespace arithdyn {

struct HurwitzValue {
    Complex value;
    Complex s_derivative;
    double error_bound = 0.0;
    double derivative_error_bound = 0.0;
    long terms_used = 0;
};

namespace detail {

inline void require_finite(Complex z, const char* what)
{
    if (!is_finite(z)) throw Error(ErrorKind::domain, std::string(what) + " must be finite");
}

/// Euler–Maclaurin evaluation of sum_{n>=0} (n + a)^{-s}, continued to s != 1.
/// `a` may be complex with Re(a) > 0; all powers use the principal branch.
inline HurwitzValue hurwitz_em(Complex s, Complex a, bool with_derivative,
                               const PrecisionPolicy& policy)
{
    policy.validate();
    require_finite(s, "s");
    require_finite(a, "a");
    if (!(a.real() > 0.0)) throw Error(ErrorKind::domain, "Hurwitz parameter needs Re(a) > 0");
    if (std::abs(s - 1.0) < 64.0 * std::numeric_limits<double>::epsilon())
        throw Error(ErrorKind::pole, "Hurwitz zeta has a pole at s = 1");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double two_pi = 2.0 * std::numbers::pi;
    const double sigma = s.real();
    const auto& bern = bernoulli_ratios();
    const int max_k = max_bernoulli_index() - 1;
    const bool real_a = a.imag() == 0.0;

    long n_split = static_cast<long>(std::ceil(1.3 * (std::abs(s) + 40.0) / two_pi - a.real()));
    n_split = std::max(n_split, 8L);

    while (n_split <= policy.max_terms) {
        CompensatedSum<Complex> direct, ddirect;
        // Rounding errors of the terms are independent; combine them in quadrature.
        double rounding_sq = 0.0;
        for (long n = 0; n < n_split; ++n) {
            Complex term, log_base;
            if (real_a) {
                const double base = static_cast<double>(n) + a.real();
                const double lb = std::log(base);
                const double mag = std::exp(-sigma * lb);
                const double phase = -s.imag() * lb;
                term = {mag * std::cos(phase), mag * std::sin(phase)};
                log_base = lb;
            } else {
                log_base = std::log(static_cast<double>(n) + a);
                term = std::exp(-s * log_base);
            }
            direct += term;
            const double mag = std::abs(term);
            const double r = mag * (std::abs(s) * std::abs(log_base) + 2.0);
            rounding_sq += r * r;
            if (with_derivative) ddirect += -log_base * term;
        }

        const Complex x = static_cast<double>(n_split) + a;
        const Complex lx = std::log(x);
        const Complex xs = std::exp(-s * lx); // x^{-s}
        const Complex inv_sm1 = 1.0 / (s - 1.0);
        CompensatedSum<Complex> tail, dtail;
        tail += x * xs * inv_sm1;
        tail += 0.5 * xs;
        if (with_derivative) {
            dtail += x * xs * (-lx * inv_sm1 - inv_sm1 * inv_sm1);
            dtail += -0.5 * lx * xs;
        }

        // Rising factorial (s)_{2k-1} and its s-derivative, updated incrementally.
        Complex poch = s, dpoch = 1.0;
        Complex pw = xs / x; // x^{-s-2k+1} for k = 1
        const Complex inv_x2 = 1.0 / (x * x);
        bool converged = false;
        double bound = 0.0, dbound = 0.0;
        for (int k = 1; k <= max_k; ++k) {
            const double bk = bern[static_cast<std::size_t>(k)];
            tail += bk * poch * pw;
            if (with_derivative) dtail += bk * (dpoch - poch * lx) * pw;

            // (s)_{2k} = (s)_{2k-1} (s + 2k - 1)
            const Complex f1 = s + static_cast<double>(2 * k - 1);
            const Complex poch_even = poch * f1;
            const Complex dpoch_even = dpoch * f1 + poch;
            const double denom = sigma + 2.0 * k - 1.0;
            if (denom > 0.5) {
                const double scale = 4.0 * std::pow(two_pi, -2.0 * k) * std::abs(pw) / denom;
                bound = scale * std::abs(poch_even);
                dbound = scale * (std::abs(poch_even) * (std::abs(lx) + 1.0) + std::abs(dpoch_even));
                if (bound < 0.25 * policy.target_abs_error
                    && (!with_derivative || dbound < 0.25 * policy.target_abs_error)) {
                    converged = true;
                    break;
                }
            }
            const Complex f2 = s + static_cast<double>(2 * k);
            poch = poch_even * f2;
            dpoch = dpoch_even * f2 + poch_even;
            pw *= inv_x2;
            if (!is_finite(poch) || !is_finite(pw)) break;
        }

        if (converged) {
            HurwitzValue out;
            out.value = direct.value() + tail.value();
            out.s_derivative = with_derivative ? ddirect.value() + dtail.value() : Complex{};
            const double round_err = eps * (3.0 * std::sqrt(rounding_sq) + std::abs(out.value) * 8.0);
            out.error_bound = bound + round_err;
            out.derivative_error_bound = with_derivative ? dbound + round_err * (std::abs(lx) + 1.0) : 0.0;
            out.terms_used = n_split;
            if (!is_finite(out.value)) throw Error(ErrorKind::accuracy, "non-finite Hurwitz value");
            return out;
        }
        n_split *= 2;
    }
    throw Error(ErrorKind::accuracy, "Hurwitz zeta term budget exhausted before reaching target error");
}

inline void require_unit_parameter(double a)
{
    if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::domain, "Hurwitz parameter a must lie in (0, 1]");
}

} // namespace detail

/// log Gamma(z) for Re z > 0, continuous branch agreeing with the real logarithm on
/// the positive axis (shift to |z| large, then Stirling).
inline Complex log_gamma(Complex z)
{
    detail::require_finite(z, "z");
    if (!(z.real() > 0.0)) throw Error(ErrorKind::domain, "log_gamma requires Re(z) > 0");

    CompensatedSum<Complex> shift;
    Complex w = z;
    while (std::abs(w) < 16.0) {
        shift += std::log(w);
        w += 1.0;
    }
    const auto& bern = bernoulli_ratios();
    const Complex inv = 1.0 / w;
    const Complex inv2 = inv * inv;
    CompensatedSum<Complex> acc;
    acc += (w - 0.5) * std::log(w);
    acc += -w;
    acc += 0.5 * std::log(2.0 * std::numbers::pi);
    // B_{2k} / (2k (2k-1) w^{2k-1}) = b_k (2k-2)! / w^{2k-1}
    Complex pw = inv;
    double fact = 1.0; // (2k-2)!
    for (int k = 1; k <= 20; ++k) {
        if (k > 1) fact *= (2.0 * k - 3.0) * (2.0 * k - 2.0);
        const Complex term = bern[static_cast<std::size_t>(k)] * fact * pw;
        acc += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(acc.value()))) break;
        pw *= inv2;
    }
    return acc.value() - shift.value();
}

inline Complex log_gamma(double x) { return log_gamma(Complex{x, 0.0}); }

/// Analytic continuation of sum_{n>=0} (n + a)^{-s}, a in (0, 1].
inline Complex hurwitz_zeta(Complex s, double a, const PrecisionPolicy& policy = {})
{
    detail::require_unit_parameter(a);
    return detail::hurwitz_em(s, Complex{a, 0.0}, false, policy).value;
}

/// d/ds of the Hurwitz zeta, computed term by term in the Euler–Maclaurin expansion.
inline Complex hurwitz_zeta_s_derivative(Complex s, double a, const PrecisionPolicy& policy = {})
{
    detail::require_unit_parameter(a);
    return detail::hurwitz_em(s, Complex{a, 0.0}, true, policy).s_derivative;
}

/// Hurwitz zeta and its s-derivative for complex a with Re(a) > 0.
/// Used by the regularized-determinant pipeline, whose shifts are complex.
inline HurwitzValue hurwitz_zeta_general(Complex s, Complex a, bool with_derivative = true,
                                         const PrecisionPolicy& policy = {})
{
    return detail::hurwitz_em(s, a, with_derivative, policy);
}

inline Complex riemann_zeta(Complex s, const PrecisionPolicy& policy = {})
{
    return detail::hurwitz_em(s, Complex{1.0, 0.0}, false, policy).value;
}

/// Riemann–Siegel theta: arg Gamma(1/4 + it/2) - (t/2) log pi.
inline double hardy_theta(double t)
{
    return log_gamma(Complex{0.25, 0.5 * t}).imag() - 0.5 * t * std::log(std::numbers::pi);
}

struct HardyZValue {
    double value = 0.0;
    double imag_residue = 0.0; // Im(e^{i theta} zeta(1/2 + it)); zero in exact arithmetic
    double error_bound = 0.0;
};

inline PrecisionPolicy hardy_default_policy() { return PrecisionPolicy{1e-10, 2'000'000}; }

inline HardyZValue hardy_Z_detail(double t, const PrecisionPolicy& policy = hardy_default_policy())
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::domain, "hardy_Z requires finite t >= 0");
    PrecisionPolicy inner = policy;
    inner.target_abs_error = std::max(policy.target_abs_error * 0.1,
                                      8.0 * std::numeric_limits<double>::epsilon());
    const HurwitzValue z = detail::hurwitz_em(Complex{0.5, t}, Complex{1.0, 0.0}, false, inner);
    const double theta = hardy_theta(t);
    const Complex rotated = std::polar(1.0, theta) * z.value;
    HardyZValue out;
    out.value = rotated.real();
    out.imag_residue = rotated.imag();
    out.error_bound = z.error_bound + std::abs(z.value) * std::numeric_limits<double>::epsilon()
            * (std::abs(theta) + 4.0);
    if (out.error_bound > policy.target_abs_error)
        throw Error(ErrorKind::accuracy,
                    "hardy_Z cannot meet target error " + std::to_string(policy.target_abs_error)
                        + " at t = " + std::to_string(t));
    return out;
}

/// Hardy's Z(t) = e^{i theta(t)} zeta(1/2 + it), real with |Z(t)| = |zeta(1/2 + it)|.
inline double hardy_Z(double t, const PrecisionPolicy& policy = hardy_default_policy())
{
    return hardy_Z_detail(t, policy).value;
}

} // namespace arithdyn

#endif
