#ifndef ARITHDYN_REGDET_HPP
#define ARITHDYN_REGDET_HPP

// Zeta-regularized determinants over the lattice {2 pi i nu / log q}, exact
// bookkeeping for products of Euler factors (1 - q^{-s})^e, and the analytic
// torsion of a circle.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "analytic_kernel.hpp"
#include "error.hpp"
#include "numeric.hpp"

namespace arithdyn {

/// The spectrum {2 pi i nu / log q : nu in Z} of d/dx on a circle of length log q.
class EigenvalueLattice {
public:
    explicit EigenvalueLattice(double q) : q_(q)
    {
        if (!(q > 1.0) || !std::isfinite(q)) throw Error(ErrorKind::domain, "lattice needs finite q > 1");
    }
    double q() const noexcept { return q_; }
    double period() const noexcept { return std::log(q_); }
    Complex eigenvalue(long nu) const { return {0.0, 2.0 * std::numbers::pi * static_cast<double>(nu) / period()}; }

private:
    double q_;
};

struct RegularizedDeterminant {
    Complex value;
    int vanishing_order = 0; // 1 when s sits on the lattice
    double error_bound = 0.0;
};

namespace detail {

/// exp(-d/dz [c^{-z} zeta_H(z, a)] at z = 0) = exp(zeta_H(0, a) log c - zeta_H'(0, a)),
/// i.e. the regularized product of c (n + a) over n >= 0. Shifts a to Re(a) > 0
/// by peeling the finite factors off.
inline Complex half_lattice_product(Complex c, Complex a, const PrecisionPolicy& policy, double& err)
{
    const Complex log_c = std::log(c);
    Complex finite_log{0.0, 0.0};
    int shift = 0;
    while (!(a.real() > 0.5)) {
        // zeta_H(z, a) = a^{-z} + zeta_H(z, a + 1)
        finite_log += log_c + std::log(a);
        a += 1.0;
        ++shift;
    }
    const HurwitzValue h = hurwitz_zeta_general(Complex{0.0, 0.0}, a, true, policy);
    err += h.error_bound * std::abs(log_c) + h.derivative_error_bound;
    return std::exp(h.value * log_c - h.s_derivative + finite_log);
}

} // namespace detail

/// det_reg(s - theta) over the lattice of q: the nu = 0 factor is s itself, the
/// half-lattices nu > 0 and nu < 0 are Hurwitz series with principal-branch powers.
inline RegularizedDeterminant circle_regdet(Complex s, double q, const PrecisionPolicy& policy = {})
{
    const EigenvalueLattice lattice(q);
    if (!is_finite(s)) throw Error(ErrorKind::domain, "s must be finite");
    const double L = lattice.period();
    const double two_pi = 2.0 * std::numbers::pi;

    RegularizedDeterminant out;
    const double nu = std::round(s.imag() * L / two_pi);
    if (std::abs(s - lattice.eigenvalue(static_cast<long>(nu))) <= 64.0 * std::numeric_limits<double>::epsilon()
                                                                      * std::max(1.0, std::abs(s))) {
        out.value = 0.0;
        out.vanishing_order = 1;
        return out;
    }

    // nu = n + 1 > 0: s - 2 pi i nu / L = (-2 pi i / L) (n + 1 + i s L / 2pi), and mirrored for nu < 0.
    const Complex beta = Complex{0.0, 1.0} * s * L / two_pi;
    const Complex c_plus{0.0, -two_pi / L};
    const Complex c_minus{0.0, two_pi / L};
    double err = 0.0;
    const Complex plus = detail::half_lattice_product(c_plus, 1.0 + beta, policy, err);
    const Complex minus = detail::half_lattice_product(c_minus, 1.0 - beta, policy, err);
    out.value = s * plus * minus;
    out.error_bound = err * std::abs(out.value) + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
    if (!is_finite(out.value)) throw Error(ErrorKind::accuracy, "regularized determinant overflowed");
    return out;
}

struct LeadingData {
    int order = 0;
    double leading_coefficient = 1.0;
    /// The leading coefficient as prod (log q)^k, kept symbolically.
    std::map<double, int> log_powers;

    /// True when the symbolic coefficient times prod (log q)^k over `other` is exactly 1.
    bool cancels(const std::map<double, int>& other) const
    {
        std::map<double, int> m = log_powers;
        for (const auto& [q, k] : other)
            if ((m[q] += k) == 0) m.erase(q);
        return m.empty();
    }
};

/// prod_j (1 - q_j^{-s})^{e_j}, kept canonical: one entry per q, no zero exponents.
class EulerFactorProduct {
public:
    EulerFactorProduct() = default;
    EulerFactorProduct(std::initializer_list<std::pair<double, int>> factors)
    {
        for (const auto& [q, e] : factors) multiply(q, e);
    }

    void multiply(double q, int exponent)
    {
        if (!(q > 1.0) || !std::isfinite(q)) throw Error(ErrorKind::domain, "Euler factor needs finite q > 1");
        if (exponent == 0) return;
        auto it = factors_.find(q);
        if (it == factors_.end()) {
            factors_.emplace(q, exponent);
        } else if ((it->second += exponent) == 0) {
            factors_.erase(it);
        }
    }

    EulerFactorProduct& operator*=(const EulerFactorProduct& o)
    {
        for (const auto& [q, e] : o.factors_) multiply(q, e);
        return *this;
    }

    EulerFactorProduct power(int k) const
    {
        EulerFactorProduct r;
        for (const auto& [q, e] : factors_) r.multiply(q, e * k);
        return r;
    }

    /// Sorted (q, exponent) pairs.
    std::vector<std::pair<double, int>> factors() const { return {factors_.begin(), factors_.end()}; }
    bool empty() const noexcept { return factors_.empty(); }

    Complex evaluate(Complex s) const
    {
        Complex v{1.0, 0.0};
        for (const auto& [q, e] : factors_) v *= std::pow(1.0 - std::exp(-s * std::log(q)), e);
        return v;
    }

    friend bool operator==(const EulerFactorProduct&, const EulerFactorProduct&) = default;

private:
    std::map<double, int> factors_;
};

/// Order and leading Taylor coefficient at s = 0; each factor 1 - q^{-s} is
/// s log q + O(s^2).
inline LeadingData leading_data(const EulerFactorProduct& prod)
{
    LeadingData d;
    for (const auto& [q, e] : prod.factors()) {
        d.order += e;
        d.leading_coefficient *= std::pow(std::log(q), e);
        d.log_powers[q] = e;
    }
    return d;
}

/// Alternating product of per-degree determinants with exponent (-1)^{i+1}.
inline EulerFactorProduct ruelle_from_factors(const std::vector<EulerFactorProduct>& per_degree)
{
    EulerFactorProduct r;
    for (std::size_t i = 0; i < per_degree.size(); ++i) r *= per_degree[i].power(i % 2 == 0 ? -1 : 1);
    return r;
}

/// Ray–Singer torsion of the circle of circumference L from the spectral zeta
/// function 2 (L / 2pi)^{2z} zeta(2z) of the Laplacian on nonzero modes.
inline double analytic_torsion_circle(double L, const PrecisionPolicy& policy = {})
{
    if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::domain, "circumference must be positive");
    const HurwitzValue z = hurwitz_zeta_general(Complex{0.0, 0.0}, Complex{1.0, 0.0}, true, policy);
    // d/dz [2 (L/2pi)^{2z} zeta(2z)] at 0
    const double dzeta = 4.0 * std::log(L / (2.0 * std::numbers::pi)) * z.value.real() + 4.0 * z.s_derivative.real();
    // Functions and 1-forms share the spectrum; only degree 1 carries weight i/2.
    return std::exp(-0.5 * dzeta);
}

} // namespace arithdyn

#endif
