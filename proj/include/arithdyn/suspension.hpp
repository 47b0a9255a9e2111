#ifndef ARITHDYN_SUSPENSION_HPP
#define ARITHDYN_SUSPENSION_HPP

// Suspension flows of discrete systems: closed orbits, their lengths and signs,
// Ruelle zeta functions as exact power series in u = e^{-s * unit length}, and
// the rank of the group generated by the periods.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "complex_torsion.hpp"
#include "error.hpp"
#include "integer_matrix.hpp"
#include "regdet.hpp"

namespace arithdyn {

using Rational = boost::multiprecision::cpp_rational;

enum class SystemKind { permutation, toral };

/// Either a permutation of {1..n} given by its cycles, or an invertible 2x2
/// integer matrix acting on the 2-torus. Return times are measured in a basis
/// of formal symbols: one symbol "log p" for a prime scale p, or a declared list
/// with one roof vector per point of a permutation.
struct DiscreteSystem {
    SystemKind kind = SystemKind::permutation;
    std::size_t points = 0;
    std::vector<std::vector<std::size_t>> cycles; // 1-based
    IntMatrix matrix;
    std::vector<std::string> symbols;
    std::vector<double> symbol_values;
    std::vector<std::vector<long>> roofs; // per point, over `symbols`

    static DiscreteSystem permutation(std::size_t n, std::vector<std::vector<std::size_t>> cycles, std::uint64_t p);
    static DiscreteSystem permutation(std::size_t n, std::vector<std::vector<std::size_t>> cycles,
                                      std::vector<std::string> symbols, std::vector<double> symbol_values,
                                      std::vector<std::vector<long>> roofs);
    static DiscreteSystem toral(IntMatrix A, std::uint64_t p);

    void validate() const;
};

inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void DiscreteSystem::validate() const
{
    if (symbols.empty() || symbols.size() != symbol_values.size())
        throw Error(ErrorKind::domain, "length basis must name one value per symbol");
    for (double v : symbol_values)
        if (!(v > 0.0)) throw Error(ErrorKind::domain, "length basis values must be positive");
    if (kind == SystemKind::toral) {
        if (matrix.rows() != 2 || matrix.cols() != 2) throw Error(ErrorKind::domain, "toral system needs a 2x2 matrix");
        if (determinant(matrix) == 0) throw Error(ErrorKind::domain, "toral matrix must be invertible");
        return;
    }
    std::vector<int> seen(points + 1, 0);
    for (const auto& c : cycles) {
        if (c.empty()) throw Error(ErrorKind::domain, "empty cycle");
        for (std::size_t x : c) {
            if (x < 1 || x > points) throw Error(ErrorKind::domain, "cycle entry " + std::to_string(x) + " out of range");
            if (seen[x]++) throw Error(ErrorKind::domain, "point " + std::to_string(x) + " appears twice");
        }
    }
    for (std::size_t x = 1; x <= points; ++x)
        if (!seen[x]) throw Error(ErrorKind::domain, "cycles do not cover point " + std::to_string(x));
    if (roofs.size() != points) throw Error(ErrorKind::domain, "need one roof vector per point");
    for (const auto& r : roofs) {
        if (r.size() != symbols.size()) throw Error(ErrorKind::domain, "roof vector length differs from the symbol basis");
        double len = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) len += static_cast<double>(r[j]) * symbol_values[j];
        if (!(len > 0.0)) throw Error(ErrorKind::domain, "roof function must be positive");
    }
}

inline DiscreteSystem DiscreteSystem::permutation(std::size_t n, std::vector<std::vector<std::size_t>> cycles,
                                                  std::uint64_t p)
{
    if (!is_prime(p)) throw Error(ErrorKind::domain, "scale p must be prime");
    DiscreteSystem s;
    s.kind = SystemKind::permutation;
    s.points = n;
    s.cycles = std::move(cycles);
    s.symbols = {"log" + std::to_string(p)};
    s.symbol_values = {std::log(static_cast<double>(p))};
    s.roofs.assign(n, std::vector<long>{1});
    s.validate();
    return s;
}

inline DiscreteSystem DiscreteSystem::permutation(std::size_t n, std::vector<std::vector<std::size_t>> cycles,
                                                  std::vector<std::string> symbols, std::vector<double> symbol_values,
                                                  std::vector<std::vector<long>> roofs)
{
    DiscreteSystem s;
    s.kind = SystemKind::permutation;
    s.points = n;
    s.cycles = std::move(cycles);
    s.symbols = std::move(symbols);
    s.symbol_values = std::move(symbol_values);
    s.roofs = std::move(roofs);
    s.validate();
    return s;
}

inline DiscreteSystem DiscreteSystem::toral(IntMatrix A, std::uint64_t p)
{
    if (!is_prime(p)) throw Error(ErrorKind::domain, "scale p must be prime");
    DiscreteSystem s;
    s.kind = SystemKind::toral;
    s.matrix = std::move(A);
    s.symbols = {"log" + std::to_string(p)};
    s.symbol_values = {std::log(static_cast<double>(p))};
    s.validate();
    return s;
}

struct ClosedOrbit {
    std::vector<long> length_symbolic;
    double length_numeric = 0.0;
    int sign = 1;
    int multiplicity = 1;
};

/// One closed orbit per cycle; its length is the roof summed along the cycle.
/// The sign is +1: the leaves are points, so the linearised return map is empty.
inline std::vector<ClosedOrbit> orbits_of_permutation(const DiscreteSystem& sys)
{
    if (sys.kind != SystemKind::permutation) throw Error(ErrorKind::domain, "not a permutation system");
    std::vector<ClosedOrbit> out;
    for (const auto& c : sys.cycles) {
        ClosedOrbit o;
        o.length_symbolic.assign(sys.symbols.size(), 0);
        for (std::size_t x : c)
            for (std::size_t j = 0; j < sys.symbols.size(); ++j) o.length_symbolic[j] += sys.roofs[x - 1][j];
        for (std::size_t j = 0; j < sys.symbols.size(); ++j)
            o.length_numeric += static_cast<double>(o.length_symbolic[j]) * sys.symbol_values[j];
        out.push_back(std::move(o));
    }
    return out;
}

namespace detail {

inline std::vector<BigInt> det_I_minus_powers(const IntMatrix& A, int k_max)
{
    if (A.rows() != 2 || A.cols() != 2) throw Error(ErrorKind::domain, "toral map needs a 2x2 matrix");
    if (k_max < 1) throw Error(ErrorKind::domain, "k_max must be positive");
    std::vector<BigInt> out;
    IntMatrix P = IntMatrix::identity(2);
    for (int k = 1; k <= k_max; ++k) {
        P = P * A;
        const BigInt d = determinant(IntMatrix::identity(2) - P);
        if (d == 0)
            throw Error(ErrorKind::degeneracy,
                        "det(A^" + std::to_string(k) + " - I) = 0: an eigenvalue is a root of unity");
        out.push_back(d);
    }
    return out;
}

} // namespace detail

/// F_k = |det(A^k - I)|, the number of points of period dividing k on the torus.
inline std::vector<BigInt> fixed_counts_toral(const IntMatrix& A, int k_max)
{
    auto d = detail::det_I_minus_powers(A, k_max);
    for (auto& x : d) x = abs(x);
    return d;
}

/// epsilon at period k: sign of det(I - A^k).
inline std::vector<int> orbit_signs_toral(const IntMatrix& A, int k_max)
{
    std::vector<int> s;
    for (const auto& d : detail::det_I_minus_powers(A, k_max)) s.push_back(d > 0 ? 1 : -1);
    return s;
}

inline int moebius(long n)
{
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

/// O_k = (1/k) sum_{d | k} mu(k/d) F_d: primitive orbits of length k.
inline std::vector<BigInt> orbit_counts_from_fixed(const std::vector<BigInt>& F)
{
    std::vector<BigInt> O;
    for (long k = 1; k <= static_cast<long>(F.size()); ++k) {
        BigInt acc = 0;
        for (long d = 1; d <= k; ++d)
            if (k % d == 0) acc += moebius(k / d) * F[static_cast<std::size_t>(d - 1)];
        if (acc < 0 || acc % k != 0)
            throw Error(ErrorKind::inconsistency,
                        "fixed-point counts do not come from a map (orbit count at length " + std::to_string(k) + ")");
        O.push_back(acc / k);
    }
    return O;
}

/// O_1..O_kmax for a toral map by listing the points fixed by A^k and following
/// each one around its orbit; the points of period exactly k come in orbits of k.
inline std::vector<BigInt> enumerate_orbit_counts_toral(const IntMatrix& A, int k_max)
{
    detail::det_I_minus_powers(A, k_max); // rejects degenerate maps
    std::vector<BigInt> out;
    IntMatrix P = IntMatrix::identity(2);
    for (int k = 1; k <= k_max; ++k) {
        P = P * A;
        // Fixed points are M^{-1} Z^2 / Z^2 with M = A^k - I; in Smith coordinates
        // S V^{-1} x in Z^2, so x = V (m1 / s1, m2 / s2).
        const SmithForm f = smith_normal_form(P - IntMatrix::identity(2));
        const long long s1 = f.S(0, 0).convert_to<long long>();
        const long long D = f.S(1, 1).convert_to<long long>();
        auto mod = [D](const BigInt& v) {
            BigInt r = v % D;
            if (r < 0) r += D;
            return r.convert_to<long long>();
        };
        const long long v00 = mod(f.V(0, 0)), v01 = mod(f.V(0, 1)), v10 = mod(f.V(1, 0)), v11 = mod(f.V(1, 1));
        const long long a00 = mod(A(0, 0)), a01 = mod(A(0, 1)), a10 = mod(A(1, 0)), a11 = mod(A(1, 1));
        long long exact = 0;
        for (long long m1 = 0; m1 < s1; ++m1)
            for (long long m2 = 0; m2 < D; ++m2) {
                // D x mod D
                const long long y1 = m1 * (D / s1) % D, y2 = m2;
                const long long x1 = (v00 * y1 + v01 * y2) % D, x2 = (v10 * y1 + v11 * y2) % D;
                long long z1 = x1, z2 = x2;
                int period = 0;
                do {
                    const long long n1 = (a00 * z1 + a01 * z2) % D, n2 = (a10 * z1 + a11 * z2) % D;
                    z1 = n1;
                    z2 = n2;
                    ++period;
                } while ((z1 != x1 || z2 != x2) && period <= k);
                if (period > k || k % period != 0)
                    throw Error(ErrorKind::inconsistency, "enumerated point does not return within its period");
                if (period == k) ++exact;
            }
        if (exact % k != 0) throw Error(ErrorKind::inconsistency, "points of exact period do not form whole orbits");
        out.emplace_back(exact / k);
    }
    return out;
}

/// F_k = 2^k - 1 for x -> 2x mod 1 on the circle.
inline std::vector<BigInt> fixed_counts_doubling(int k_max)
{
    if (k_max < 1 || k_max > 40) throw Error(ErrorKind::domain, "k_max must lie in [1, 40]");
    std::vector<BigInt> F;
    for (int k = 1; k <= k_max; ++k) F.push_back((BigInt(1) << k) - 1);
    return F;
}

/// O_k for the doubling map by following every point j / (2^k - 1) around its orbit.
inline std::vector<BigInt> enumerate_orbit_counts_doubling(int k_max)
{
    if (k_max < 1 || k_max > 24) throw Error(ErrorKind::domain, "k_max must lie in [1, 24]");
    std::vector<BigInt> out;
    for (int k = 1; k <= k_max; ++k) {
        const long long N = (1LL << k) - 1;
        long long exact = 0;
        for (long long j = 0; j < std::max(N, 1LL); ++j) {
            long long z = j;
            int period = 0;
            do {
                z = N == 1 ? 0 : 2 * z % N;
                ++period;
            } while (z != j);
            if (period == k) ++exact;
        }
        if (exact % k != 0) throw Error(ErrorKind::inconsistency, "points of exact period do not form whole orbits");
        out.emplace_back(exact / k);
    }
    return out;
}

/// Truncated power series with exact rational coefficients.
class FormalSeries {
public:
    explicit FormalSeries(std::size_t degree) : c_(degree + 1) { c_[0] = 1; }
    explicit FormalSeries(std::vector<Rational> coefficients) : c_(std::move(coefficients))
    {
        if (c_.empty()) throw Error(ErrorKind::domain, "series needs at least a constant term");
    }

    std::size_t degree() const noexcept { return c_.size() - 1; }
    const std::vector<Rational>& coefficients() const noexcept { return c_; }
    const Rational& operator[](std::size_t i) const { return c_.at(i); }

    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b)
    {
        const std::size_t d = std::min(a.degree(), b.degree());
        std::vector<Rational> r(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; i + j <= d; ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return FormalSeries(std::move(r));
    }

    friend bool operator==(const FormalSeries&, const FormalSeries&) = default;

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ", ";
            s += c_[i].str();
        }
        return s;
    }

private:
    std::vector<Rational> c_;
};

/// (1 - u^k)^{-m} truncated at degree d; m may be negative.
inline FormalSeries euler_factor_series(long k, const BigInt& m, std::size_t d)
{
    if (k < 1) throw Error(ErrorKind::domain, "factor degree must be positive");
    std::vector<Rational> c(d + 1);
    c[0] = 1;
    if (m == 0) return FormalSeries(std::move(c));
    // (1 - x)^{-m} = sum_j binom(m + j - 1, j) x^j, valid for every integer m.
    BigInt coef = 1;
    for (std::size_t j = 1; static_cast<std::size_t>(k) * j <= d; ++j) {
        coef = coef * (m + static_cast<long>(j) - 1) / static_cast<long>(j);
        c[static_cast<std::size_t>(k) * j] = Rational(coef);
    }
    return FormalSeries(std::move(c));
}

/// prod_k (1 - u^k)^{-eps_k O_k} to degree d. `signs` has one entry per length,
/// or is empty for eps = +1 throughout.
inline FormalSeries ruelle_series(const std::vector<BigInt>& counts, const std::vector<int>& signs, std::size_t d)
{
    if (!signs.empty() && signs.size() < counts.size())
        throw Error(ErrorKind::domain, "need a sign for every orbit length");
    FormalSeries z(d);
    for (std::size_t k = 1; k <= std::min(d, counts.size()); ++k) {
        const int eps = signs.empty() ? 1 : signs[k - 1];
        if (eps != 1 && eps != -1) throw Error(ErrorKind::domain, "orbit signs must be +1 or -1");
        z = z * euler_factor_series(static_cast<long>(k), eps * counts[k - 1], d);
    }
    return z;
}

/// Rank of the group generated by the symbolic orbit lengths.
inline std::size_t period_group_rank(const std::vector<std::vector<long>>& lengths)
{
    if (lengths.empty()) return 0;
    IntMatrix m(lengths.size(), lengths.front().size());
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i].size() != m.cols()) throw Error(ErrorKind::domain, "length vectors over different bases");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = lengths[i][j];
    }
    return smith_normal_form(m).rank;
}

inline std::size_t period_group_rank(const std::vector<ClosedOrbit>& orbits)
{
    std::vector<std::vector<long>> v;
    for (const auto& o : orbits) v.push_back(o.length_symbolic);
    return period_group_rank(v);
}

/// Writes every orbit length as k times a common primitive vector g and
/// returns (g, k per orbit). Fails when the lengths span rank > 1.
inline std::pair<std::vector<long>, std::vector<long>> common_length_unit(const std::vector<ClosedOrbit>& orbits)
{
    if (orbits.empty()) throw Error(ErrorKind::domain, "no orbits");
    if (period_group_rank(orbits) != 1)
        throw Error(ErrorKind::mixed_length, "orbit lengths are not commensurable (period group rank "
                                                 + std::to_string(period_group_rank(orbits)) + ")");
    const std::size_t n = orbits.front().length_symbolic.size();
    // The vectors are proportional; the unit is any of them divided by its content.
    std::vector<long> unit(n);
    const auto& v0 = orbits.front().length_symbolic;
    long c0 = 0;
    for (long x : v0) c0 = std::gcd(c0, x);
    for (std::size_t j = 0; j < n; ++j) unit[j] = v0[j] / c0;
    std::size_t pivot = 0;
    while (unit[pivot] == 0) ++pivot;
    if (unit[pivot] < 0)
        for (auto& x : unit) x = -x;
    std::vector<long> k;
    for (const auto& o : orbits) {
        const long m = o.length_symbolic[pivot] / unit[pivot];
        if (m < 1) throw Error(ErrorKind::mixed_length, "orbit length is not a positive multiple of the unit");
        k.push_back(m);
    }
    return {unit, k};
}

/// Ruelle series of a finite orbit list in u = e^{-s |unit|}.
inline FormalSeries ruelle_series(const std::vector<ClosedOrbit>& orbits, std::size_t d)
{
    const auto [unit, k] = common_length_unit(orbits);
    FormalSeries z(d);
    for (std::size_t i = 0; i < orbits.size(); ++i)
        z = z * euler_factor_series(k[i], BigInt(orbits[i].sign * orbits[i].multiplicity), d);
    return z;
}

/// exp(sum_k F_k u^k / k) via z_n = (1/n) sum_{k=1}^n F_k z_{n-k}.
inline FormalSeries artin_mazur_series(const std::vector<BigInt>& F, std::size_t d)
{
    if (F.size() < d) throw Error(ErrorKind::domain, "need fixed-point counts up to the series degree");
    std::vector<Rational> z(d + 1);
    z[0] = 1;
    for (std::size_t n = 1; n <= d; ++n) {
        Rational acc = 0;
        for (std::size_t k = 1; k <= n; ++k) acc += Rational(F[k - 1]) * z[n - k];
        z[n] = acc / static_cast<long>(n);
    }
    return FormalSeries(std::move(z));
}

/// prod over orbits of (1 - e^{-s l})^{-eps} as Euler factors with q = e^l.
inline EulerFactorProduct euler_product(const std::vector<ClosedOrbit>& orbits)
{
    EulerFactorProduct z;
    for (const auto& o : orbits) z.multiply(std::exp(o.length_numeric), -o.sign * o.multiplicity);
    return z;
}

/// Determinant of s - theta on leafwise H^0 (functions on the closed orbits):
/// one factor 1 - e^{-s l} per orbit.
inline std::vector<EulerFactorProduct> leafwise_determinants(const DiscreteSystem& sys)
{
    EulerFactorProduct h0;
    for (const auto& o : orbits_of_permutation(sys)) h0.multiply(std::exp(o.length_numeric), 1);
    return {h0};
}

struct SuspensionCohomology {
    IntegerCochainComplex complex;
    CupPsiData cup;
};

/// The suspension of a permutation with a single prime scale is a disjoint union
/// of circles of length |cycle| log p; psi cup sends 1_c to |cycle| log p times
/// the generator of H^1 of that circle.
inline SuspensionCohomology suspension_cohomology(const DiscreteSystem& sys)
{
    if (sys.kind != SystemKind::permutation || sys.symbols.size() != 1)
        throw Error(ErrorKind::domain, "cohomology data is available for single-scale permutation systems");
    const std::size_t m = sys.cycles.size();
    IntMatrix cup(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        long len = 0;
        for (std::size_t x : sys.cycles[i]) len += sys.roofs[x - 1][0];
        cup(i, i) = len;
    }
    return {IntegerCochainComplex({m, m}, {IntMatrix(m, m)}), CupPsiData{{m, m}, {cup}, sys.symbol_values[0]}};
}

} // namespace arithdyn

#endif
