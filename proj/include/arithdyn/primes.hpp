#ifndef ARITHDYN_PRIMES_HPP
#define ARITHDYN_PRIMES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "error.hpp"

namespace arithdyn {

/// Primes <= n (sieve of Eratosthenes).
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (std::uint64_t m = p * p; m <= n; m += p) composite[m] = true;
    }
    return out;
}

/// A prime-power atom k log p of the explicit formula, weighted by log p.
struct PrimePowerAtom {
    std::uint64_t prime;
    int exponent;
    double location; // exponent * log(prime)
    double weight;   // log(prime)
};

/// Largest height for which prime-power enumeration is attempted (sieve size e^h).
constexpr double max_prime_power_height = 18.0;

/// All atoms with lo < k log p < hi, sorted by location then prime.
inline std::vector<PrimePowerAtom> prime_power_atoms(double lo, double hi)
{
    if (!(hi <= max_prime_power_height))
        throw Error(ErrorKind::domain, "prime-power height above enumeration limit");
    std::vector<PrimePowerAtom> atoms;
    if (hi <= std::log(2.0)) return atoms;
    const auto bound = static_cast<std::uint64_t>(std::floor(std::exp(hi))) + 1;
    for (std::uint64_t p : primes_up_to(bound)) {
        const double lp = std::log(static_cast<double>(p));
        for (int k = 1; k * lp < hi; ++k) {
            const double x = k * lp;
            if (x > lo) atoms.push_back({p, k, x, lp});
        }
    }
    std::sort(atoms.begin(), atoms.end(), [](const PrimePowerAtom& a, const PrimePowerAtom& b) {
        return a.location < b.location || (a.location == b.location && a.prime < b.prime);
    });
    return atoms;
}

/// Sorted { m log p <= t_max : m >= 1, p prime }.
inline std::vector<double> prime_power_grid(double t_max)
{
    if (!(t_max > 0.0)) throw Error(ErrorKind::domain, "prime_power_grid needs t_max > 0");
    std::vector<double> out;
    for (const auto& a : prime_power_atoms(0.0, std::nextafter(t_max, 1e300))) out.push_back(a.location);
    return out;
}

} // namespace arithdyn

#endif
