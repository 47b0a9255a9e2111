#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "arithdyn/complex_torsion.hpp"
#include "arithdyn/suspension.hpp"

using namespace arithdyn;

namespace {

const IntMatrix cat{{2, 1}, {1, 1}};

std::vector<BigInt> ints(std::initializer_list<long long> v)
{
    return {v.begin(), v.end()};
}

// Brute-force product of the truncated factors (1 + u^k + u^{2k} + ...)^{O_k}
// using integer coefficient arrays.
std::vector<BigInt> euler_product_oracle(const std::vector<BigInt>& O, std::size_t d)
{
    std::vector<BigInt> z(d + 1);
    z[0] = 1;
    for (std::size_t k = 1; k <= std::min(d, O.size()); ++k) {
        for (BigInt m = 0; m < O[k - 1]; ++m) {
            std::vector<BigInt> next(d + 1);
            for (std::size_t i = 0; i <= d; ++i)
                for (std::size_t j = 0; i + j * k <= d; ++j) next[i + j * k] += z[i];
            z = std::move(next);
        }
    }
    return z;
}

void expect_series_equal(const FormalSeries& a, const FormalSeries& b)
{
    ASSERT_EQ(a.degree(), b.degree());
    for (std::size_t i = 0; i <= a.degree(); ++i) EXPECT_EQ(a[i], b[i]) << "coefficient " << i;
}

void expect_moebius_reconstruction(const std::vector<BigInt>& F, const std::vector<BigInt>& O)
{
    for (std::size_t k = 1; k <= F.size(); ++k) {
        BigInt s = 0;
        for (std::size_t d = 1; d <= k; ++d)
            if (k % d == 0) s += BigInt(d) * O[d - 1];
        EXPECT_EQ(s, F[k - 1]) << "k = " << k;
    }
}

} // namespace

TEST(Permutation, OrbitsOfTwoCycles)
{
    const auto sys = DiscreteSystem::permutation(5, {{1, 2}, {3, 4, 5}}, 2);
    const auto orbits = orbits_of_permutation(sys);
    ASSERT_EQ(orbits.size(), 2u);
    EXPECT_EQ(orbits[0].length_symbolic, std::vector<long>{2});
    EXPECT_EQ(orbits[1].length_symbolic, std::vector<long>{3});
    EXPECT_NEAR(std::exp(orbits[0].length_numeric), 4.0, 1e-12);
    EXPECT_NEAR(std::exp(orbits[1].length_numeric), 8.0, 1e-12);
    for (const auto& o : orbits) EXPECT_EQ(o.sign, 1);
}

TEST(Permutation, IdentityAndSingleCycle)
{
    const auto id = orbits_of_permutation(DiscreteSystem::permutation(3, {{1}, {2}, {3}}, 3));
    ASSERT_EQ(id.size(), 3u);
    for (const auto& o : id) EXPECT_NEAR(o.length_numeric, std::log(3.0), 1e-15);
    const auto one = orbits_of_permutation(DiscreteSystem::permutation(6, {{1, 2, 3, 4, 5, 6}}, 2));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one[0].length_numeric, 6.0 * std::log(2.0), 1e-14);
}

TEST(Permutation, ValidationErrors)
{
    EXPECT_THROW(DiscreteSystem::permutation(3, {{1, 2}}, 2), Error);
    EXPECT_THROW(DiscreteSystem::permutation(3, {{1, 2}, {2, 3}}, 2), Error);
    EXPECT_THROW(DiscreteSystem::permutation(3, {{1, 2}, {4}}, 2), Error);
    EXPECT_THROW(DiscreteSystem::permutation(2, {{1, 2}}, 4), Error);
    EXPECT_THROW(DiscreteSystem::permutation(2, {{1}, {2}}, {"a"}, {1.0}, {{1}, {-1}}), Error);
}

TEST(Permutation, OrbitsPartitionGroundSet)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::size_t> nd(1, 12);
        const std::size_t n = nd(rng);
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::vector<std::size_t>> cycles;
        std::vector<bool> seen(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (seen[i]) continue;
            std::vector<std::size_t> c;
            for (std::size_t j = i; !seen[j]; j = perm[j]) {
                seen[j] = true;
                c.push_back(j + 1);
            }
            cycles.push_back(c);
        }
        const auto sys = DiscreteSystem::permutation(n, cycles, 2);
        // F_k = points fixed by the k-th power, O_k by Moebius; sum k O_k = n.
        std::vector<BigInt> F;
        for (std::size_t k = 1; k <= n; ++k) {
            BigInt f = 0;
            for (const auto& c : cycles)
                if (k % c.size() == 0) f += static_cast<long>(c.size());
            F.push_back(f);
        }
        const auto O = orbit_counts_from_fixed(F);
        BigInt total = 0;
        for (std::size_t k = 1; k <= n; ++k) total += BigInt(k) * O[k - 1];
        EXPECT_EQ(total, n);
        EXPECT_EQ(orbits_of_permutation(sys).size(), cycles.size());
    }
}

TEST(Toral, FixedCounts)
{
    EXPECT_EQ(fixed_counts_toral(cat, 4), ints({1, 5, 16, 45}));
    const auto F = fixed_counts_toral(IntMatrix{{2, 0}, {0, 2}}, 10);
    for (int k = 1; k <= 10; ++k) {
        const BigInt m = (BigInt(1) << k) - 1;
        EXPECT_EQ(F[static_cast<std::size_t>(k - 1)], m * m);
    }
}

TEST(Toral, DegenerateMatrix)
{
    try {
        fixed_counts_toral(IntMatrix{{0, 1}, {1, 0}}, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
    }
    EXPECT_THROW(fixed_counts_toral(IntMatrix{{1, 1}, {0, 1}}, 3), Error);
}

TEST(Toral, Signs)
{
    for (int s : orbit_signs_toral(cat, 8)) EXPECT_EQ(s, -1);
    for (int s : orbit_signs_toral(IntMatrix{{2, 0}, {0, 2}}, 8)) EXPECT_EQ(s, 1);
    // Eigenvalues -2 and -3: det(I - A^k) = (1 - (-2)^k)(1 - (-3)^k) > 0 for every k.
    for (int s : orbit_signs_toral(IntMatrix{{-2, 0}, {0, -3}}, 8)) EXPECT_EQ(s, 1);
}

TEST(OrbitCounts, MoebiusExamples)
{
    EXPECT_EQ(orbit_counts_from_fixed(ints({1, 5, 16, 45})), ints({1, 2, 5, 10}));
    EXPECT_EQ(orbit_counts_from_fixed(ints({3, 3})), ints({3, 0}));
    EXPECT_EQ(orbit_counts_from_fixed(ints({0, 2})), ints({0, 1}));
    try {
        orbit_counts_from_fixed(ints({1, 2}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::inconsistency);
    }
}

TEST(OrbitCounts, EnumerationMatchesMoebiusForToralMaps)
{
    for (const IntMatrix& A : {cat, IntMatrix{{3, 1}, {2, 1}}, IntMatrix{{-2, 1}, {1, -1}}}) {
        const auto F = fixed_counts_toral(A, 12);
        const auto O = enumerate_orbit_counts_toral(A, 12);
        EXPECT_EQ(O, orbit_counts_from_fixed(F)) << to_string(A);
        expect_moebius_reconstruction(F, O);
    }
    const IntMatrix twice{{2, 0}, {0, 2}};
    EXPECT_EQ(enumerate_orbit_counts_toral(twice, 7), orbit_counts_from_fixed(fixed_counts_toral(twice, 7)));
}

TEST(OrbitCounts, EnumerationMatchesMoebiusForDoubling)
{
    const auto F = fixed_counts_doubling(16);
    const auto O = enumerate_orbit_counts_doubling(16);
    EXPECT_EQ(O, orbit_counts_from_fixed(F));
    EXPECT_EQ(O[11], 335);
    expect_moebius_reconstruction(F, O);
}

TEST(Series, RuelleExamples)
{
    const FormalSeries z = ruelle_series(ints({1, 2}), {}, 2);
    EXPECT_EQ(z.to_string(), "1, 1, 3");

    const auto single = orbits_of_permutation(DiscreteSystem::permutation(1, {{1}}, 2));
    const FormalSeries geo = ruelle_series(single, 5);
    for (std::size_t i = 0; i <= 5; ++i) EXPECT_EQ(geo[i], 1);

    const FormalSeries neg = ruelle_series(ints({1}), {-1}, 4);
    EXPECT_EQ(neg.to_string(), "1, -1, 0, 0, 0");
}

TEST(Series, ArtinMazurExamples)
{
    const FormalSeries zero = artin_mazur_series(ints({0, 0, 0, 0}), 4);
    EXPECT_EQ(zero.to_string(), "1, 0, 0, 0, 0");
    const FormalSeries two = artin_mazur_series(ints({2, 2, 2, 2, 2, 2}), 6);
    for (std::size_t k = 0; k <= 6; ++k) EXPECT_EQ(two[k], static_cast<long>(k + 1));
    EXPECT_THROW(artin_mazur_series(ints({1, 2}), 4), Error);
}

TEST(Series, EulerProductEqualsArtinMazurThroughDegreeTwelve)
{
    for (const IntMatrix& A : {cat, IntMatrix{{2, 0}, {0, 2}}, IntMatrix{{3, 1}, {2, 1}}}) {
        const auto F = fixed_counts_toral(A, 12);
        const auto O = orbit_counts_from_fixed(F);
        expect_series_equal(ruelle_series(O, {}, 12), artin_mazur_series(F, 12));
    }
    const auto F = fixed_counts_doubling(12);
    expect_series_equal(ruelle_series(enumerate_orbit_counts_doubling(12), {}, 12), artin_mazur_series(F, 12));
}

TEST(Series, MatchesBruteForceProduct)
{
    const auto O = orbit_counts_from_fixed(fixed_counts_toral(cat, 8));
    const FormalSeries z = ruelle_series(O, {}, 8);
    const auto oracle = euler_product_oracle(O, 8);
    for (std::size_t i = 0; i <= 8; ++i) EXPECT_EQ(z[i], oracle[i]) << i;
}

TEST(Series, SignedProductInvertsUnsigned)
{
    const auto O = orbit_counts_from_fixed(fixed_counts_toral(cat, 10));
    const std::vector<int> minus(10, -1);
    const FormalSeries prod = ruelle_series(O, {}, 10) * ruelle_series(O, minus, 10);
    for (std::size_t i = 0; i <= 10; ++i) EXPECT_EQ(prod[i], i == 0 ? 1 : 0);
}

TEST(PeriodGroup, RankExamples)
{
    EXPECT_EQ(period_group_rank(std::vector<std::vector<long>>{{2}, {3}}), 1u);
    EXPECT_EQ(period_group_rank(std::vector<std::vector<long>>{{1, 0}, {0, 1}}), 2u);
    EXPECT_EQ(period_group_rank(std::vector<std::vector<long>>{{1, 1}, {2, 2}}), 1u);
}

TEST(PeriodGroup, InvariantUnderReorderingAndTraversals)
{
    std::mt19937_64 rng(18);
    std::uniform_int_distribution<long> e(-3, 3);
    std::uniform_int_distribution<int> m(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<long>> v(4, std::vector<long>(3));
        for (auto& row : v)
            for (auto& x : row) x = e(rng);
        const std::size_t r = period_group_rank(v);
        auto w = v;
        std::shuffle(w.begin(), w.end(), rng);
        EXPECT_EQ(period_group_rank(w), r);
        const int k = m(rng);
        for (auto& x : w[0]) x *= k;
        EXPECT_EQ(period_group_rank(w), r);
    }
}

TEST(PeriodGroup, MixedLengthsHaveNoCommonUnit)
{
    const auto sys = DiscreteSystem::permutation(2, {{1}, {2}}, {"log2", "log3"}, {std::log(2.0), std::log(3.0)},
                                                 {{1, 0}, {0, 1}});
    const auto orbits = orbits_of_permutation(sys);
    EXPECT_EQ(period_group_rank(orbits), 2u);
    try {
        ruelle_series(orbits, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::mixed_length);
    }
}

TEST(PeriodGroup, CommonUnit)
{
    const auto sys = DiscreteSystem::permutation(3, {{1}, {2, 3}}, {"a", "b"}, {std::log(2.0), std::log(3.0)},
                                                 {{1, 1}, {1, 1}, {1, 1}});
    const auto [unit, k] = common_length_unit(orbits_of_permutation(sys));
    EXPECT_EQ(unit, (std::vector<long>{1, 1}));
    EXPECT_EQ(k, (std::vector<long>{1, 2}));
}

TEST(CrossModule, SingleOrbitCircleLeadingData)
{
    for (std::size_t n : {1u, 2u, 3u}) {
        std::vector<std::size_t> cycle(n);
        for (std::size_t i = 0; i < n; ++i) cycle[i] = i + 1;
        const auto sys = DiscreteSystem::permutation(n, {cycle}, 2);
        const double q = std::pow(2.0, static_cast<double>(n));
        const EulerFactorProduct z = ruelle_from_factors(leafwise_determinants(sys));
        EXPECT_EQ(z, euler_product(orbits_of_permutation(sys)));
        const LeadingData d = leading_data(z);
        EXPECT_EQ(d.order, -1);
        EXPECT_NEAR(d.leading_coefficient * std::log(q), 1.0, 1e-14);
    }
}

TEST(CrossModule, PermutationSpecialValue)
{
    const auto sys = DiscreteSystem::permutation(5, {{1, 2}, {3, 4, 5}}, 2);
    const SuspensionCohomology coh = suspension_cohomology(sys);
    const SpecialValueReport r =
        special_value_check(euler_product(orbits_of_permutation(sys)), coh.complex, coh.cup);
    EXPECT_EQ(r.order_zeta, -2);
    EXPECT_NEAR(r.zeta_star, 1.0 / (std::log(4.0) * std::log(8.0)), 1e-14);
    EXPECT_TRUE(r.passed()) << r.summary();
}
