#ifndef ARITHDYN_COMPLEX_TORSION_HPP
#define ARITHDYN_COMPLEX_TORSION_HPP

// Integral cohomology of cochain complexes (Smith normal form), the determinant
// of a based acyclic real complex, and the leading-coefficient identity that
// ties a Ruelle zeta function to cohomology ranks, torsion orders and that
// determinant.

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "integer_matrix.hpp"
#include "regdet.hpp"

namespace arithdyn {

/// 0 -> Z^{n_0} -> Z^{n_1} -> ... -> Z^{n_r} -> 0, d^i of shape n_{i+1} x n_i.
class IntegerCochainComplex {
public:
    IntegerCochainComplex(std::vector<std::size_t> ranks, std::vector<IntMatrix> differentials)
        : ranks_(std::move(ranks)), d_(std::move(differentials))
    {
        if (ranks_.empty()) throw Error(ErrorKind::domain, "complex needs at least one degree");
        if (d_.size() + 1 != ranks_.size())
            throw Error(ErrorKind::domain, "need exactly one differential between consecutive degrees");
        for (std::size_t i = 0; i < d_.size(); ++i)
            if (d_[i].rows() != ranks_[i + 1] || d_[i].cols() != ranks_[i])
                throw Error(ErrorKind::domain, "differential d^" + std::to_string(i) + " has the wrong shape");
        for (std::size_t i = 0; i + 1 < d_.size(); ++i)
            if (!(d_[i + 1] * d_[i]).is_zero())
                throw Error(ErrorKind::complex_condition,
                            "d^" + std::to_string(i + 1) + " d^" + std::to_string(i) + " is not zero");
    }

    std::size_t top_degree() const noexcept { return ranks_.size() - 1; }
    const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
    const std::vector<IntMatrix>& differentials() const noexcept { return d_; }

private:
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> d_;
};

struct DegreeCohomology {
    std::size_t rank = 0;
    std::vector<BigInt> torsion; // elementary divisors > 1, each dividing the next

    BigInt torsion_order() const
    {
        BigInt o = 1;
        for (const auto& t : torsion) o *= t;
        return o;
    }
};

struct CohomologyResult {
    std::vector<DegreeCohomology> degrees;

    long euler_characteristic() const
    {
        long chi = 0;
        for (std::size_t i = 0; i < degrees.size(); ++i)
            chi += (i % 2 == 0 ? 1 : -1) * static_cast<long>(degrees[i].rank);
        return chi;
    }
};

/// H^i = ker d^i / im d^{i-1}. Free rank from the ranks of d^i and d^{i-1},
/// torsion from the invariant factors of d^{i-1}.
inline CohomologyResult integral_cohomology(const IntegerCochainComplex& C)
{
    const auto& n = C.ranks();
    std::vector<SmithForm> snf;
    for (const auto& d : C.differentials()) snf.push_back(smith_normal_form(d));

    CohomologyResult out;
    for (std::size_t i = 0; i < n.size(); ++i) {
        DegreeCohomology h;
        const std::size_t out_rank = i < snf.size() ? snf[i].rank : 0;
        const std::size_t in_rank = i > 0 ? snf[i - 1].rank : 0;
        h.rank = n[i] - out_rank - in_rank;
        if (i > 0)
            for (const auto& s : snf[i - 1].invariant_factors())
                if (s > 1) h.torsion.push_back(s);
        out.degrees.push_back(std::move(h));
    }
    return out;
}

/// prod_i |H^i_tors|^{(-1)^{i+1}}.
inline double reidemeister_from_torsion(const IntegerCochainComplex& C)
{
    const auto H = integral_cohomology(C);
    double tau = 1.0;
    for (std::size_t i = 0; i < H.degrees.size(); ++i) {
        const double t = H.degrees[i].torsion_order().convert_to<double>();
        tau *= i % 2 == 0 ? 1.0 / t : t;
    }
    return tau;
}

// ---------------------------------------------------------------------------
// Real complexes

constexpr double rank_threshold = 1e-9;

/// Numerical rank: singular values above rank_threshold times the largest.
inline std::size_t numeric_rank(const Eigen::MatrixXd& m)
{
    if (m.size() == 0) return 0;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_threshold * sv(0)) ++r;
    return r;
}

/// A based complex of real vector spaces, V^0 -> ... -> V^r. bases[i] holds the
/// basis vectors of V^i as columns.
class RealAcyclicComplex {
public:
    RealAcyclicComplex(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXd> maps,
                       std::vector<Eigen::MatrixXd> bases)
        : dims_(std::move(dims)), d_(std::move(maps)), bases_(std::move(bases))
    {
        if (dims_.empty()) throw Error(ErrorKind::domain, "complex needs at least one degree");
        if (d_.size() + 1 != dims_.size() || bases_.size() != dims_.size())
            throw Error(ErrorKind::domain, "maps and bases do not match the degrees");
        for (std::size_t i = 0; i < d_.size(); ++i)
            if (static_cast<std::size_t>(d_[i].rows()) != dims_[i + 1]
                || static_cast<std::size_t>(d_[i].cols()) != dims_[i])
                throw Error(ErrorKind::domain, "map D^" + std::to_string(i) + " has the wrong shape");
        for (std::size_t i = 0; i < bases_.size(); ++i)
            if (static_cast<std::size_t>(bases_[i].rows()) != dims_[i]
                || static_cast<std::size_t>(bases_[i].cols()) != dims_[i])
                throw Error(ErrorKind::domain, "basis in degree " + std::to_string(i) + " is not square");
        for (std::size_t i = 0; i + 1 < d_.size(); ++i) {
            const double scale = std::max(1.0, d_[i + 1].norm() * d_[i].norm());
            if ((d_[i + 1] * d_[i]).norm() > rank_threshold * scale)
                throw Error(ErrorKind::complex_condition,
                            "D^" + std::to_string(i + 1) + " D^" + std::to_string(i) + " is not zero");
        }
    }

    /// Same spaces and maps, standard bases.
    RealAcyclicComplex(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXd> maps)
        : RealAcyclicComplex(dims, maps, standard_bases(dims))
    {}

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<Eigen::MatrixXd>& maps() const noexcept { return d_; }
    const std::vector<Eigen::MatrixXd>& bases() const noexcept { return bases_; }

    RealAcyclicComplex with_bases(std::vector<Eigen::MatrixXd> bases) const { return {dims_, d_, std::move(bases)}; }

    std::size_t map_rank(std::size_t i) const { return i < d_.size() ? numeric_rank(d_[i]) : 0; }

    /// First degree where rank D^i + rank D^{i-1} != dim V^i.
    std::optional<std::size_t> failing_degree() const
    {
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            const std::size_t in = i > 0 ? map_rank(i - 1) : 0;
            if (map_rank(i) + in != dims_[i]) return i;
        }
        return std::nullopt;
    }
    bool is_acyclic() const { return !failing_degree(); }

    static std::vector<Eigen::MatrixXd> standard_bases(const std::vector<std::size_t>& dims)
    {
        std::vector<Eigen::MatrixXd> b;
        for (std::size_t n : dims) b.push_back(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
        return b;
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<Eigen::MatrixXd> d_;
    std::vector<Eigen::MatrixXd> bases_;
};

namespace detail {

inline Eigen::MatrixXd random_well_conditioned(Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
        if (n == 0) return m;
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const auto& sv = svd.singularValues();
        if (sv(n - 1) > 1e-2 * sv(0)) return m;
    }
}

/// Alternating product of |det [c^i, c~^i] / b^i| with internal choices c^i (a basis of D(V^{i-1})) and
/// lifts c~^{i} with D c~^i = c^{i+1}. A non-null rng re-chooses both at random.
inline double acyclic_determinant_impl(const RealAcyclicComplex& V, std::mt19937_64* rng)
{
    if (const auto bad = V.failing_degree())
        throw Error(ErrorKind::non_acyclic, "complex is not exact in degree " + std::to_string(*bad));
    const auto& dims = V.dims();
    const auto& D = V.maps();
    const std::size_t top = dims.size();

    std::vector<Eigen::MatrixXd> c(top);
    for (std::size_t i = 0; i < top; ++i) {
        const auto n = static_cast<Eigen::Index>(dims[i]);
        if (i == 0) {
            c[i] = Eigen::MatrixXd(n, 0);
            continue;
        }
        const auto r = static_cast<Eigen::Index>(V.map_rank(i - 1));
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(D[i - 1], Eigen::ComputeThinU);
        c[i] = svd.matrixU().leftCols(r);
        if (rng && r > 0) c[i] = c[i] * random_well_conditioned(r, *rng);
    }

    double det = 1.0;
    for (std::size_t i = 0; i < top; ++i) {
        const auto n = static_cast<Eigen::Index>(dims[i]);
        Eigen::MatrixXd lift(n, 0);
        if (i + 1 < top && c[i + 1].cols() > 0) {
            lift = D[i].completeOrthogonalDecomposition().solve(c[i + 1]);
            if (rng && c[i].cols() > 0) {
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                Eigen::MatrixXd k(c[i].cols(), lift.cols());
                for (Eigen::Index j = 0; j < k.size(); ++j) k.data()[j] = u(*rng);
                lift += c[i] * k; // D c^i = 0
            }
        }
        Eigen::MatrixXd frame(n, n);
        frame << c[i], lift;
        const double ratio = std::abs(V.bases()[i].determinant()) / std::abs(frame.determinant());
        det *= i % 2 == 0 ? ratio : 1.0 / ratio;
    }
    return det;
}

} // namespace detail

/// det(V, D, b) = prod_i |[b^i / (c^i, c~^i)]|^{(-1)^i}.
inline double acyclic_determinant(const RealAcyclicComplex& V) { return detail::acyclic_determinant_impl(V, nullptr); }

/// Same determinant with c^i and c~^i re-chosen at random; must agree with the plain one.
inline double acyclic_determinant(const RealAcyclicComplex& V, std::mt19937_64& rng)
{
    return detail::acyclic_determinant_impl(V, &rng);
}

/// prod_i |[b^i / a^i]|^{(-1)^i}, so det(V, D, b) = det(V, D, a) * factor.
inline double base_change_factor(const std::vector<Eigen::MatrixXd>& b, const std::vector<Eigen::MatrixXd>& a)
{
    if (a.size() != b.size()) throw Error(ErrorKind::domain, "base families cover different degrees");
    double f = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols() || a[i].rows() != a[i].cols())
            throw Error(ErrorKind::domain, "bases in degree " + std::to_string(i) + " have different shapes");
        const double da = std::abs(a[i].determinant());
        const double db = std::abs(b[i].determinant());
        auto singular = [](const Eigen::MatrixXd& m, double d) {
            double vol = 1.0;
            for (Eigen::Index j = 0; j < m.cols(); ++j) vol *= m.col(j).norm();
            return !(d > 1e-12 * vol);
        };
        if (singular(a[i], da) || singular(b[i], db))
            throw Error(ErrorKind::singular_basis, "basis in degree " + std::to_string(i) + " is singular");
        const double ratio = db / da;
        f *= i % 2 == 0 ? ratio : 1.0 / ratio;
    }
    return f;
}

/// Cohomology ranks with cup-by-generator matrices; psi = psi_multiple * generator.
struct CupPsiData {
    std::vector<std::size_t> cohomology_ranks;
    std::vector<IntMatrix> cup_matrices; // degree i -> i+1
    double psi_multiple = 1.0;
};

struct CupPsiComplex {
    RealAcyclicComplex complex;
    bool acyclic = false;
    std::optional<std::size_t> failing_degree;
};

/// D = psi cup on real cohomology, with the integral bases as standard bases.
inline CupPsiComplex cup_psi_complex(const CupPsiData& data)
{
    std::vector<Eigen::MatrixXd> maps;
    for (const auto& m : data.cup_matrices) {
        Eigen::MatrixXd r(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data.psi_multiple * m(i, j).convert_to<double>();
        maps.push_back(std::move(r));
    }
    for (std::size_t i = 0; i + 1 < data.cup_matrices.size(); ++i)
        if (!(data.cup_matrices[i + 1] * data.cup_matrices[i]).is_zero())
            throw Error(ErrorKind::complex_condition, "cup matrices do not compose to zero");
    RealAcyclicComplex V(data.cohomology_ranks, std::move(maps));
    const auto bad = V.failing_degree();
    return {std::move(V), !bad, bad};
}

struct SpecialValueReport {
    bool within_hypotheses = true;
    // a
    bool acyclic = false;
    std::optional<std::size_t> failing_degree;
    // b
    long order_zeta = 0;
    long order_cohomology = 0;
    bool order_equal = false;
    // c
    double zeta_star = 0.0;
    double torsion_det_quotient = 0.0;
    double abs_error = 0.0;
    bool leading_equal = false;

    bool passed() const { return acyclic && order_equal && leading_equal; }

    std::string summary() const
    {
        std::ostringstream s;
        if (!within_hypotheses) s << "outside hypotheses (flow not isometric); values reported only\n";
        s << "acyclicity of psi-cup complex: " << (acyclic ? "ok" : "FAILED");
        if (failing_degree) s << " (degree " << *failing_degree << ")";
        s << "\norder at s=0 vs sum (-1)^i i rk H^i: " << order_zeta << " vs " << order_cohomology
          << (order_equal ? " ok" : " FAILED") << "\nleading coefficient vs torsion/determinant quotient: ";
        s.precision(15);
        s << zeta_star << " vs " << torsion_det_quotient << " (|diff| " << abs_error << ")"
          << (leading_equal ? " ok" : " FAILED");
        return s.str();
    }
};

constexpr double leading_coefficient_tolerance = 1e-10;

/// Compares the zeta side (order and leading coefficient of the Euler product)
/// with the cohomology side. `integral_bases` default to the standard bases of
/// the cup complex. Non-isometric systems are evaluated but flagged.
inline SpecialValueReport special_value_check(const EulerFactorProduct& zeta, const IntegerCochainComplex& C,
                                     const CupPsiData& data,
                                     const std::optional<std::vector<Eigen::MatrixXd>>& integral_bases = std::nullopt,
                                     bool isometric = true)
{
    const CohomologyResult H = integral_cohomology(C);
    if (H.degrees.size() != data.cohomology_ranks.size())
        throw Error(ErrorKind::consistency, "cup data and complex cover different degrees");
    for (std::size_t i = 0; i < H.degrees.size(); ++i)
        if (H.degrees[i].rank != data.cohomology_ranks[i])
            throw Error(ErrorKind::consistency, "rank of H^" + std::to_string(i) + " is "
                                                    + std::to_string(H.degrees[i].rank) + " but cup data says "
                                                    + std::to_string(data.cohomology_ranks[i]));

    SpecialValueReport rep;
    rep.within_hypotheses = isometric;
    CupPsiComplex cup = cup_psi_complex(data);
    rep.acyclic = cup.acyclic;
    rep.failing_degree = cup.failing_degree;

    const LeadingData lead = leading_data(zeta);
    rep.order_zeta = lead.order;
    for (std::size_t i = 0; i < H.degrees.size(); ++i)
        rep.order_cohomology += (i % 2 == 0 ? 1 : -1) * static_cast<long>(i * H.degrees[i].rank);
    rep.order_equal = rep.order_zeta == rep.order_cohomology;

    rep.zeta_star = lead.leading_coefficient;
    if (rep.acyclic) {
        const RealAcyclicComplex V = integral_bases ? cup.complex.with_bases(*integral_bases) : cup.complex;
        double torsion = 1.0;
        for (std::size_t i = 0; i < H.degrees.size(); ++i) {
            const double t = H.degrees[i].torsion_order().convert_to<double>();
            torsion *= i % 2 == 0 ? t : 1.0 / t;
        }
        rep.torsion_det_quotient = torsion / acyclic_determinant(V);
        // The identity holds up to sign.
        rep.abs_error = std::abs(std::abs(rep.zeta_star) - rep.torsion_det_quotient);
        rep.leading_equal = rep.abs_error <= leading_coefficient_tolerance;
    } else {
        rep.torsion_det_quotient = std::numeric_limits<double>::quiet_NaN();
        rep.abs_error = std::numeric_limits<double>::infinity();
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Standard examples

/// 0 -> Z -> Z -> 0 with d = [n]; n = 0 is the cellular circle.
inline IntegerCochainComplex multiplication_complex(long long n)
{
    return IntegerCochainComplex({1, 1}, {IntMatrix{{n}}});
}

inline IntegerCochainComplex circle_complex() { return multiplication_complex(0); }

/// Cellular cochains of the 2-torus: ranks (1, 2, 1), zero differentials.
inline IntegerCochainComplex torus_complex()
{
    return IntegerCochainComplex({1, 2, 1}, {IntMatrix(2, 1), IntMatrix(1, 2)});
}

/// Cochains of the mapping torus of a 2x2 integer matrix A acting on the
/// 2-torus: C^k = C^k(T^2) + C^{k-1}(T^2), d(x, y) = (0, (A^* - 1) x).
/// A^* is 1 on H^0, A^T on H^1 and det A on H^2.
inline IntegerCochainComplex mapping_torus_complex(const IntMatrix& A)
{
    if (A.rows() != 2 || A.cols() != 2) throw Error(ErrorKind::domain, "mapping torus needs a 2x2 matrix");
    const BigInt det = determinant(A);
    if (abs(det) != 1) throw Error(ErrorKind::domain, "mapping torus needs det A = +-1");
    const IntMatrix AtI = A.transpose() - IntMatrix::identity(2);

    IntMatrix d0(3, 1); // (x in C^0) -> (C^1(T^2), C^0(T^2)); A^* - 1 = 0 on H^0
    IntMatrix d1(3, 3); // (x in C^1, y in C^0) -> (C^2(T^2), C^1(T^2))
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) d1(1 + i, j) = AtI(i, j);
    IntMatrix d2(1, 3); // (x in C^2, y in C^1) -> (y' in C^2)
    d2(0, 0) = det - 1;
    return IntegerCochainComplex({1, 3, 3, 1}, {d0, d1, d2});
}

/// Circle of length log q: H^0 -> H^1 cup with the generator is the identity.
inline CupPsiData circle_cup_data(double q)
{
    return {{1, 1}, {IntMatrix{{1}}}, std::log(q)};
}

/// 2-torus fibred over the circle of length log q: H^0 = <1>, H^1 = <e, eta>,
/// H^2 = <[X]>; cup with e sends 1 -> e and eta -> [X].
inline CupPsiData torus_cup_data(double q)
{
    return {{1, 2, 1}, {IntMatrix{{1}, {0}}, IntMatrix{{0, 1}}}, std::log(q)};
}

} // namespace arithdyn

#endif
