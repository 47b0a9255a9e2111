#ifndef ARITHDYN_CLI_HPP
#define ARITHDYN_CLI_HPP

// Command-line front end. Exit codes: 0 all checks passed, 1 a check failed,
// 2 bad input. CSV goes to --out, the summary to the output stream.

#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "complex_torsion.hpp"
#include "cramer.hpp"
#include "error.hpp"
#include "explicit_formula.hpp"
#include "io.hpp"
#include "primes.hpp"
#include "quadratic_fields.hpp"
#include "regdet.hpp"
#include "suspension.hpp"
#include "zeta_zeros.hpp"

namespace arithdyn::cli {

struct RunConfig {
    std::string command;
    std::string action; // zeros: compute | check
    std::string zeros_path, complex_path, system_path, out_path;
    std::optional<double> tmax;
    std::optional<double> tol; // each command has its own default
    double tail_tol = 1e-5;
    std::vector<double> centers, widths;
    std::vector<double> window{0.5, 2.0};
    std::vector<double> ladder{0.05, 0.02, 0.01};
    double match = 1e-3;
    double min_weight = 0.2;
    std::string zeta;
    std::vector<long> d;
    long degree = 12;
    std::uint64_t seed = 0;

    void validate() const
    {
        if ((tol && !(*tol > 0.0)) || !(tail_tol > 0.0) || !(match > 0.0) || !(min_weight > 0.0))
            throw Error(ErrorKind::domain, "tolerances must be positive");
    }
};

/// Runs the acceptance suite and returns an exit code.
using AcceptanceRunner = std::function<int(const RunConfig&, std::ostream&)>;

namespace detail {

/// A check that exceeded its tolerance; maps to exit code 1.
struct CheckFailed {
    std::string identity;
    std::string detail;
};

inline void emit(const CsvTable& t, const RunConfig& cfg, std::ostream& out)
{
    if (cfg.out_path.empty()) {
        t.write(out);
    } else {
        t.write(cfg.out_path);
        out << "wrote " << t.size() << " rows to " << cfg.out_path << '\n';
    }
}

inline std::string fmt(double x) { return csv_number(x); }

inline int zeros_cmd(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.action == "compute") {
        const double T = cfg.tmax.value_or(100.0);
        const ZeroTable z = compute_zeros(T);
        if (cfg.out_path.empty()) {
            write_zero_table(out, z);
        } else {
            write_zero_table(cfg.out_path, z);
            out << "computed " << z.size() << " zeros with 0 < t <= " << fmt(T) << ", wrote " << cfg.out_path << '\n';
        }
        return 0;
    }
    if (cfg.zeros_path.empty()) throw Error(ErrorKind::parse, "zeros check needs --zeros");
    const ZeroTable z = load_zero_table(cfg.zeros_path);
    std::vector<double> heights;
    if (cfg.tmax) {
        heights.push_back(*cfg.tmax);
    } else {
        for (double T : {50.0, 100.0, 200.0})
            if (T <= z.coverage()) heights.push_back(T);
        if (heights.empty()) heights.push_back(z.coverage());
    }
    CsvTable t({"T", "observed", "smooth_estimate", "discrepancy", "flagged"});
    std::optional<CheckFailed> fail;
    for (double T : heights) {
        const ZeroCountReport r = zero_count_check(z, T);
        t.row({fmt(T), std::to_string(r.observed), fmt(r.smooth_estimate), fmt(r.discrepancy), r.flagged ? "1" : "0"});
        if (r.flagged && !fail)
            fail = CheckFailed{"zero counting (Riemann-von Mangoldt)",
                               "|N(T) - smooth count| = " + fmt(std::abs(r.discrepancy)) + " > 2 at T = " + fmt(T)};
    }
    emit(t, cfg, out);
    out << z.size() << " ordinates, coverage " << fmt(z.coverage()) << '\n';
    if (fail) throw *fail;
    return 0;
}

inline int ef_cmd(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.zeros_path.empty()) throw Error(ErrorKind::parse, "ef-check needs --zeros");
    const ZeroTable z = load_zero_table(cfg.zeros_path);
    std::vector<double> centers = cfg.centers, widths = cfg.widths;
    if (centers.empty()) centers = {std::log(2.0), std::log(3.0), 2.0 * std::log(2.0), 0.35, 1.25, 2.0};
    if (widths.empty()) widths = {0.05, 0.1};

    const double tol = cfg.tol.value_or(1e-6);
    CsvTable t({"center", "width", "zeros_used", "primes_used", "spectral", "arithmetic", "residual", "tail_bound"});
    std::optional<CheckFailed> fail;
    double worst = 0.0;
    for (double c : centers)
        for (double w : widths) {
            const ExplicitFormulaCheck r = explicit_formula_check(bump(c, w), z, cfg.tail_tol);
            t.row({fmt(c), fmt(w), std::to_string(r.spectral.zeros_used), std::to_string(r.arithmetic.primes_used),
                   fmt(r.spectral.value), fmt(r.arithmetic.value), fmt(r.residual), fmt(r.spectral.truncation_bound)});
            worst = std::max(worst, r.residual);
            if (!(r.residual < tol) && !fail)
                fail = CheckFailed{"explicit formula (sum over zeros = sum over prime powers)",
                                   "residual " + fmt(r.residual) + " >= " + fmt(tol) + " for the bump at "
                                       + fmt(c) + " of width " + fmt(w)};
        }
    emit(t, cfg, out);
    out << "explicit formula: " << centers.size() * widths.size() << " test functions, " << z.size()
        << " zeros, max residual " << fmt(worst) << '\n';
    if (fail) throw *fail;
    return 0;
}

inline int cramer_cmd(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.zeros_path.empty()) throw Error(ErrorKind::parse, "cramer-scan needs --zeros");
    if (cfg.window.size() != 2) throw Error(ErrorKind::parse, "--window takes two numbers a,b");
    const ZeroTable z = load_zero_table(cfg.zeros_path);
    ScanOptions opt;
    opt.tolerance = cfg.tol.value_or(default_cramer_tolerance);
    const SingularityReport rep = singularity_scan({cfg.window[0], cfg.window[1]}, cfg.ladder, z, opt);

    CsvTable t({"location", "growth_exponent", "pole_order", "nearest_prime_power", "distance"});
    std::optional<CheckFailed> fail;
    for (const auto& d : rep.detected) {
        t.row({fmt(d.location), fmt(d.growth_exponent), fmt(d.pole_order), fmt(d.nearest_prime_power), fmt(d.distance)});
        if (d.distance > cfg.match && !fail)
            fail = CheckFailed{"singular support of W (poles only at m log p)",
                               "detection at " + fmt(d.location) + " is " + fmt(d.distance) + " from every m log p"};
    }
    for (const auto& a : prime_power_atoms(cfg.window[0], cfg.window[1])) {
        if (pole_weight(a.prime, a.exponent) < cfg.min_weight) continue;
        const bool found = std::any_of(rep.detected.begin(), rep.detected.end(),
                                       [&](const DetectedSingularity& d) { return std::abs(d.location - a.location) <= cfg.match; });
        if (!found && !fail)
            fail = CheckFailed{"singular support of W (poles only at m log p)",
                               "pole at " + std::to_string(a.exponent) + " log " + std::to_string(a.prime) + " = " + fmt(a.location)
                                   + " not detected"};
    }
    emit(t, cfg, out);
    out << "scan of (" << fmt(cfg.window[0]) << ", " << fmt(cfg.window[1]) << "): " << rep.detected.size()
        << " singularities, " << rep.regular_grid_points.size() << " regular grid points\n";
    for (const auto& d : rep.detected)
        out << "  t = " << fmt(d.location) << "  growth exponent " << fmt(d.growth_exponent) << "  pole order "
            << fmt(d.pole_order) << '\n';
    if (fail) throw *fail;
    return 0;
}

inline int regdet_cmd(const RunConfig& cfg, std::ostream& out)
{
    const double tol = cfg.tol.value_or(1e-10);
    CsvTable t({"identity", "q", "s_re", "s_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error"});
    std::optional<CheckFailed> fail;
    double worst = 0.0;
    for (double q : {2.0, 3.0, 5.0, std::numbers::e})
        for (Complex s : {Complex{0.5, 0.0}, Complex{1.0, 0.0}, Complex{2.0, 0.0}, Complex{1.0, 1.0}}) {
            const Complex lhs = circle_regdet(s, q).value;
            const Complex rhs = 1.0 - std::exp(-s * std::log(q));
            const double e = std::abs(lhs - rhs);
            worst = std::max(worst, e);
            t.row({"lerch", fmt(q), fmt(s.real()), fmt(s.imag()), fmt(lhs.real()), fmt(lhs.imag()), fmt(rhs.real()),
                   fmt(rhs.imag()), fmt(e)});
            if (!(e < tol) && !fail)
                fail = CheckFailed{"Lerch formula det(s - theta) = 1 - q^{-s}", "error " + fmt(e) + " at q = " + fmt(q)};
        }
    for (double q : {2.0, 3.0, 10.0}) {
        const LeadingData lead = leading_data(EulerFactorProduct{{q, -1}});
        const double prod = analytic_torsion_circle(std::log(q)) * lead.leading_coefficient;
        const double e = std::abs(prod - 1.0);
        worst = std::max(worst, e);
        t.row({"torsion", fmt(q), "0", "0", fmt(prod), "0", "1", "0", fmt(e)});
        if (!(e < tol) && !fail)
            fail = CheckFailed{"circle torsion T(S^1) * zeta*(0) = 1", "error " + fmt(e) + " at q = " + fmt(q)};
    }
    emit(t, cfg, out);
    out << "regularized determinants: 16 Lerch points and 3 torsion checks, max error " << fmt(worst) << '\n';
    if (fail) throw *fail;
    return 0;
}

inline void print_cohomology(const CohomologyResult& H, std::ostream& out)
{
    for (std::size_t i = 0; i < H.degrees.size(); ++i) {
        out << "H^" << i << " = Z^" << H.degrees[i].rank;
        for (const auto& t : H.degrees[i].torsion) out << " + Z/" << t.str();
        out << '\n';
    }
}

inline void special_value_rows(const SpecialValueReport& r, CsvTable& t)
{
    t.row({"acyclicity", r.failing_degree ? std::to_string(*r.failing_degree) : "", "", "", r.acyclic ? "1" : "0"});
    t.row({"order", std::to_string(r.order_zeta), std::to_string(r.order_cohomology), "0", r.order_equal ? "1" : "0"});
    t.row({"leading_coefficient", fmt(r.zeta_star), fmt(r.torsion_det_quotient), fmt(r.abs_error),
           r.leading_equal ? "1" : "0"});
}

inline std::optional<CheckFailed> special_value_failure(const SpecialValueReport& r)
{
    if (!r.within_hypotheses) return std::nullopt;
    if (!r.acyclic)
        return CheckFailed{"acyclicity of the psi-cup complex",
                           "not exact in degree " + (r.failing_degree ? std::to_string(*r.failing_degree) : "?")};
    if (!r.order_equal)
        return CheckFailed{"vanishing order ord_0 zeta = sum (-1)^i i rk H^i",
                           std::to_string(r.order_zeta) + " vs " + std::to_string(r.order_cohomology)};
    if (!r.leading_equal)
        return CheckFailed{"leading coefficient zeta*(0) = torsion quotient / det(H, psi cup)",
                           "|difference| " + fmt(r.abs_error)};
    return std::nullopt;
}

inline int torsion_cmd(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.complex_path.empty()) throw Error(ErrorKind::parse, "torsion needs --complex");
    const ComplexFile f = load_complex_file(cfg.complex_path);
    if (!f.cup) throw Error(ErrorKind::parse, cfg.complex_path + ": no cup_matrices/psi data");
    const EulerFactorProduct zeta = !cfg.zeta.empty() ? parse_zeta_factors(cfg.zeta)
                                    : f.zeta ? *f.zeta
                                             : throw Error(ErrorKind::parse, "no zeta factors (use --zeta or \"zeta\")");

    const CohomologyResult H = integral_cohomology(f.complex);
    print_cohomology(H, out);
    const SpecialValueReport r = special_value_check(zeta, f.complex, *f.cup, std::nullopt, f.isometric);

    CsvTable t({"check", "lhs", "rhs", "abs_error", "passed"});
    special_value_rows(r, t);
    std::optional<CheckFailed> fail = special_value_failure(r);
    if (r.acyclic) {
        std::mt19937_64 rng(cfg.seed);
        const CupPsiComplex cup = cup_psi_complex(*f.cup);
        const double a = acyclic_determinant(cup.complex), b = acyclic_determinant(cup.complex, rng);
        const double e = std::abs(a - b) / std::abs(a);
        t.row({"determinant_rechoice", fmt(a), fmt(b), fmt(e), e < 1e-12 ? "1" : "0"});
        if (!(e < 1e-12) && !fail)
            fail = CheckFailed{"independence of det(V, D, b) from internal choices", "relative change " + fmt(e)};
    }
    emit(t, cfg, out);
    out << r.summary() << '\n';
    if (fail) throw *fail;
    return 0;
}

inline int suspension_cmd(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.system_path.empty()) throw Error(ErrorKind::parse, "suspension needs --system");
    if (cfg.degree < 1 || cfg.degree > 24) throw Error(ErrorKind::domain, "--d must lie in [1, 24]");
    const DiscreteSystem sys = load_system_file(cfg.system_path);
    const auto d = static_cast<std::size_t>(cfg.degree);
    const int kd = static_cast<int>(cfg.degree);

    std::vector<BigInt> F, O_enum;
    std::vector<int> signs(d, 1);
    std::optional<SpecialValueReport> special;
    if (sys.kind == SystemKind::toral) {
        F = fixed_counts_toral(sys.matrix, kd);
        O_enum = enumerate_orbit_counts_toral(sys.matrix, kd);
        signs = orbit_signs_toral(sys.matrix, kd);
    } else {
        const auto orbits = orbits_of_permutation(sys);
        const std::size_t rank = period_group_rank(orbits);
        out << "period group rank " << rank << '\n';
        if (rank != 1) {
            // No single series variable; list the Euler factors instead.
            CsvTable t({"orbit", "length", "sign"});
            for (std::size_t i = 0; i < orbits.size(); ++i) {
                std::string len;
                for (std::size_t j = 0; j < sys.symbols.size(); ++j) {
                    if (orbits[i].length_symbolic[j] == 0) continue;
                    if (!len.empty()) len += " + ";
                    len += std::to_string(orbits[i].length_symbolic[j]) + " " + sys.symbols[j];
                }
                t.row({std::to_string(i + 1), len, std::to_string(orbits[i].sign)});
            }
            emit(t, cfg, out);
            return 0;
        }
        const auto [unit, k] = common_length_unit(orbits);
        F.assign(d, 0);
        O_enum.assign(d, 0);
        for (long m : k) {
            if (m <= cfg.degree) O_enum[static_cast<std::size_t>(m - 1)] += 1;
            for (long j = m; j <= cfg.degree; j += m) F[static_cast<std::size_t>(j - 1)] += m;
        }
        if (sys.symbols.size() == 1) {
            const SuspensionCohomology sc = suspension_cohomology(sys);
            special = special_value_check(euler_product(orbits), sc.complex, sc.cup);
        }
    }
    const std::vector<BigInt> O_mob = orbit_counts_from_fixed(F);
    const FormalSeries am = artin_mazur_series(F, d);
    const FormalSeries ep = ruelle_series(O_enum, {}, d);
    const FormalSeries signed_series = ruelle_series(O_enum, signs, d);

    CsvTable t({"k", "fixed_points", "orbits_enumerated", "orbits_moebius", "sign", "artin_mazur", "euler_product",
                "signed_product"});
    std::optional<CheckFailed> fail;
    for (std::size_t k = 1; k <= d; ++k) {
        t.row({std::to_string(k), F[k - 1].str(), O_enum[k - 1].str(), O_mob[k - 1].str(), std::to_string(signs[k - 1]),
               am[k].str(), ep[k].str(), signed_series[k].str()});
        BigInt acc = 0;
        for (std::size_t j = 1; j <= k; ++j)
            if (k % j == 0) acc += static_cast<long>(j) * O_enum[j - 1];
        if (acc != F[k - 1] && !fail)
            fail = CheckFailed{"orbit counting sum_{d|k} d O_d = F_k", "mismatch at k = " + std::to_string(k)};
    }
    if (!(am == ep) && !fail)
        fail = CheckFailed{"series identity prod (1 - u^k)^{-O_k} = exp(sum F_k u^k / k)", "coefficients differ"};
    emit(t, cfg, out);
    out << "series identity through degree " << d << ": " << (am == ep ? "exact" : "FAILED") << '\n';
    if (special) {
        out << special->summary() << '\n';
        if (!fail) fail = special_value_failure(*special);
    }
    if (fail) throw *fail;
    return 0;
}

inline int numberfield_cmd(const RunConfig& cfg, std::ostream& out)
{
    std::vector<long> Ds = cfg.d;
    if (Ds.empty()) {
        Ds = fundamental_discriminants(-499, -1);
        for (long D : {5L, 8L, 12L, 13L}) Ds.push_back(D);
    }
    std::vector<NumberFieldReport> reps(Ds.size());
    parallel_indexed(Ds.size(), [&](std::size_t i) { reps[i] = lichtenbaum_numberfield_check(Ds[i]); });

    CsvTable t({"D", "h", "w", "R", "lhs", "rhs", "exact_or_abs_error"});
    std::optional<CheckFailed> fail;
    std::size_t passed = 0, reported = 0;
    for (const auto& r : reps) {
        std::string err = r.lhs_exact ? (r.lhs_exact == r.rhs_exact ? "exact" : fmt(r.error)) : fmt(r.error);
        if (!r.h_certified) err += " (h uncertified)";
        t.row({std::to_string(r.D), std::to_string(r.h), std::to_string(r.w), fmt(r.R),
               r.lhs_exact ? r.lhs_exact->str() : fmt(r.lhs), r.rhs_exact ? r.rhs_exact->str() : fmt(r.rhs), err});
        if (!r.h_certified) {
            ++reported;
        } else if (r.passed) {
            ++passed;
        } else if (!fail) {
            fail = CheckFailed{"class number formula zeta_K*(0) = -hR/w",
                               "D = " + std::to_string(r.D) + ": lhs " + fmt(r.lhs) + " vs rhs " + fmt(r.rhs)};
        }
    }
    emit(t, cfg, out);
    out << passed << " of " << reps.size() << " discriminants verified";
    if (reported) out << ", " << reported << " reported without a certified class number";
    out << '\n';
    if (fail) throw *fail;
    return 0;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr,
               const AcceptanceRunner& acceptance = {})
{
    RunConfig cfg;
    CLI::App app{"Numerical checks of zeta-function identities for arithmetic and dynamical systems"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto* zeros = app.add_subcommand("zeros", "compute or check a table of zeta zero ordinates");
    zeros->add_option("action", cfg.action, "compute | check")->required()->check(CLI::IsMember({"compute", "check"}));
    zeros->add_option("--tmax", cfg.tmax, "height of the table (compute) or of the count check");
    zeros->add_option("--zeros", cfg.zeros_path, "zero table to check");
    zeros->add_option("--out", cfg.out_path, "output path");

    auto* ef = app.add_subcommand("ef-check", "explicit formula against bump test functions");
    ef->add_option("--zeros", cfg.zeros_path, "zero table")->required();
    ef->add_option("--center", cfg.centers, "bump centers (default: the 6 standard centers)")->delimiter(',');
    ef->add_option("--width", cfg.widths, "bump half-widths (default: 0.05, 0.1)")->delimiter(',');
    ef->add_option("--tol", cfg.tol, "residual tolerance (default 1e-6)");
    ef->add_option("--tail-tol", cfg.tail_tol, "largest acceptable estimate of the omitted zero tail");
    ef->add_option("--out", cfg.out_path, "CSV output path");

    auto* cr = app.add_subcommand("cramer-scan", "locate singularities of the Cramer function");
    cr->add_option("--zeros", cfg.zeros_path, "zero table")->required();
    cr->add_option("--window", cfg.window, "scan window a,b")->delimiter(',');
    cr->add_option("--ladder", cfg.ladder, "decreasing eps ladder")->delimiter(',');
    cr->add_option("--tol", cfg.tol, "tail tolerance of W (default 1e-6)");
    cr->add_option("--match", cfg.match, "distance to m log p that counts as a match");
    cr->add_option("--min-weight", cfg.min_weight, "poles of weight log p / p^{m/2} below this may go undetected");
    cr->add_option("--out", cfg.out_path, "CSV output path");

    auto* rd = app.add_subcommand("regdet-check", "Lerch formula and circle torsion");
    rd->add_option("--tol", cfg.tol, "tolerance (default 1e-10)");
    rd->add_option("--out", cfg.out_path, "CSV output path");

    auto* to = app.add_subcommand("torsion", "cohomology and zeta special value of a cochain complex");
    to->add_option("--complex", cfg.complex_path, "complex JSON file")->required();
    to->add_option("--zeta", cfg.zeta, "zeta as Euler factors, e.g. q=2:-1,q=3:1");
    to->add_option("--seed", cfg.seed, "seed for the re-chosen determinant");
    to->add_option("--out", cfg.out_path, "CSV output path");

    auto* su = app.add_subcommand("suspension", "orbit counts and zeta series of a discrete system");
    su->add_option("--system", cfg.system_path, "system JSON file")->required();
    su->add_option("--d", cfg.degree, "series degree");
    su->add_option("--out", cfg.out_path, "CSV output path");

    auto* nf = app.add_subcommand("numberfield", "zeta_K*(0) = -hR/w for quadratic fields");
    nf->add_option("--d", cfg.d, "fundamental discriminants (default: all in (-500, 0) and 5, 8, 12, 13)")
        ->delimiter(',');
    nf->add_option("--out", cfg.out_path, "CSV output path");

    auto* acc = app.add_subcommand("all-acceptance", "run every acceptance criterion");
    acc->add_option("--zeros", cfg.zeros_path, "precomputed zero table to T >= 5000 (computed if absent)");
    acc->add_option("--seed", cfg.seed, "seed for the random batches");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.validate();
        if (cfg.command == "zeros") return detail::zeros_cmd(cfg, out);
        if (cfg.command == "ef-check") return detail::ef_cmd(cfg, out);
        if (cfg.command == "cramer-scan") return detail::cramer_cmd(cfg, out);
        if (cfg.command == "regdet-check") return detail::regdet_cmd(cfg, out);
        if (cfg.command == "torsion") return detail::torsion_cmd(cfg, out);
        if (cfg.command == "suspension") return detail::suspension_cmd(cfg, out);
        if (cfg.command == "numberfield") return detail::numberfield_cmd(cfg, out);
        if (cfg.command == "all-acceptance") {
            if (!acceptance) throw Error(ErrorKind::domain, "this build has no acceptance suite");
            return acceptance(cfg, out);
        }
    } catch (const detail::CheckFailed& f) {
        err << "FAILED: " << f.identity << ": " << f.detail << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e.kind()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace arithdyn::cli

#endif
