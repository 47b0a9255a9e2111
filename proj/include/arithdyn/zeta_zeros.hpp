#ifndef ARITHDYN_ZETA_ZEROS_HPP
#define ARITHDYN_ZETA_ZEROS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "analytic_kernel.hpp"
#include "error.hpp"
#include "numeric.hpp"

namespace arithdyn {

enum class ZeroSource { computed, file };

/// Ascending positive ordinates t of zeros 1/2 + it of zeta. Immutable once built.
class ZeroTable {
public:
    ZeroTable() = default;

    /// `coverage` is the height up to which the table claims completeness;
    /// it defaults to the last ordinate.
    ZeroTable(std::vector<double> ordinates, ZeroSource source, double claimed_precision,
              std::optional<double> coverage = std::nullopt)
        : ordinates_(std::move(ordinates)), source_(source), claimed_precision_(claimed_precision)
    {
        for (std::size_t i = 0; i < ordinates_.size(); ++i) {
            if (!(ordinates_[i] > first_zero_floor) || !std::isfinite(ordinates_[i]))
                throw Error(ErrorKind::domain, "ordinate #" + std::to_string(i + 1)
                                                   + " is not above the first-zero floor 13");
            if (i > 0 && !(ordinates_[i] > ordinates_[i - 1]))
                throw Error(ErrorKind::monotonicity,
                            "ordinate #" + std::to_string(i + 1) + " is not strictly increasing");
        }
        coverage_ = coverage.value_or(ordinates_.empty() ? 0.0 : ordinates_.back());
        if (!ordinates_.empty() && coverage_ < ordinates_.back())
            throw Error(ErrorKind::coverage, "coverage below the last ordinate");
    }

    static constexpr double first_zero_floor = 13.0;

    const std::vector<double>& ordinates() const noexcept { return ordinates_; }
    std::size_t size() const noexcept { return ordinates_.size(); }
    bool empty() const noexcept { return ordinates_.empty(); }
    ZeroSource source() const noexcept { return source_; }
    double claimed_precision() const noexcept { return claimed_precision_; }
    double coverage() const noexcept { return coverage_; }

    /// Sub-table of ordinates <= t, with coverage t.
    ZeroTable truncated(double t) const
    {
        std::vector<double> kept;
        for (double x : ordinates_)
            if (x <= t) kept.push_back(x);
        return ZeroTable(std::move(kept), source_, claimed_precision_, std::min(t, coverage_));
    }

    void require_nonempty() const
    {
        if (ordinates_.empty()) throw Error(ErrorKind::empty_table, "zero table is empty");
    }

private:
    std::vector<double> ordinates_;
    ZeroSource source_ = ZeroSource::computed;
    double claimed_precision_ = 0.0;
    double coverage_ = 0.0;
};

struct ZeroSearchOptions {
    double ceiling = 5000.0;
    double scan_step = 0.05;
    double precision = 1e-9;
    int max_refine_evaluations = 400;
    PrecisionPolicy z_policy = hardy_default_policy();
};

namespace detail {

struct Bracket {
    double lo, hi, zlo, zhi;
};

/// Shrinks a sign-change bracket of Z to width <= precision (Illinois steps with
/// bisection fallback) and returns the midpoint.
inline double refine_zero(Bracket b, const ZeroSearchOptions& opt)
{
    auto Z = [&](double t) { return hardy_Z(t, opt.z_policy); };
    double a = b.lo, c = b.hi, za = b.zlo, zc = b.zhi;
    int side = 0;
    for (int evals = 0; evals < opt.max_refine_evaluations; ++evals) {
        if (c - a <= opt.precision) return 0.5 * (a + c);
        double x = (a * zc - c * za) / (zc - za);
        if (!(x > a && x < c) || evals % 8 == 7) x = 0.5 * (a + c);
        // Once the secant estimate is sharp, test a tight bracket around it directly.
        if (c - a < 1e-4) {
            const double half = 0.45 * opt.precision;
            const double lo = std::max(a, x - half), hi = std::min(c, x + half);
            const double zlo = Z(lo), zhi = Z(hi);
            ++evals;
            if ((zlo <= 0) != (zhi <= 0)) return 0.5 * (lo + hi);
        }
        const double zx = Z(x);
        if (zx == 0.0) return x;
        if ((zx < 0) == (za < 0)) {
            a = x;
            za = zx;
            if (side == -1) zc *= 0.5;
            side = -1;
        } else {
            c = x;
            zc = zx;
            if (side == +1) za *= 0.5;
            side = +1;
        }
    }
    throw Error(ErrorKind::budget, "zero refinement stalled near t = " + std::to_string(b.lo));
}

/// Scans grid indices [first, last) and returns sign-change brackets, including
/// pairs of zeros hidden between grid points (detected as a dip of |Z| that
/// crosses zero on local minimization).
inline std::vector<Bracket> scan_brackets(long first, long last, double t_max,
                                          const ZeroSearchOptions& opt)
{
    auto grid = [&](long i) { return std::min(t_max, static_cast<double>(i) * opt.scan_step); };
    auto Z = [&](double t) { return hardy_Z(t, opt.z_policy); };
    std::vector<Bracket> out;
    std::vector<double> ts, zs;
    const long lo = std::max(0L, first - 1);
    for (long i = lo; i <= last; ++i) {
        ts.push_back(grid(i));
        zs.push_back(Z(ts.back()));
    }
    const std::size_t offset = static_cast<std::size_t>(first - lo);
    for (std::size_t j = offset; j + 1 < ts.size(); ++j) {
        if (ts[j + 1] <= ts[j]) continue;
        if ((zs[j] < 0) != (zs[j + 1] < 0)) {
            out.push_back({ts[j], ts[j + 1], zs[j], zs[j + 1]});
            continue;
        }
        // Hidden pair: Z dips towards zero at j or j+1 without a sign change.
        if (j == 0) continue;
        const double s = zs[j] < 0 ? -1.0 : 1.0;
        const bool dip = s * zs[j] < s * zs[j - 1] && s * zs[j] <= s * zs[j + 1]
            && (zs[j - 1] < 0) == (zs[j] < 0);
        if (!dip) continue;
        // Golden-section minimization of s*Z on [t_{j-1}, t_{j+1}].
        double a = ts[j - 1], b = ts[j + 1];
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = s * Z(x1), f2 = s * Z(x2);
        for (int it = 0; it < 40 && f1 > 0 && f2 > 0; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = s * Z(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = s * Z(x2);
            }
        }
        const double xm = f1 < f2 ? x1 : x2;
        const double fm = std::min(f1, f2);
        if (fm < 0) {
            // Two zeros in (t_{j-1}, t_{j+1}); the one left of t_j may already be
            // bracketed by a neighbouring cell only if a sign change occurred there,
            // which the dip condition excludes.
            const double zm = s * fm;
            out.push_back({ts[j - 1], xm, zs[j - 1], zm});
            out.push_back({xm, ts[j + 1], zm, zs[j + 1]});
        }
    }
    return out;
}

} // namespace detail

/// All zero ordinates in (0, t_max], located by a sign-change scan of Z and refined
/// to opt.precision. Disjoint grid blocks are scanned concurrently.
inline ZeroTable compute_zeros(double t_max, const ZeroSearchOptions& opt = {})
{
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(ErrorKind::domain, "t_max must be positive");
    if (t_max > opt.ceiling)
        throw Error(ErrorKind::domain, "t_max exceeds configured ceiling " + std::to_string(opt.ceiling));
    const long n_cells = static_cast<long>(std::ceil(t_max / opt.scan_step));
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(1L, n_cells / 64)));

    // Cost of Z grows linearly in t, so balance blocks by t^2 mass.
    std::vector<long> cuts{0};
    for (unsigned w = 1; w < workers; ++w)
        cuts.push_back(static_cast<long>(n_cells * std::sqrt(static_cast<double>(w) / workers)));
    cuts.push_back(n_cells);

    std::vector<std::vector<double>> found(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto job = [&](unsigned w) {
        try {
            auto brackets = detail::scan_brackets(cuts[w], cuts[w + 1], t_max, opt);
            for (const auto& b : brackets) found[w].push_back(detail::refine_zero(b, opt));
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        job(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<double> all;
    for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end(),
                          [&](double x, double y) { return std::abs(x - y) <= opt.precision; }),
              all.end());
    all.erase(std::remove_if(all.begin(), all.end(), [&](double t) { return t > t_max; }), all.end());
    return ZeroTable(std::move(all), ZeroSource::computed, opt.precision, t_max);
}

/// Writes the table in the plain ordinate-per-line format; the leading comment
/// records the coverage height so a reload keeps it.
inline void write_zero_table(std::ostream& os, const ZeroTable& table)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "# coverage %.12f\n", table.coverage());
    os << buf;
    for (double t : table.ordinates()) {
        std::snprintf(buf, sizeof buf, "%.12f\n", t);
        os << buf;
    }
}

inline void write_zero_table(const std::string& path, const ZeroTable& table)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    write_zero_table(os, table);
    if (!os) throw Error(ErrorKind::io, "write failed for " + path);
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n\f\v");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n\f\v");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace detail

/// Parses a zero table: one decimal ordinate per line, ascending, '#' comments.
/// A comment of the form "# coverage X" declares the completeness height.
inline ZeroTable parse_zero_table(std::istream& is)
{
    std::vector<double> ordinates;
    std::optional<double> coverage;
    int min_decimals = 99;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto body = detail::trim(text.substr(1));
            constexpr std::string_view key = "coverage";
            if (body.starts_with(key)) {
                const auto v = detail::parse_double(detail::trim(body.substr(key.size())));
                if (!v) throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": bad coverage value");
                coverage = *v;
            }
            continue;
        }
        const auto v = detail::parse_double(text);
        if (!v || !std::isfinite(*v))
            throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": not a decimal ordinate: '"
                                              + std::string(text) + "'");
        if (!(*v > 0.0))
            throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": ordinate must be positive");
        if (!ordinates.empty() && !(*v > ordinates.back()))
            throw Error(ErrorKind::monotonicity,
                        "line " + std::to_string(lineno) + ": ordinate " + std::string(text)
                            + " does not exceed the previous one");
        const auto dot = text.find('.');
        const int decimals = dot == std::string_view::npos ? 0 : static_cast<int>(text.size() - dot - 1);
        min_decimals = std::min(min_decimals, decimals);
        ordinates.push_back(*v);
    }
    if (ordinates.empty()) throw Error(ErrorKind::empty_table, "zero table file contains no ordinates");
    if (ordinates.front() <= ZeroTable::first_zero_floor)
        throw Error(ErrorKind::parse, "first ordinate lies below the first zeta zero");
    if (coverage && *coverage < ordinates.back())
        throw Error(ErrorKind::parse, "declared coverage is below the last ordinate");
    return ZeroTable(std::move(ordinates), ZeroSource::file, 0.5 * std::pow(10.0, -min_decimals), coverage);
}

inline ZeroTable load_zero_table(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::io, "cannot open zero table " + path);
    return parse_zero_table(is);
}

struct ZeroCountReport {
    long observed = 0;
    double smooth_estimate = 0.0;
    double discrepancy = 0.0;
    bool flagged = false;
};

/// Riemann–von Mangoldt main term (T/2pi) log(T/(2 pi e)) + 7/8.
inline double smooth_zero_count(double T)
{
    const double x = T / (2.0 * std::numbers::pi);
    return x * (std::log(x) - 1.0) + 0.875;
}

inline ZeroCountReport zero_count_check(const ZeroTable& table, double T)
{
    if (!(T > 0.0)) throw Error(ErrorKind::domain, "count height must be positive");
    if (T > table.coverage())
        throw Error(ErrorKind::coverage, "T = " + std::to_string(T) + " exceeds table coverage "
                                             + std::to_string(table.coverage()));
    ZeroCountReport r;
    const auto& o = table.ordinates();
    r.observed = std::upper_bound(o.begin(), o.end(), T) - o.begin();
    r.smooth_estimate = smooth_zero_count(T);
    r.discrepancy = static_cast<double>(r.observed) - r.smooth_estimate;
    r.flagged = std::abs(r.discrepancy) > 2.0;
    return r;
}

} // namespace arithdyn

#endif
