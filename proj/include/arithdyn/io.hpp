#ifndef ARITHDYN_IO_HPP
#define ARITHDYN_IO_HPP

// CSV emission and the JSON input formats for complexes and discrete systems.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "complex_torsion.hpp"
#include "error.hpp"
#include "regdet.hpp"
#include "suspension.hpp"

namespace arithdyn {

/// 15 significant digits, '.' decimal point regardless of locale.
inline std::string csv_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    std::string s = buf;
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable& row(std::vector<std::string> cells)
    {
        if (cells.size() != header_.size()) throw Error(ErrorKind::domain, "CSV row width differs from header");
        rows_.push_back(std::move(cells));
        return *this;
    }

    void write(std::ostream& os) const
    {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
            os << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
    }

    void write(const std::string& path) const
    {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
        write(os);
        if (!os) throw Error(ErrorKind::io, "write to " + path + " failed");
    }

    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::io, "cannot open " + path);
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, path + ": " + e.what());
    }
}

namespace detail {

template <class F>
auto json_field(const std::string& what, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, what + ": " + e.what());
    }
}

inline IntMatrix json_int_matrix(const nlohmann::json& j, std::size_t rows, std::size_t cols, const std::string& what)
{
    if (!j.is_array() || j.size() != rows)
        throw Error(ErrorKind::parse, what + " must have " + std::to_string(rows) + " rows");
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error(ErrorKind::parse, what + " row " + std::to_string(i) + " must have " + std::to_string(cols)
                                              + " entries");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number_integer()) throw Error(ErrorKind::parse, what + " entries must be integers");
            m(i, k) = j[i][k].get<long long>();
        }
    }
    return m;
}

/// A positive number, or {"log": q} for log q.
inline double json_length(const nlohmann::json& j, const std::string& what)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_object() && j.contains("log") && j["log"].is_number()) {
        const double q = j["log"].get<double>();
        if (!(q > 1.0)) throw Error(ErrorKind::parse, what + ": log argument must exceed 1");
        return std::log(q);
    }
    throw Error(ErrorKind::parse, what + " must be a number or {\"log\": q}");
}

} // namespace detail

/// "q=2:-1,q=3:1" -> (1 - 2^{-s})^{-1} (1 - 3^{-s}).
inline EulerFactorProduct parse_zeta_factors(const std::string& text)
{
    EulerFactorProduct z;
    std::stringstream ss(text);
    std::string item;
    bool any = false;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double q = 0.0;
        int e = 0;
        char tail = 0;
        if (std::sscanf(item.c_str(), " q = %lf : %d %c", &q, &e, &tail) != 2)
            throw Error(ErrorKind::parse, "zeta factor '" + item + "' is not of the form q=<real>:<int>");
        if (!(q > 1.0)) throw Error(ErrorKind::parse, "zeta factor '" + item + "' needs q > 1");
        z.multiply(q, e);
        any = true;
    }
    if (!any) throw Error(ErrorKind::parse, "empty zeta factor list");
    return z;
}

struct ComplexFile {
    IntegerCochainComplex complex;
    std::optional<CupPsiData> cup;
    std::optional<EulerFactorProduct> zeta;
    bool isometric = true;
};

/// {"ranks": [n0, n1, ...], "differentials": [d0, d1, ...],
///  "cup_matrices": [...], "psi": 0.69 | {"log": 2}, "zeta": "q=2:-1", "isometric": true}
/// d_i is n_{i+1} x n_i; cup matrices map cohomology degree i to i+1.
inline ComplexFile parse_complex_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw Error(ErrorKind::parse, "complex file must be a JSON object");
    if (!j.contains("ranks")) throw Error(ErrorKind::parse, "complex file needs \"ranks\"");
    const auto ranks = detail::json_field("ranks", [&] { return j["ranks"].get<std::vector<std::size_t>>(); });
    if (ranks.empty()) throw Error(ErrorKind::parse, "\"ranks\" is empty");
    std::vector<IntMatrix> d;
    const nlohmann::json diffs = j.value("differentials", nlohmann::json::array());
    if (!diffs.is_array() || diffs.size() != ranks.size() - 1)
        throw Error(ErrorKind::parse, "need exactly " + std::to_string(ranks.size() - 1) + " differentials");
    for (std::size_t i = 0; i + 1 < ranks.size(); ++i)
        d.push_back(detail::json_int_matrix(diffs[i], ranks[i + 1], ranks[i], "differential " + std::to_string(i)));

    ComplexFile out{IntegerCochainComplex(ranks, std::move(d)), std::nullopt, std::nullopt, true};
    if (j.contains("cup_matrices")) {
        CupPsiData cup;
        const CohomologyResult H = integral_cohomology(out.complex);
        for (const auto& deg : H.degrees) cup.cohomology_ranks.push_back(deg.rank);
        if (j.contains("cohomology_ranks"))
            cup.cohomology_ranks =
                detail::json_field("cohomology_ranks", [&] { return j["cohomology_ranks"].get<std::vector<std::size_t>>(); });
        const auto& cm = j["cup_matrices"];
        if (!cm.is_array() || cm.size() + 1 != cup.cohomology_ranks.size())
            throw Error(ErrorKind::parse, "need one cup matrix per pair of adjacent degrees");
        for (std::size_t i = 0; i < cm.size(); ++i)
            cup.cup_matrices.push_back(detail::json_int_matrix(cm[i], cup.cohomology_ranks[i + 1],
                                                               cup.cohomology_ranks[i], "cup matrix " + std::to_string(i)));
        if (!j.contains("psi")) throw Error(ErrorKind::parse, "cup data needs \"psi\"");
        cup.psi_multiple = detail::json_length(j["psi"], "psi");
        out.cup = std::move(cup);
    }
    if (j.contains("zeta")) {
        if (!j["zeta"].is_string()) throw Error(ErrorKind::parse, "\"zeta\" must be a string like \"q=2:-1\"");
        out.zeta = parse_zeta_factors(j["zeta"].get<std::string>());
    }
    if (j.contains("isometric")) {
        if (!j["isometric"].is_boolean()) throw Error(ErrorKind::parse, "\"isometric\" must be true or false");
        out.isometric = j["isometric"].get<bool>();
    }
    return out;
}

inline ComplexFile load_complex_file(const std::string& path)
{
    const nlohmann::json j = read_json_file(path);
    try {
        return parse_complex_json(j);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.message());
    }
}

/// {"kind": "permutation", "points": 5, "cycles": [[1,2],[3,4,5]], "p": 2}
/// {"kind": "permutation", "points": 2, "cycles": [[1],[2]], "symbols": ["a","b"],
///  "symbol_values": [0.69, {"log": 3}], "roofs": [[1,0],[0,1]]}
/// {"kind": "toral", "matrix": [[2,1],[1,1]], "p": 2}
inline DiscreteSystem parse_system_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw Error(ErrorKind::parse, "system file needs a \"kind\" string");
    const std::string kind = j["kind"].get<std::string>();
    auto prime = [&] {
        if (!j.contains("p") || !j["p"].is_number_unsigned()) throw Error(ErrorKind::parse, "\"p\" must be a positive integer");
        return j["p"].get<std::uint64_t>();
    };
    if (kind == "toral") {
        if (!j.contains("matrix")) throw Error(ErrorKind::parse, "toral system needs \"matrix\"");
        return DiscreteSystem::toral(detail::json_int_matrix(j["matrix"], 2, 2, "matrix"), prime());
    }
    if (kind != "permutation") throw Error(ErrorKind::parse, "unknown system kind '" + kind + "'");
    const auto n = detail::json_field("points", [&] { return j.at("points").get<std::size_t>(); });
    auto cycles = detail::json_field("cycles", [&] { return j.at("cycles").get<std::vector<std::vector<std::size_t>>>(); });
    if (!j.contains("symbols")) return DiscreteSystem::permutation(n, std::move(cycles), prime());
    auto symbols = detail::json_field("symbols", [&] { return j.at("symbols").get<std::vector<std::string>>(); });
    std::vector<double> values;
    const auto& sv = j.value("symbol_values", nlohmann::json::array());
    if (!sv.is_array()) throw Error(ErrorKind::parse, "\"symbol_values\" must be an array");
    for (std::size_t i = 0; i < sv.size(); ++i) values.push_back(detail::json_length(sv[i], "symbol value"));
    auto roofs = detail::json_field("roofs", [&] { return j.at("roofs").get<std::vector<std::vector<long>>>(); });
    return DiscreteSystem::permutation(n, std::move(cycles), std::move(symbols), std::move(values), std::move(roofs));
}

inline DiscreteSystem load_system_file(const std::string& path)
{
    const nlohmann::json j = read_json_file(path);
    try {
        return parse_system_json(j);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.message());
    }
}

} // namespace arithdyn

#endif
