#ifndef ARITHDYN_ERROR_HPP
#define ARITHDYN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace arithdyn {

enum class ErrorKind {
    domain,
    pole,
    accuracy,
    budget,
    parse,
    monotonicity,
    empty_table,
    coverage,
    support,
    tail,
    complex_condition,
    non_acyclic,
    singular_basis,
    consistency,
    degeneracy,
    inconsistency,
    mixed_length,
    non_fundamental,
    search_bound,
    resolution,
    io,
};

constexpr std::string_view to_string(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::budget: return "budget";
    case ErrorKind::parse: return "parse";
    case ErrorKind::monotonicity: return "monotonicity";
    case ErrorKind::empty_table: return "empty-table";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::support: return "support";
    case ErrorKind::tail: return "tail";
    case ErrorKind::complex_condition: return "complex-condition";
    case ErrorKind::non_acyclic: return "non-acyclic";
    case ErrorKind::singular_basis: return "singular-basis";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::inconsistency: return "inconsistency";
    case ErrorKind::mixed_length: return "mixed-length";
    case ErrorKind::non_fundamental: return "non-fundamental";
    case ErrorKind::search_bound: return "search-bound";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind), message_(what)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    /// The text without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

/// True for errors caused by malformed user input rather than a failed check.
constexpr bool is_input_error(ErrorKind k) noexcept
{
    return k == ErrorKind::parse || k == ErrorKind::io || k == ErrorKind::monotonicity
        || k == ErrorKind::empty_table || k == ErrorKind::complex_condition
        || k == ErrorKind::non_fundamental || k == ErrorKind::domain
        || k == ErrorKind::support || k == ErrorKind::consistency;
}

} // namespace arithdyn

#endif
