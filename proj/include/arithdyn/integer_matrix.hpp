#ifndef ARITHDYN_INTEGER_MATRIX_HPP
#define ARITHDYN_INTEGER_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace arithdyn {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major matrix of arbitrary-size integers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        for (const auto& r : rows) {
            if (r.size() != cols_) throw Error(ErrorKind::parse, "ragged matrix literal");
            for (long long v : r) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const BigInt& v) { return v == 0; });
    }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.cols_ != b.rows_) throw Error(ErrorKind::domain, "matrix shapes do not compose");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const BigInt& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend IntMatrix operator-(IntMatrix a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::domain, "matrix shapes differ");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    void swap_rows(std::size_t a, std::size_t b)
    {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b)
    {
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row[dst] += f * row[src]
    void add_row(std::size_t dst, std::size_t src, const BigInt& f)
    {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += f * (*this)(src, j);
    }
    /// col[dst] += f * col[src]
    void add_col(std::size_t dst, std::size_t src, const BigInt& f)
    {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += f * (*this)(i, src);
    }
    void negate_row(std::size_t r)
    {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> data_;
};

/// Fraction-free (Bareiss) determinant.
inline BigInt determinant(IntMatrix m)
{
    if (m.rows() != m.cols()) throw Error(ErrorKind::domain, "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && m(r, k) == 0) ++r;
            if (r == n) return 0;
            m.swap_rows(k, r);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

struct SmithForm {
    IntMatrix U, S, V; // S = U * A * V
    std::size_t rank = 0;

    /// Nonzero diagonal entries s_1 | s_2 | ... | s_rank.
    std::vector<BigInt> invariant_factors() const
    {
        std::vector<BigInt> out;
        for (std::size_t i = 0; i < rank; ++i) out.push_back(S(i, i));
        return out;
    }
};

namespace detail {

inline std::optional<std::pair<std::size_t, std::size_t>> smallest_entry(const IntMatrix& m, std::size_t from)
{
    std::optional<std::pair<std::size_t, std::size_t>> best;
    BigInt best_abs;
    for (std::size_t i = from; i < m.rows(); ++i)
        for (std::size_t j = from; j < m.cols(); ++j) {
            if (m(i, j) == 0) continue;
            BigInt a = abs(m(i, j));
            if (!best || a < best_abs) {
                best = {i, j};
                best_abs = std::move(a);
                if (best_abs == 1) return best;
            }
        }
    return best;
}

} // namespace detail

/// Smith normal form with unimodular transforms. Pivots are chosen as the
/// smallest nonzero entry of the remaining block.
inline SmithForm smith_normal_form(const IntMatrix& A)
{
    SmithForm f{IntMatrix::identity(A.rows()), A, IntMatrix::identity(A.cols()), 0};
    IntMatrix& S = f.S;
    const std::size_t m = S.rows(), n = S.cols();

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            const auto pivot = detail::smallest_entry(S, t);
            if (!pivot) return f;
            if (pivot->first != t) {
                S.swap_rows(t, pivot->first);
                f.U.swap_rows(t, pivot->first);
            }
            if (pivot->second != t) {
                S.swap_cols(t, pivot->second);
                f.V.swap_cols(t, pivot->second);
            }

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (S(i, t) == 0) continue;
                const BigInt q = S(i, t) / S(t, t);
                S.add_row(i, t, -q);
                f.U.add_row(i, t, -q);
                if (S(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (S(t, j) == 0) continue;
                const BigInt q = S(t, j) / S(t, t);
                S.add_col(j, t, -q);
                f.V.add_col(j, t, -q);
                if (S(t, j) != 0) clean = false;
            }
            if (!clean) continue; // a smaller remainder exists; re-pivot

            // Divisibility: fold an offending row into the pivot row and retry.
            std::optional<std::size_t> bad;
            for (std::size_t i = t + 1; i < m && !bad; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (!bad) break;
            S.add_row(t, *bad, 1);
            f.U.add_row(t, *bad, 1);
        }
        if (S(t, t) < 0) {
            S.negate_row(t);
            f.U.negate_row(t);
        }
        f.rank = t + 1;
    }
    return f;
}

inline std::string to_string(const IntMatrix& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += m(i, j).str();
        }
        s += "]";
    }
    return s + "]";
}

} // namespace arithdyn

#endif
