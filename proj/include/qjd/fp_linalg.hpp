#pragma once

// Dense linear algebra over a prime field F_p.
//
// Entries are stored as 16-bit residues in [0, p); products are accumulated in
// 32-bit lanes and reduced lazily, so every kernel stays exact for any prime
// p < 2^16.  The central object is RowReducer, an incrementally maintained
// row canonical form: new rows are reduced against the stored pivot rows (the
// coefficients can be read straight off the pivot columns because the stored
// basis is fully reduced), reduced among themselves, and the new pivots are
// then eliminated from the old rows.

#include "qjd/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qjd {

using Residue = std::uint16_t;

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Validates a modulus: prime, greater than 2, and small enough for 16-bit storage.
inline std::uint32_t checked_prime(std::uint64_t p)
{
    if (p <= 2 || !is_prime(p))
        throw ConfigError("modulus " + std::to_string(p) + " must be an odd prime");
    if (p >= (1u << 16))
        throw ConfigError("modulus " + std::to_string(p) + " exceeds the 16-bit residue range");
    return static_cast<std::uint32_t>(p);
}

inline std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p)
{
    std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1)
        throw DomainError("residue " + std::to_string(a) + " is not invertible mod " + std::to_string(p));
    return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

inline Residue reduce_mod(std::int64_t value, std::uint32_t p)
{
    std::int64_t r = value % static_cast<std::int64_t>(p);
    return static_cast<Residue>(r < 0 ? r + p : r);
}

/// The representative of r (mod p) in (-p/2, p/2].
inline std::int64_t symmetric_lift(std::uint32_t r, std::uint32_t p)
{
    r %= p;
    return 2 * static_cast<std::int64_t>(r) > static_cast<std::int64_t>(p) ? static_cast<std::int64_t>(r) - p
                                                                            : static_cast<std::int64_t>(r);
}

/// Smallest-denominator fraction a/b congruent to r with |a| <= num_bound and
/// 1 <= b <= den_bound, gcd(a, b) = 1.
inline std::optional<std::pair<std::int64_t, std::int64_t>>
recognize_rational(std::uint32_t r, std::uint32_t p, std::int64_t num_bound, std::int64_t den_bound)
{
    for (std::int64_t b = 1; b <= den_bound; ++b) {
        std::int64_t a = symmetric_lift(static_cast<std::uint32_t>((static_cast<std::uint64_t>(r) * b) % p), p);
        if ((a < 0 ? -a : a) <= num_bound && std::gcd(a, b) == 1)
            return std::pair{a, b};
    }
    return std::nullopt;
}

class FpMatrix {
public:
    FpMatrix() = default;

    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
        : p_(checked_prime(p)), rows_(rows), cols_(cols), data_(rows * cols, 0)
    {}

    static FpMatrix identity(std::uint32_t p, std::size_t n)
    {
        FpMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.data_[i * n + i] = 1;
        return m;
    }

    std::uint32_t prime() const noexcept { return p_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Residue at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t value) { data_[i * cols_ + j] = reduce_mod(value, p_); }
    void add(std::size_t i, std::size_t j, std::int64_t value)
    {
        data_[i * cols_ + j] = reduce_mod(static_cast<std::int64_t>(data_[i * cols_ + j]) + value, p_);
    }

    std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    /// Writable view of a row; callers keep every entry in [0, p).
    std::span<Residue> row_data(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const Residue> data() const { return data_; }
    std::span<Residue> data() { return data_; }

    void append_row(std::span<const Residue> values)
    {
        if (values.size() != cols_)
            throw DimensionError("row of length " + std::to_string(values.size()) + " appended to matrix with " +
                                 std::to_string(cols_) + " columns");
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    std::size_t count_nonzero_in_column(std::size_t j) const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < rows_; ++i)
            n += at(i, j) != 0;
        return n;
    }

    bool operator==(const FpMatrix&) const = default;

    /// Debug dump: header line "p n_rows n_cols", then one tab-separated row per line.
    std::string to_tsv() const
    {
        std::ostringstream out;
        out << p_ << ' ' << rows_ << ' ' << cols_ << '\n';
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                out << (j ? "\t" : "") << at(i, j);
            out << '\n';
        }
        return out.str();
    }

    static FpMatrix from_tsv(std::string_view text)
    {
        std::istringstream in{std::string(text)};
        std::uint64_t p = 0;
        std::size_t r = 0, c = 0;
        if (!(in >> p >> r >> c))
            throw ParseError("bad matrix header", 0);
        FpMatrix m(static_cast<std::uint32_t>(p), r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                std::int64_t v = 0;
                if (!(in >> v))
                    throw ParseError("truncated matrix body", static_cast<std::size_t>(in.tellg()));
                m.set(i, j, v);
            }
        return m;
    }

private:
    std::uint32_t p_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Residue> data_;
};

inline FpMatrix multiply(const FpMatrix& a, const FpMatrix& b)
{
    if (a.cols() != b.rows() || a.prime() != b.prime())
        throw DimensionError("incompatible matrix product");
    const std::uint32_t p = a.prime();
    FpMatrix c(p, a.rows(), b.cols());
    std::vector<std::uint64_t> acc(b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t f = a.at(i, k);
            if (f == 0)
                continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                acc[j] += f * brow[j];
        }
        auto out = c.row_data(i);
        for (std::size_t j = 0; j < b.cols(); ++j)
            out[j] = static_cast<Residue>(acc[j] % p);
    }
    return c;
}

namespace detail {

// x mod p for x < 2^32 without a hardware divide: q underestimates x / p by at most one.
struct Barrett {
    std::uint32_t p;
    std::uint64_t m;
    explicit Barrett(std::uint32_t prime) : p(prime), m((std::uint64_t{1} << 32) / prime) {}
    std::uint32_t operator()(std::uint32_t x) const
    {
        std::uint32_t q = static_cast<std::uint32_t>((x * m) >> 32);
        std::uint32_t r = x - q * p;
        return r >= p ? r - p : r;
    }
};

constexpr std::size_t kRowBlock = 64;
constexpr std::size_t kColChunk = 512;

// rows[i] -= sum_k rows[i][pivots[k]] * basis[k] for i < m, where basis is in
// row canonical form restricted to `pivots` (basis[k][pivots[l]] = [k == l]).
// Afterwards every row vanishes on the pivot columns.
inline void eliminate(Residue* rows, std::size_t m, const Residue* basis, std::span<const std::size_t> pivots,
                      std::size_t cols, std::uint32_t p)
{
    const std::size_t r = pivots.size();
    if (r == 0 || m == 0)
        return;
    const Barrett mod(p);
    const std::uint64_t step = static_cast<std::uint64_t>(p - 1) * (p - 1);
    const std::size_t limit = static_cast<std::size_t>((0xFFFFFFFFull - p) / (step == 0 ? 1 : step));

    std::vector<std::uint32_t> acc(kRowBlock * kColChunk);
    std::vector<std::uint32_t> start(r + 1);
    std::vector<std::uint16_t> which;
    std::vector<Residue> coef;
    std::vector<char> touched(kRowBlock);

    for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
        const std::size_t ib = std::min(kRowBlock, m - i0);
        which.clear();
        coef.clear();
        std::fill(touched.begin(), touched.end(), 0);
        for (std::size_t k = 0; k < r; ++k) {
            start[k] = static_cast<std::uint32_t>(which.size());
            const std::size_t pc = pivots[k];
            for (std::size_t i = 0; i < ib; ++i) {
                Residue f = rows[(i0 + i) * cols + pc];
                if (f != 0) {
                    which.push_back(static_cast<std::uint16_t>(i));
                    coef.push_back(static_cast<Residue>(p - f));
                    touched[i] = 1;
                }
            }
        }
        start[r] = static_cast<std::uint32_t>(which.size());
        if (which.empty())
            continue;

        for (std::size_t j0 = 0; j0 < cols; j0 += kColChunk) {
            const std::size_t w = std::min(kColChunk, cols - j0);
            for (std::size_t i = 0; i < ib; ++i) {
                if (!touched[i])
                    continue;
                const Residue* src = rows + (i0 + i) * cols + j0;
                std::uint32_t* a = acc.data() + i * kColChunk;
                for (std::size_t j = 0; j < w; ++j)
                    a[j] = src[j];
            }
            std::size_t steps = 1;
            for (std::size_t k = 0; k < r; ++k) {
                if (start[k] == start[k + 1])
                    continue;
                const Residue* b = basis + k * cols + j0;
                for (std::uint32_t e = start[k]; e < start[k + 1]; ++e) {
                    std::uint32_t* a = acc.data() + which[e] * kColChunk;
                    const std::uint32_t f = coef[e];
                    for (std::size_t j = 0; j < w; ++j)
                        a[j] += f * b[j];
                }
                if (++steps >= limit) {
                    for (std::size_t i = 0; i < ib; ++i) {
                        std::uint32_t* a = acc.data() + i * kColChunk;
                        for (std::size_t j = 0; j < w; ++j)
                            a[j] = mod(a[j]);
                    }
                    steps = 1;
                }
            }
            for (std::size_t i = 0; i < ib; ++i) {
                if (!touched[i])
                    continue;
                Residue* dst = rows + (i0 + i) * cols + j0;
                const std::uint32_t* a = acc.data() + i * kColChunk;
                for (std::size_t j = 0; j < w; ++j)
                    dst[j] = static_cast<Residue>(mod(a[j]));
            }
        }
    }
}

// row = (row + f * other) mod p
inline void axpy(Residue* row, std::uint32_t f, const Residue* other, std::size_t n, std::uint32_t p)
{
    const Barrett mod(p);
    for (std::size_t j = 0; j < n; ++j)
        row[j] = static_cast<Residue>(mod(row[j] + f * other[j]));
}

inline void scale(Residue* row, std::uint32_t f, std::size_t n, std::uint32_t p)
{
    const Barrett mod(p);
    for (std::size_t j = 0; j < n; ++j)
        row[j] = static_cast<Residue>(mod(f * row[j]));
}

} // namespace detail

/// Result of a one-shot row reduction.
struct RcfResult {
    FpMatrix matrix;                  ///< same shape as the input, zero rows last
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  ///< 0-based pivot column of each nonzero row
};

/// Incrementally maintained row canonical form.
///
/// Holds the nonzero rows of RCF(M) for the matrix M of all rows appended so
/// far.  Memory is bounded by (rank + batch size) rows.
class RowReducer {
public:
    RowReducer(std::uint32_t p, std::size_t cols) : p_(checked_prime(p)), cols_(cols), row_of_col_(cols, npos) {}

    std::uint32_t prime() const noexcept { return p_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t rank() const noexcept { return pivots_.size(); }

    /// Appends a batch of rows; returns the new rank.
    std::size_t append(const FpMatrix& batch)
    {
        if (batch.cols() != cols_)
            throw DimensionError("appending rows with " + std::to_string(batch.cols()) + " columns to a reducer with " +
                                 std::to_string(cols_));
        if (batch.prime() != p_)
            throw DimensionError("prime mismatch in append");
        std::vector<Residue> work(batch.data().begin(), batch.data().end());
        append_rows(work, batch.rows());
        return rank();
    }

    std::size_t append(std::span<const Residue> row)
    {
        if (row.size() != cols_)
            throw DimensionError("row length mismatch in append");
        std::vector<Residue> work(row.begin(), row.end());
        append_rows(work, 1);
        return rank();
    }

    /// Remainder of `row` modulo the current row space (zero iff the row lies in it).
    std::vector<Residue> reduce(std::span<const Residue> row) const
    {
        if (row.size() != cols_)
            throw DimensionError("row length mismatch in reduce");
        std::vector<Residue> work(row.begin(), row.end());
        detail::eliminate(work.data(), 1, rows_.data(), pivots_, cols_, p_);
        return work;
    }

    bool contains(std::span<const Residue> row) const
    {
        auto r = reduce(row);
        return std::all_of(r.begin(), r.end(), [](Residue x) { return x == 0; });
    }

    /// Pivot columns in increasing order.
    std::vector<std::size_t> pivot_columns() const
    {
        std::vector<std::size_t> out(pivots_);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// The nonzero rows of the row canonical form, ordered by pivot column.
    FpMatrix basis() const
    {
        FpMatrix out(p_, rank(), cols_);
        std::size_t i = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (row_of_col_[c] == npos)
                continue;
            auto src = stored_row(row_of_col_[c]);
            std::copy(src.begin(), src.end(), out.row_data(i++).begin());
        }
        return out;
    }

    /// Stored row whose pivot lies in column c, if any.
    std::optional<std::span<const Residue>> pivot_row(std::size_t c) const
    {
        if (row_of_col_[c] == npos)
            return std::nullopt;
        return stored_row(row_of_col_[c]);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::span<const Residue> stored_row(std::size_t k) const { return {rows_.data() + k * cols_, cols_}; }

    void append_rows(std::vector<Residue>& work, std::size_t m)
    {
        detail::eliminate(work.data(), m, rows_.data(), pivots_, cols_, p_);

        // Reduce the batch among itself; `fresh` stays in RCF on its own pivots.
        std::vector<Residue> fresh;
        std::vector<std::size_t> fresh_pivots;
        for (std::size_t i = 0; i < m; ++i) {
            Residue* row = work.data() + i * cols_;
            for (std::size_t k = 0; k < fresh_pivots.size(); ++k) {
                Residue f = row[fresh_pivots[k]];
                if (f != 0)
                    detail::axpy(row, p_ - f, fresh.data() + k * cols_, cols_, p_);
            }
            std::size_t lead = 0;
            while (lead < cols_ && row[lead] == 0)
                ++lead;
            if (lead == cols_)
                continue;
            detail::scale(row, inverse_mod(row[lead], p_), cols_, p_);
            for (std::size_t k = 0; k < fresh_pivots.size(); ++k) {
                Residue* other = fresh.data() + k * cols_;
                Residue f = other[lead];
                if (f != 0)
                    detail::axpy(other, p_ - f, row, cols_, p_);
            }
            fresh.insert(fresh.end(), row, row + cols_);
            fresh_pivots.push_back(lead);
        }
        if (fresh_pivots.empty())
            return;

        detail::eliminate(rows_.data(), pivots_.size(), fresh.data(), fresh_pivots, cols_, p_);
        for (std::size_t k = 0; k < fresh_pivots.size(); ++k) {
            row_of_col_[fresh_pivots[k]] = pivots_.size();
            pivots_.push_back(fresh_pivots[k]);
        }
        rows_.insert(rows_.end(), fresh.begin(), fresh.end());
    }

    std::uint32_t p_;
    std::size_t cols_;
    std::vector<Residue> rows_;           // rank x cols, in insertion order
    std::vector<std::size_t> pivots_;     // pivot column of each stored row
    std::vector<std::size_t> row_of_col_; // column -> stored row, or npos
};

/// Predicate: leading entries are 1, strictly move right, are alone in their
/// column, and zero rows come last.
inline bool is_rcf(const FpMatrix& m)
{
    std::size_t last_pivot = 0;
    bool seen_pivot = false, seen_zero = false;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        auto it = std::find_if(row.begin(), row.end(), [](Residue x) { return x != 0; });
        if (it == row.end()) {
            seen_zero = true;
            continue;
        }
        if (seen_zero || *it != 1)
            return false;
        std::size_t c = static_cast<std::size_t>(it - row.begin());
        if (seen_pivot && c <= last_pivot)
            return false;
        if (m.count_nonzero_in_column(c) != 1)
            return false;
        last_pivot = c;
        seen_pivot = true;
    }
    return true;
}

inline RcfResult rcf(const FpMatrix& m)
{
    RowReducer reducer(m.prime(), m.cols());
    reducer.append(m);
    RcfResult out{FpMatrix(m.prime(), m.rows(), m.cols()), reducer.rank(), reducer.pivot_columns()};
    FpMatrix b = reducer.basis();
    std::copy(b.data().begin(), b.data().end(), out.matrix.data().begin());
    return out;
}

inline std::size_t rank(const FpMatrix& m)
{
    RowReducer reducer(m.prime(), m.cols());
    return reducer.append(m);
}

/// Stacks `new_rows` under a matrix already in RCF and reduces again.
inline RcfResult append_and_reduce(const FpMatrix& state, const FpMatrix& new_rows)
{
    if (state.cols() != new_rows.cols())
        throw DimensionError("column count mismatch: " + std::to_string(state.cols()) + " vs " +
                             std::to_string(new_rows.cols()));
    if (!is_rcf(state))
        throw DomainError("append_and_reduce: state is not in row canonical form");
    RowReducer reducer(state.prime(), state.cols());
    reducer.append(state);
    reducer.append(new_rows);
    const std::size_t total = state.rows() + new_rows.rows();
    RcfResult out{FpMatrix(state.prime(), total, state.cols()), reducer.rank(), reducer.pivot_columns()};
    FpMatrix b = reducer.basis();
    std::copy(b.data().begin(), b.data().end(), out.matrix.data().begin());
    return out;
}

/// Canonical nullspace basis: one vector per free column f of RCF(m), with a 1
/// in position f, ordered by f.
inline std::vector<std::vector<Residue>> nullspace_basis(const FpMatrix& m)
{
    const std::uint32_t p = m.prime();
    RcfResult r = rcf(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto c : r.pivots)
        is_pivot[c] = 1;
    std::vector<std::vector<Residue>> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Residue> v(m.cols(), 0);
        v[f] = 1;
        for (std::size_t i = 0; i < r.rank; ++i) {
            Residue e = r.matrix.at(i, f);
            if (e != 0)
                v[r.pivots[i]] = static_cast<Residue>(p - e);
        }
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<Residue> multiply(const FpMatrix& m, std::span<const Residue> v)
{
    if (v.size() != m.cols())
        throw DimensionError("matrix-vector size mismatch");
    std::vector<Residue> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint64_t acc = 0;
        auto row = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j)
            acc += static_cast<std::uint64_t>(row[j]) * v[j];
        out[i] = static_cast<Residue>(acc % m.prime());
    }
    return out;
}

/// Inverse of a square matrix; throws DomainError when singular.
inline FpMatrix inverse(const FpMatrix& a)
{
    if (a.rows() != a.cols())
        throw DimensionError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    FpMatrix aug(a.prime(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug.set(i, j, a.at(i, j));
        aug.set(i, n + i, 1);
    }
    RcfResult r = rcf(aug);
    if (r.rank < n || r.pivots[n - 1] != n - 1)
        throw DomainError("matrix is singular");
    FpMatrix inv(a.prime(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv.set(i, j, r.matrix.at(i, n + j));
    return inv;
}

} // namespace qjd
