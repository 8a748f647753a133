#pragma once

// The quasi-Jordan expansion map E(uv) = E(u) -| E(v) + E(v) |- E(u) and the
// expansion matrices built from it.

#include "qjd/dialgebra.hpp"
#include "qjd/fp_linalg.hpp"
#include "qjd/free_magma.hpp"
#include "qjd/linear_combination.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace qjd {

using Polynomial = LinearCombination<Monomial>;
using DiPolynomial = LinearCombination<DiMonomial>;

/// One term of the expansion of a shape: the center and, for each position of
/// the dialgebra word, the leaf of the monomial that lands there.
struct ExpansionPattern {
    std::size_t center;              // 1-based
    std::vector<std::uint8_t> leaf;  // leaf[j] = monomial leaf index at word position j
};

namespace detail {

inline std::vector<ExpansionPattern> compute_patterns(std::string_view shape_code, std::size_t& pos,
                                                      std::size_t& next_leaf)
{
    if (shape_code[pos++] != '*')
        return {ExpansionPattern{1, {static_cast<std::uint8_t>(next_leaf++)}}};
    auto us = compute_patterns(shape_code, pos, next_leaf);
    auto vs = compute_patterns(shape_code, pos, next_leaf);
    std::vector<ExpansionPattern> out;
    out.reserve(2 * us.size() * vs.size());
    for (const auto& u : us)
        for (const auto& v : vs) {
            ExpansionPattern left{u.center, u.leaf};
            left.leaf.insert(left.leaf.end(), v.leaf.begin(), v.leaf.end());
            out.push_back(std::move(left));
            ExpansionPattern right{v.leaf.size() + u.center, v.leaf};
            right.leaf.insert(right.leaf.end(), u.leaf.begin(), u.leaf.end());
            out.push_back(std::move(right));
        }
    return out;
}

} // namespace detail

/// The 2^(n-1) expansion patterns of a shape, memoized process-wide.
inline const std::vector<ExpansionPattern>& expansion_patterns(const std::string& shape_code)
{
    static std::mutex mutex;
    static std::map<std::string, std::unique_ptr<std::vector<ExpansionPattern>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[shape_code];
    if (!slot) {
        std::size_t pos = 0, next = 0;
        slot = std::make_unique<std::vector<ExpansionPattern>>(detail::compute_patterns(shape_code, pos, next));
    }
    return *slot;
}

inline void check_expansion_guard(std::size_t n, bool allow_large)
{
    check_degree_guard(n, allow_large);
}

/// Expansion of any magma monomial, collected.
inline DiPolynomial expand(const Monomial& m, bool allow_large = false)
{
    const std::size_t n = degree(m);
    check_expansion_guard(n, allow_large);
    const std::string w = word(m.code);
    DiPolynomial out;
    std::string t(n, ' ');
    for (const auto& pat : expansion_patterns(shape(m.code))) {
        for (std::size_t j = 0; j < n; ++j)
            t[j] = w[pat.leaf[j]];
        out.add(DiMonomial{t, pat.center}, 1);
    }
    return out;
}

/// Linear extension of expand over exact 64-bit integers (overflow is checked).
inline DiPolynomial expand_poly(const Polynomial& p, bool allow_large = false)
{
    DiPolynomial out;
    for (const auto& [m, c] : p) {
        const std::size_t n = degree(m);
        check_expansion_guard(n, allow_large);
        const std::string w = word(m.code);
        std::string t(n, ' ');
        for (const auto& pat : expansion_patterns(shape(m.code))) {
            for (std::size_t j = 0; j < n; ++j)
                t[j] = w[pat.leaf[j]];
            out.add(DiMonomial{t, pat.center}, c);
        }
    }
    return out;
}

/// Linear extension of expand with coefficients reduced to [0, p).
inline DiPolynomial expand_poly_mod(const Polynomial& poly, std::uint32_t p, bool allow_large = false)
{
    DiPolynomial exact;
    for (const auto& [m, c] : poly) {
        const std::size_t n = degree(m);
        check_expansion_guard(n, allow_large);
        const std::string w = word(m.code);
        std::string t(n, ' ');
        const std::int64_t r = reduce_mod(c, p);
        for (const auto& pat : expansion_patterns(shape(m.code))) {
            for (std::size_t j = 0; j < n; ++j)
                t[j] = w[pat.leaf[j]];
            DiMonomial key{t, pat.center};
            std::int64_t cur = exact.coefficient(key);
            exact.add(key, reduce_mod(cur + r, p) - cur);
        }
    }
    return exact;
}

inline void check_matrix_guard(std::size_t rows, std::size_t cols, bool allow_large)
{
    constexpr std::size_t kMaxEntries = std::size_t{1} << 31;  // 4 GiB of residues
    if (!allow_large && rows * cols > kMaxEntries)
        throw ResourceError("matrix of size " + std::to_string(rows) + " x " + std::to_string(cols) +
                            " exceeds the memory guard (override to proceed)");
}

/// Expansion matrix: rows indexed by `rows`, column j holds the expansion of
/// basis monomial j of `cols`.
inline FpMatrix build_expansion_matrix(const FrcBasis& cols, const FdBasis& rows, std::uint32_t p,
                                       bool allow_large = false)
{
    if (cols.content() != rows.content())
        throw DimensionError("bases have different content");
    check_matrix_guard(rows.size(), cols.size(), allow_large);
    FpMatrix m(p, rows.size(), cols.size());
    const std::size_t n = cols.degree();
    const std::size_t nwords = rows.words();
    for (std::size_t k = 0; k < cols.type_count(); ++k) {
        const auto& pats = expansion_patterns(cols.types()[k].shape);
        for (std::size_t j = cols.type_offset(k); j < cols.type_offset(k + 1); ++j) {
            const std::string w = cols.word_at(j);
            for (const auto& pat : pats) {
                PackedWord x = 0;
                for (std::size_t q = 0; q < n; ++q)
                    x = (x << 5) | static_cast<PackedWord>(w[pat.leaf[q]] - 'a');
                std::size_t row = (pat.center - 1) * nwords + *rows.word_index(x);
                m.add(row, j, 1);
            }
        }
    }
    return m;
}

inline FpMatrix build_expansion_matrix(std::size_t n, std::uint32_t p, bool allow_large = false)
{
    return build_expansion_matrix(FrcBasis::multilinear(n, allow_large), FdBasis::multilinear(n, allow_large), p,
                                  allow_large);
}

inline FpMatrix build_nonlinear_expansion_matrix(const std::string& content, std::uint32_t p,
                                                 bool allow_large = false)
{
    return build_expansion_matrix(FrcBasis::with_content(content, allow_large),
                                  FdBasis::with_content(content, allow_large), p, allow_large);
}

} // namespace qjd
