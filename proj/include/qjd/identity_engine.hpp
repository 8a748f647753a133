#pragma once

// Known identities, substitutions, T-ideal liftings, and the direct (whole
// FRC_n) rank pipeline.

#include "qjd/expansion.hpp"
#include "qjd/fp_linalg.hpp"
#include "qjd/free_magma.hpp"
#include "qjd/identity_io.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qjd {

inline Polynomial straighten_poly(const Polynomial& p)
{
    Polynomial out;
    for (const auto& [m, c] : p)
        out.add(straighten(m), c);
    return out;
}

inline Polynomial parse_poly_expr(std::string_view text)
{
    // "+1 m -1 m ..." written as whitespace separated (sign, monomial) pairs
    Polynomial out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ')
            ++i;
        if (i >= text.size())
            break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            while (i < text.size() && text[i] == ' ')
                ++i;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ')
            ++j;
        out.add(parse_monomial(text.substr(i, j - i)), sign);
        i = j;
    }
    return out;
}

/// J, K, L, M (straightened) or rc = a(bc) - a(cb) (kept as written, so that it
/// is visibly nonzero before straightening).
inline Polynomial known_identity(std::string_view name)
{
    if (name == "J")
        return straighten_poly(parse_poly_expr("(a(bc))d + (a(bd))c + (a(cd))b - (ab)(cd) - (ac)(bd) - (ad)(bc)"));
    if (name == "K")
        return straighten_poly(parse_poly_expr("((ab)d)c + ((ac)d)b - (a(bc))d - (a(bd))c - (a(cd))b + a((bc)d)"));
    if (name == "L")
        return straighten_poly(parse_poly_expr("((ac)b)d + ((ad)b)c - (ab)(cd) - (ac)(bd) - (ad)(bc) + a((cd)b)"));
    if (name == "M")
        return straighten_poly(parse_poly_expr("(b(cd))a + (b(ac))d + (b(ad))c - (ba)(cd) - (bd)(ac) - (bc)(ad)"));
    if (name == "rc")
        return parse_poly_expr("a(bc) - a(cb)");
    throw DomainError("unknown identity '" + std::string(name) + "'");
}

inline std::string substitute_code(std::string_view code, const std::map<char, Monomial>& sigma)
{
    std::string out;
    for (char c : code) {
        if (c == '*') {
            out.push_back(c);
            continue;
        }
        auto it = sigma.find(c);
        if (it == sigma.end())
            throw DomainError(std::string("substitution undefined on letter '") + c + "'");
        out += it->second.code;
    }
    return out;
}

/// Simultaneous substitution of monomials for letters, then straightening.
inline Polynomial apply_substitution(const Polynomial& p, const std::map<char, Monomial>& sigma)
{
    Polynomial out;
    for (const auto& [m, c] : p)
        out.add(straighten(Monomial{substitute_code(m.code, sigma)}), c);
    return out;
}

/// Letter renaming: from[i] -> to[i], then straightening.
inline Polynomial rename_letters(const Polynomial& p, std::string_view from, std::string_view to)
{
    std::map<char, Monomial> sigma;
    for (std::size_t i = 0; i < from.size(); ++i)
        sigma[from[i]] = leaf(to[i]);
    return apply_substitution(p, sigma);
}

/// Sorted distinct letters of a multilinear polynomial; throws when P is not multilinear.
inline std::string multilinear_letters(const Polynomial& p)
{
    if (p.empty())
        throw DomainError("zero polynomial");
    std::string letters;
    for (const auto& [m, c] : p) {
        std::string w = word(m.code);
        std::sort(w.begin(), w.end());
        if (std::adjacent_find(w.begin(), w.end()) != w.end())
            throw DomainError("polynomial is not multilinear");
        if (letters.empty())
            letters = w;
        else if (letters != w)
            throw DomainError("polynomial is not homogeneous");
    }
    return letters;
}

/// The n+2 liftings to degree n+1: x_i -> x_i x_{n+1} for each letter in order,
/// then P x_{n+1}, then x_{n+1} P.
inline std::vector<Polynomial> liftings(const Polynomial& p)
{
    const std::string letters = multilinear_letters(p);
    const char fresh = static_cast<char>(letters.back() + 1);
    if (fresh > 'z')
        throw DomainError("no fresh letter available");
    std::vector<Polynomial> out;
    for (char x : letters) {
        std::map<char, Monomial> sigma;
        for (char y : letters)
            sigma[y] = y == x ? product(leaf(x), leaf(fresh)) : leaf(y);
        out.push_back(apply_substitution(p, sigma));
    }
    Polynomial right, left;
    for (const auto& [m, c] : p) {
        right.add(straighten(product(m, leaf(fresh))), c);
        left.add(straighten(product(leaf(fresh), m)), c);
    }
    out.push_back(std::move(right));
    out.push_back(std::move(left));
    return out;
}

struct Generator {
    std::string label;
    Polynomial poly;
};

/// All liftings of a generator list, labelled parent.k with k = 1..n+2.
inline std::vector<Generator> lift_all(const std::vector<Generator>& gens)
{
    std::vector<Generator> out;
    for (const auto& g : gens) {
        auto ls = liftings(g.poly);
        for (std::size_t k = 0; k < ls.size(); ++k)
            out.push_back({g.label + "." + std::to_string(k + 1), std::move(ls[k])});
    }
    return out;
}

inline std::vector<Generator> degree4_generators() { return {{"J", known_identity("J")}, {"K", known_identity("K")}}; }

struct LiftingReport {
    std::vector<Generator> generators;
    std::vector<std::size_t> trace;     ///< rank after each generator
    std::vector<std::size_t> retained;  ///< 1-based positions where the rank grew
    std::size_t final_rank = 0;
};

/// All arrangements of `content` in lexicographic order (n! words when distinct).
inline std::vector<std::string> arrangements(std::string content)
{
    std::sort(content.begin(), content.end());
    std::vector<std::string> out;
    do
        out.push_back(content);
    while (std::next_permutation(content.begin(), content.end()));
    return out;
}

/// Appends to `rows` one row per arrangement: the generator with letter
/// letters[i] replaced by arrangement[i], straightened, in basis coordinates.
inline void substituted_rows(const Polynomial& gen, const std::string& letters, const std::vector<std::string>& subs,
                             const FrcBasis& basis, FpMatrix& rows)
{
    std::array<char, 128> map{};
    for (std::size_t r = 0; r < subs.size(); ++r) {
        for (std::size_t i = 0; i < letters.size(); ++i)
            map[static_cast<unsigned char>(letters[i])] = subs[r][i];
        std::vector<Residue> row(basis.size(), 0);
        for (const auto& [m, c] : gen) {
            std::string code = m.code;
            for (char& ch : code)
                if (ch != '*')
                    ch = map[static_cast<unsigned char>(ch)];
            Monomial s{straighten_code(code)};
            auto idx = basis.index_of(s);
            if (!idx)
                throw DomainError("substituted monomial " + to_string(s) + " is not in the basis");
            row[*idx] = reduce_mod(static_cast<std::int64_t>(row[*idx]) + c, rows.prime());
        }
        rows.append_row(row);
    }
}

/// Cumulative rank of all letter permutations of each generator in FRC_n.
inline LiftingReport lifting_trace(const std::vector<Generator>& gens, std::size_t n, std::uint32_t p,
                                   const std::function<void(std::size_t, std::size_t)>& progress = {})
{
    checked_prime(p);
    FrcBasis basis = FrcBasis::multilinear(n);
    auto perms = arrangements(basic_word(n));
    RowReducer reducer(p, basis.size());
    LiftingReport report;
    report.generators = gens;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        FpMatrix rows(p, 0, basis.size());
        substituted_rows(gens[g].poly, basic_word(n), perms, basis, rows);
        std::size_t before = reducer.rank();
        std::size_t after = reducer.append(rows);
        report.trace.push_back(after);
        if (after > before)
            report.retained.push_back(g + 1);
        if (progress)
            progress(g + 1, after);
    }
    report.final_rank = reducer.rank();
    return report;
}

inline std::vector<Generator> select(const std::vector<Generator>& gens, const std::vector<std::size_t>& one_based)
{
    std::vector<Generator> out;
    for (auto i : one_based)
        out.push_back(gens[i - 1]);
    return out;
}

/// Direct pipeline: degree 4 uses J and K; degree n > 4 uses the liftings of
/// the generators retained in degree n-1.
inline LiftingReport old_rank_direct(std::size_t n, std::uint32_t p,
                                     const std::function<void(std::size_t, std::size_t)>& progress = {})
{
    if (n < 4 || n > 6)
        throw DomainError("direct pipeline supports degrees 4 to 6");
    if (p <= n)
        throw ConfigError("prime must exceed the degree");
    std::vector<Generator> gens = degree4_generators();
    for (std::size_t d = 4; d < n; ++d) {
        LiftingReport r = lifting_trace(gens, d, p);
        gens = lift_all(select(gens, r.retained));
    }
    return lifting_trace(gens, n, p, progress);
}

/// Nullity of the expansion matrix in degree n.
inline std::size_t all_rank_direct(std::size_t n, std::uint32_t p)
{
    if (n < 1 || n > 6)
        throw DomainError("direct pipeline supports degrees up to 6");
    if (p <= n)
        throw ConfigError("prime must exceed the degree");
    FpMatrix e = build_expansion_matrix(n, p);
    return e.cols() - rank(e);
}

} // namespace qjd
