#pragma once

// Search for identities of a fixed nonlinear content that hold under the
// quasi-Jordan expansion but do not follow from the lifted degree-n identities.

#include "qjd/expansion.hpp"
#include "qjd/fp_linalg.hpp"
#include "qjd/free_magma.hpp"
#include "qjd/identity_engine.hpp"
#include "qjd/symrep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qjd {

struct SpecialSearchReport {
    std::string content;
    std::size_t basis_size = 0;      ///< canonical right-commutative monomials
    std::size_t di_basis_size = 0;   ///< dialgebra monomials
    std::size_t generators = 0;
    std::size_t substitutions = 0;
    std::size_t lifted_rank = 0;     ///< step 1
    std::size_t expansion_rank = 0;  ///< step 2
    std::size_t nullity = 0;
    std::size_t candidates_tested = 0;
    std::size_t distinct_coefficients = 0;  ///< of the accepted nullspace vector
};

struct SpecialSearchResult {
    Polynomial identity;
    SpecialSearchReport report;
};

struct SpecialVerification {
    bool expansion_zero = false;
    std::size_t rank_increase = 0;
    std::size_t commutative_terms = 0;
};

/// Row space of all content substitutions of the lifted generators of degree
/// |content|.  Degrees below 4 carry no lifted identities.
inline RowReducer lifted_identity_space(const std::string& content, const FrcBasis& basis, const ChainOptions& opt,
                                        std::size_t* generator_count = nullptr, std::size_t* substitution_count = nullptr)
{
    const std::size_t n = content.size();
    RowReducer reducer(opt.p, basis.size());
    if (n < 4)
        return reducer;
    const auto gens = lifted_generators(n, opt);
    const auto subs = arrangements(content);
    if (generator_count)
        *generator_count = gens.size();
    if (substitution_count)
        *substitution_count = subs.size();
    const std::string letters = basic_word(n);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        FpMatrix rows(opt.p, 0, basis.size());
        substituted_rows(gens[g].poly, letters, subs, basis, rows);
        reducer.append(rows);
        if (opt.progress && ((g + 1) % 25 == 0 || g + 1 == gens.size()))
            opt.progress("lifted generators " + std::to_string(g + 1) + "/" + std::to_string(gens.size()) +
                         ": rank " + std::to_string(reducer.rank()));
    }
    return reducer;
}

inline std::vector<Residue> coordinates(const Polynomial& poly, const FrcBasis& basis, std::uint32_t p)
{
    std::vector<Residue> v(basis.size(), 0);
    for (const auto& [m, c] : poly) {
        auto idx = basis.index_of(straighten(m));
        if (!idx)
            throw DomainError("monomial " + to_string(m) + " does not have the basis content");
        v[*idx] = reduce_mod(static_cast<std::int64_t>(v[*idx]) + c, p);
    }
    return v;
}

namespace detail {

// Nullspace vector attached to free column f of a matrix in row canonical form.
inline std::vector<Residue> null_vector(const FpMatrix& rcf, const std::vector<std::size_t>& pivots, std::size_t f)
{
    const std::uint32_t p = rcf.prime();
    std::vector<Residue> v(rcf.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        Residue x = rcf.at(i, f);
        if (x != 0)
            v[pivots[i]] = static_cast<Residue>(p - x);
    }
    return v;
}

inline std::size_t distinct_nonzero(const std::vector<Residue>& v)
{
    std::set<Residue> seen;
    for (Residue x : v)
        if (x != 0)
            seen.insert(x);
    return seen.size();
}

} // namespace detail

inline Polynomial integer_identity(const std::vector<Residue>& v, const FrcBasis& basis, std::uint32_t p,
                                   std::int64_t scale)
{
    Polynomial out;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0)
            out.add(basis.monomial(j), symmetric_lift(static_cast<std::uint32_t>((std::uint64_t{v[j]} * reduce_mod(scale, p)) % p), p));
    return out;
}

/// Steps: (1) rank of the lifted identities in this content, (2) nullspace of
/// the expansion matrix, (3) nullspace vectors by ascending number of distinct
/// coefficients until one is not in the lifted space.
inline std::optional<SpecialSearchResult> find_special_identity(const std::string& content_in, const ChainOptions& opt,
                                                                bool allow_large = false)
{
    std::string content = content_in;
    std::sort(content.begin(), content.end());
    if (content.size() > 8 && !allow_large)
        throw ResourceError("content of size " + std::to_string(content.size()) +
                            " exceeds the degree guard (override to proceed)");
    if (opt.p <= content.size())
        throw ConfigError("prime must exceed the degree");
    checked_prime(opt.p);

    SpecialSearchReport rep;
    rep.content = content;
    FrcBasis basis = FrcBasis::with_content(content, allow_large);
    FdBasis di = FdBasis::with_content(content, allow_large);
    rep.basis_size = basis.size();
    rep.di_basis_size = di.size();

    RowReducer lifted = lifted_identity_space(content, basis, opt, &rep.generators, &rep.substitutions);
    rep.lifted_rank = lifted.rank();

    RcfResult e = rcf(build_expansion_matrix(basis, di, opt.p, allow_large));
    rep.expansion_rank = e.rank;
    rep.nullity = basis.size() - e.rank;
    if (opt.progress)
        opt.progress("expansion rank " + std::to_string(e.rank) + ", nullity " + std::to_string(rep.nullity));

    std::vector<char> is_pivot(basis.size(), 0);
    for (auto c : e.pivots)
        is_pivot[c] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (distinct count, free column)
    for (std::size_t f = 0; f < basis.size(); ++f)
        if (!is_pivot[f])
            order.emplace_back(detail::distinct_nonzero(detail::null_vector(e.matrix, e.pivots, f)), f);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });

    for (const auto& [count, f] : order) {
        ++rep.candidates_tested;
        auto v = detail::null_vector(e.matrix, e.pivots, f);
        if (lifted.contains(v))
            continue;
        rep.distinct_coefficients = count;
        Polynomial id = integer_identity(v, basis, opt.p, 2);
        if (!expand_poly(id, allow_large).empty()) {
            // Coefficients are not small integers after doubling: lift via the
            // rationals with a common denominator instead.
            const auto bound = static_cast<std::int64_t>(std::sqrt(opt.p / 2.0));
            std::int64_t lcd = 1;
            for (Residue x : v) {
                if (x == 0)
                    continue;
                auto q = recognize_rational(x, opt.p, bound, bound);
                if (!q)
                    throw DomainError("nullspace vector has no small rational lift");
                lcd = std::lcm(lcd, q->second);
            }
            id = integer_identity(v, basis, opt.p, lcd);
        }
        id = id.normalized();
        if (opt.progress)
            opt.progress("accepted candidate " + std::to_string(rep.candidates_tested) + " with " +
                         std::to_string(id.size()) + " terms");
        return SpecialSearchResult{std::move(id), std::move(rep)};
    }
    return std::nullopt;
}

inline std::string content_of(const Polynomial& p)
{
    if (p.empty())
        throw DomainError("zero polynomial");
    std::string content;
    for (const auto& [m, c] : p) {
        std::string w = word(m.code);
        std::sort(w.begin(), w.end());
        if (content.empty())
            content = w;
        else if (content != w)
            throw DomainError("polynomial is not homogeneous");
    }
    return content;
}

inline SpecialVerification verify_special(const Polynomial& poly, const ChainOptions& opt, bool allow_large = false)
{
    const std::string content = content_of(poly);
    check_degree_guard(content.size(), allow_large);
    if (opt.p <= content.size())
        throw ConfigError("prime must exceed the degree");
    SpecialVerification out;
    out.expansion_zero = expand_poly(poly, allow_large).empty();
    LinearCombination<Monomial> collapse;
    for (const auto& [m, c] : poly)
        collapse.add(comm_canonical(m), c);
    out.commutative_terms = collapse.size();

    FrcBasis basis = FrcBasis::with_content(content, allow_large);
    RowReducer lifted = lifted_identity_space(content, basis, opt);
    const std::size_t before = lifted.rank();
    out.rank_increase = lifted.append(coordinates(poly, basis, opt.p)) - before;
    return out;
}

} // namespace qjd
