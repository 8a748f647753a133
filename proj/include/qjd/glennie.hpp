#pragma once

// The Glennie identity and its noncommutative preimages under the
// quasi-Jordan product.

#include "qjd/dialgebra.hpp"
#include "qjd/expansion.hpp"
#include "qjd/free_magma.hpp"
#include "qjd/identity_engine.hpp"

#include <string>
#include <string_view>

namespace qjd {

/// Polynomial over commutative canonical monomials.
using CommPolynomial = LinearCombination<Monomial>;

inline CommPolynomial comm_letter(char x)
{
    CommPolynomial p;
    p.add(leaf(x), 1);
    return p;
}

inline CommPolynomial comm_product(const CommPolynomial& x, const CommPolynomial& y)
{
    CommPolynomial out;
    for (const auto& [u, a] : x)
        for (const auto& [v, b] : y)
            out.add(comm_canonical(product(u, v)), checked_mul(a, b));
    return out;
}

/// {xyz} = (xy)z + (zy)x - (xz)y
inline CommPolynomial jordan_triple(const CommPolynomial& x, const CommPolynomial& y, const CommPolynomial& z)
{
    CommPolynomial out = comm_product(comm_product(x, y), z);
    out += comm_product(comm_product(z, y), x);
    out -= comm_product(comm_product(x, z), y);
    return out;
}

/// G = 2{{b{aca}b}c(ab)} - {b{a{c(ab)c}a}b} - 2{(ab)c{a{bcb}a}} + {a{b{c(ab)c}b}a}
inline CommPolynomial glennie_G()
{
    const auto a = comm_letter('a'), b = comm_letter('b'), c = comm_letter('c');
    const auto ab = comm_product(a, b);
    const auto cabc = jordan_triple(c, ab, c);
    auto t1 = jordan_triple(jordan_triple(b, jordan_triple(a, c, a), b), c, ab);
    auto t2 = jordan_triple(b, jordan_triple(a, cabc, a), b);
    auto t3 = jordan_triple(ab, c, jordan_triple(a, jordan_triple(b, c, b), a));
    auto t4 = jordan_triple(a, jordan_triple(b, cabc, b), a);
    CommPolynomial g = t1.scaled(2);
    g -= t2;
    g -= t3.scaled(2);
    g += t4;
    return g;
}

/// Replaces each occurrence of x, one at a time, by d.  Terms keep the written
/// form of the input.
inline Polynomial partial_linearize(const Polynomial& p, char x, char d)
{
    Polynomial out;
    for (const auto& [m, c] : p) {
        if (m.code.find(d) != std::string::npos)
            throw DomainError(std::string("letter '") + d + "' already occurs");
        for (std::size_t i = 0; i < m.code.size(); ++i)
            if (m.code[i] == x) {
                Monomial t = m;
                t.code[i] = d;
                out.add(t, c);
            }
    }
    return out;
}

namespace detail {

// side: -1 subtree left of d, +1 right of d, 0 contains d
inline std::string mark(std::string_view code, char d, int side)
{
    if (is_leaf(code))
        return std::string(code);
    auto [u, v] = split(code);
    if (side < 0)
        return ">" + mark(u, d, -1) + mark(v, d, -1);
    if (side > 0)
        return "<" + mark(u, d, 1) + mark(v, d, 1);
    if (u.find(d) != std::string_view::npos)
        return "<" + mark(u, d, 0) + mark(v, d, 1);
    return ">" + mark(u, d, -1) + mark(v, d, 0);
}

inline std::string opposite(std::string_view code, std::size_t& pos)
{
    char c = code[pos++];
    if (c != '<' && c != '>')
        return std::string(1, c);
    std::string y = opposite(code, pos);
    std::string z = opposite(code, pos);
    return c == '>' ? "*" + z + y : "*" + y + z;
}

} // namespace detail

/// Makes d the center: operations written before d become |-, after d become -|.
inline DiTerm mark_center(const Monomial& m, char d)
{
    if (std::count(m.code.begin(), m.code.end(), d) != 1)
        throw DomainError(std::string("monomial must contain '") + d + "' exactly once");
    return DiTerm{detail::mark(m.code, d, 0)};
}

/// y |- z becomes z y; y -| z becomes y z.
inline Monomial opposite_rewrite(const DiTerm& t)
{
    std::size_t pos = 0;
    return Monomial{detail::opposite(t.code, pos)};
}

/// Noncommutative preimage of G obtained by linearizing in x, with the result
/// straightened, collected and normalized.
inline Polynomial glennie_preimage(char x)
{
    if (x != 'a' && x != 'b' && x != 'c')
        throw DomainError("the linearized variable must be a, b or c");
    const char d = 'd';
    Polynomial h = partial_linearize(glennie_G(), x, d);
    Polynomial k;
    for (const auto& [m, c] : h) {
        Monomial j = opposite_rewrite(mark_center(m, d));
        std::replace(j.code.begin(), j.code.end(), d, x);
        k.add(straighten(j), c);
    }
    return k.normalized();
}

/// Collapse to the commutative algebra: sort children at every node and collect.
inline CommPolynomial commutative_collapse(const Polynomial& p)
{
    CommPolynomial out;
    for (const auto& [m, c] : p)
        out.add(comm_canonical(m), c);
    return out;
}

inline bool verify_preimage(const Polynomial& k) { return expand_poly(k).empty(); }

inline bool verify_preimage(char x) { return verify_preimage(glennie_preimage(x)); }

} // namespace qjd
