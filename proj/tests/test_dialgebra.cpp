#include "qjd/dialgebra.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace qjd;

namespace {

// Every two-operation term on the given leaf word.
std::vector<DiTerm> all_terms(const std::string& w)
{
    if (w.size() == 1)
        return {di_leaf(w[0])};
    std::vector<DiTerm> out;
    for (std::size_t k = 1; k < w.size(); ++k)
        for (const auto& u : all_terms(w.substr(0, k)))
            for (const auto& v : all_terms(w.substr(k)))
                for (DiOp op : {DiOp::left, DiOp::right})
                    out.push_back(di_node(op, u, v));
    return out;
}

std::vector<DiMonomial> all_normal_forms(const std::string& w)
{
    std::vector<DiMonomial> out;
    for (std::size_t c = 1; c <= w.size(); ++c)
        out.push_back({w, c});
    return out;
}

DiMonomial nf(const char* s) { return normal_form(parse_diterm(s)); }

} // namespace

TEST(DiMonomial, TextRoundTrip)
{
    for (const char* s : {"^a", "ed^abc", "^abcde", "abcd^e"})
        EXPECT_EQ(to_string(parse_dimonomial(s)), s);
    EXPECT_EQ(parse_dimonomial("ed^abc").center, 3u);
    EXPECT_THROW(parse_dimonomial("abc"), ParseError);
    EXPECT_THROW(parse_dimonomial("ab^"), ParseError);
    EXPECT_THROW(parse_dimonomial("a^B"), ParseError);
}

TEST(DiTerm, Center)
{
    EXPECT_EQ(center(parse_diterm("a")), 1u);
    EXPECT_EQ(center(parse_diterm("((a|-b)-|c)")), 2u);
    EXPECT_EQ(center(parse_diterm("(((a-|b)|-c)|-(d-|e))")), 4u);
}

TEST(DiTerm, NormalForm)
{
    EXPECT_EQ(to_string(nf("(a-|(b-|c))")), "^abc");
    EXPECT_EQ(to_string(nf("((a|-b)-|c)")), "a^bc");
    EXPECT_EQ(to_string(nf("a")), "^a");
}

TEST(DiTerm, ParseErrorsAndRoundTrip)
{
    for (const char* s : {"a", "(a-|b)", "((a|-b)-|c)", "(((a-|b)|-c)|-(d-|e))"})
        EXPECT_EQ(to_string(parse_diterm(s)), s);
    EXPECT_THROW(parse_diterm("(a-|b"), ParseError);
    EXPECT_THROW(parse_diterm("(ab)"), ParseError);
    EXPECT_THROW(parse_diterm("a-|b"), ParseError);
    EXPECT_THROW(parse_diterm(""), ParseError);
}

TEST(DiTerm, NormalFormOfNormalTermIsItself)
{
    // (a |- b) |- c -| (d -| e) written as a normal term with center c
    DiMonomial m = nf("(((a|-b)|-c)-|(d-|e))");
    EXPECT_EQ(to_string(m), "ab^cde");
}

TEST(DiProduct, Examples)
{
    EXPECT_EQ(to_string(di_product(parse_dimonomial("^ab"), DiOp::left, parse_dimonomial("^c"))), "^abc");
    EXPECT_EQ(to_string(di_product(parse_dimonomial("^ab"), DiOp::right, parse_dimonomial("^cd"))), "ab^cd");
}

TEST(DiProduct, AgreesWithTermNormalForms)
{
    for (std::size_t n = 2; n <= 5; ++n) {
        std::string w = basic_word(n);
        for (const auto& t : all_terms(w)) {
            auto [u, v] = std::pair{t.code.substr(1, detail::di_subtree_end(t.code, 1) - 1),
                                    t.code.substr(detail::di_subtree_end(t.code, 1))};
            DiOp op = static_cast<DiOp>(t.code[0]);
            DiMonomial lhs = normal_form(t);
            DiMonomial rhs = di_product(normal_form(DiTerm{u}), op, normal_form(DiTerm{v}));
            ASSERT_EQ(lhs, rhs) << to_string(t);
            ASSERT_EQ(lhs.word, di_word(t));
            ASSERT_EQ(lhs.center, center(t));
            // products of normal forms are normal
            ASSERT_EQ(normal_form(parse_diterm(to_string(t))), lhs);
        }
    }
}

TEST(DiProduct, AxiomsExhaustiveToDegree4)
{
    using F = std::function<DiMonomial(const DiMonomial&, const DiMonomial&, const DiMonomial&)>;
    auto L = [](const DiMonomial& a, const DiMonomial& b) { return di_product(a, DiOp::left, b); };
    auto R = [](const DiMonomial& a, const DiMonomial& b) { return di_product(a, DiOp::right, b); };
    std::vector<std::pair<F, F>> axioms = {
        {[&](auto& x, auto& y, auto& z) { return L(L(x, y), z); }, [&](auto& x, auto& y, auto& z) { return L(x, L(y, z)); }},
        {[&](auto& x, auto& y, auto& z) { return L(L(x, y), z); }, [&](auto& x, auto& y, auto& z) { return L(x, R(y, z)); }},
        {[&](auto& x, auto& y, auto& z) { return L(R(x, y), z); }, [&](auto& x, auto& y, auto& z) { return R(x, L(y, z)); }},
        {[&](auto& x, auto& y, auto& z) { return R(L(x, y), z); }, [&](auto& x, auto& y, auto& z) { return R(R(x, y), z); }},
        {[&](auto& x, auto& y, auto& z) { return R(R(x, y), z); }, [&](auto& x, auto& y, auto& z) { return R(x, R(y, z)); }},
    };
    std::size_t checked = 0;
    const std::string letters = "abcd";
    for (std::size_t i = 1; i <= 2; ++i)
        for (std::size_t j = 1; i + j <= 3; ++j)
            for (std::size_t k = 1; i + j + k <= 4; ++k) {
                std::string wx = letters.substr(0, i), wy = letters.substr(i, j), wz = letters.substr(i + j, k);
                for (const auto& x : all_normal_forms(wx))
                    for (const auto& y : all_normal_forms(wy))
                        for (const auto& z : all_normal_forms(wz))
                            for (const auto& [lhs, rhs] : axioms) {
                                ASSERT_EQ(lhs(x, y, z), rhs(x, y, z));
                                ++checked;
                            }
            }
    EXPECT_GT(checked, 0u);
}

TEST(DiTerm, AxiomsHoldOnTermNormalForms)
{
    // same axioms, evaluated through term trees rather than the product formula
    for (const auto& [l, r] : std::vector<std::pair<const char*, const char*>>{
             {"((a-|b)-|c)", "(a-|(b-|c))"},
             {"((a-|b)-|c)", "(a-|(b|-c))"},
             {"((a|-b)-|c)", "(a|-(b-|c))"},
             {"((a-|b)|-c)", "((a|-b)|-c)"},
             {"((a|-b)|-c)", "(a|-(b|-c))"},
             {"(((a-|b)-|c)|-d)", "((a|-(b|-c))|-d)"}})
        EXPECT_EQ(nf(l), nf(r)) << l << " = " << r;
}

TEST(FdBasis, Multilinear)
{
    EXPECT_EQ(fd_basis(5).size(), 600u);
    FdBasis b2 = fd_basis(2);
    ASSERT_EQ(b2.size(), 4u);
    std::vector<std::string> got;
    for (std::size_t i = 0; i < 4; ++i)
        got.push_back(to_string(b2.monomial(i)));
    EXPECT_EQ(got, (std::vector<std::string>{"^ab", "^ba", "a^b", "b^a"}));
    FdBasis b4 = fd_basis(4);
    std::string w = "abcd";
    std::size_t lex = 0;
    do {
        for (std::size_t c = 1; c <= 4; ++c)
            EXPECT_EQ(b4.index_of({w, c}), std::optional<std::size_t>((c - 1) * 24 + lex));
        ++lex;
    } while (std::next_permutation(w.begin(), w.end()));
    EXPECT_FALSE(b4.index_of({"abce", 1}).has_value());
    EXPECT_FALSE(b4.index_of({"abcd", 5}).has_value());
}

TEST(FdBasis, ContentAndErrors)
{
    EXPECT_EQ(FdBasis::with_content("aaaabbbc").size(), 2240u);
    EXPECT_EQ(FdBasis::with_content("aa").size(), 2u);
    EXPECT_THROW(FdBasis::with_content(""), DomainError);
    EXPECT_THROW(fd_basis(0), DomainError);
    EXPECT_THROW(fd_basis(9), ResourceError);
    FdBasis b = FdBasis::with_content("aabc");
    for (std::size_t i = 0; i < b.size(); ++i)
        EXPECT_EQ(b.index_of(b.monomial(i)), std::optional<std::size_t>(i));
}
