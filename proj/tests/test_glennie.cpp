#include "qjd/glennie.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>

using namespace qjd;

namespace {

CommPolynomial C(const char* m)
{
    CommPolynomial p;
    p.add(comm_canonical(parse_monomial(m)), 1);
    return p;
}

// 3x3 matrices mod a large prime; x o y = xy + yx is a special Jordan product
// up to a factor that is uniform on homogeneous polynomials.
constexpr std::int64_t P = 1000000007;
using Mat = std::array<std::int64_t, 9>;

Mat mul(const Mat& x, const Mat& y)
{
    Mat z{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::int64_t s = 0;
            for (int k = 0; k < 3; ++k)
                s = (s + x[i * 3 + k] * y[k * 3 + j]) % P;
            z[i * 3 + j] = s;
        }
    return z;
}

Mat jordan(const Mat& x, const Mat& y)
{
    Mat a = mul(x, y), b = mul(y, x);
    for (int i = 0; i < 9; ++i)
        a[i] = (a[i] + b[i]) % P;
    return a;
}

Mat eval(std::string_view code, const std::map<char, Mat>& env)
{
    if (is_leaf(code))
        return env.at(code[0]);
    auto [u, v] = split(code);
    return jordan(eval(u, env), eval(v, env));
}

Mat eval(const CommPolynomial& g, const std::map<char, Mat>& env)
{
    Mat out{};
    for (const auto& [m, c] : g) {
        Mat t = eval(m.code, env);
        for (int i = 0; i < 9; ++i)
            out[i] = ((out[i] + (c % P + P) % P * t[i]) % P + P) % P;
    }
    return out;
}

Polynomial fixture()
{
    return read_identity_file(std::string(QJD_DATA_DIR) + "/glennie_preimage_c.txt");
}

} // namespace

TEST(JordanTriple, Examples)
{
    auto a = comm_letter('a'), b = comm_letter('b'), c = comm_letter('c');
    EXPECT_EQ(jordan_triple(a, a, a), C("(aa)a"));
    CommPolynomial aba;
    aba.add(comm_canonical(parse_monomial("(ab)a")), 2);
    aba.add(comm_canonical(parse_monomial("(aa)b")), -1);
    EXPECT_EQ(jordan_triple(a, b, a), aba);
    CommPolynomial abc = jordan_triple(a, b, c);
    EXPECT_EQ(abc.size(), 3u);
    EXPECT_EQ(abc.coefficient(comm_canonical(parse_monomial("(ab)c"))), 1);
    EXPECT_EQ(abc.coefficient(comm_canonical(parse_monomial("(cb)a"))), 1);
    EXPECT_EQ(abc.coefficient(comm_canonical(parse_monomial("(ac)b"))), -1);
}

TEST(Glennie, TermsAndContent)
{
    CommPolynomial g = glennie_G();
    EXPECT_EQ(g.size(), 40u);
    for (const auto& [m, c] : g) {
        std::string w = word(m.code);
        std::sort(w.begin(), w.end());
        EXPECT_EQ(w, "aaabbbcc");
        EXPECT_EQ(comm_canonical(m), m);
    }
}

TEST(Glennie, VanishesOnMatricesButIsNotZero)
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::int64_t> dist(-3, 3);
    bool some_factor_nonzero = false;
    for (int trial = 0; trial < 5; ++trial) {
        std::map<char, Mat> env;
        for (char x : {'a', 'b', 'c'})
            for (auto& e : env[x])
                e = (dist(rng) + P) % P;
        EXPECT_EQ(eval(glennie_G(), env), Mat{}) << trial;
        // the (ab) c (ab) triple alone does not vanish
        auto ab = comm_product(comm_letter('a'), comm_letter('b'));
        if (eval(jordan_triple(ab, comm_letter('c'), ab), env) != Mat{})
            some_factor_nonzero = true;
    }
    EXPECT_TRUE(some_factor_nonzero);
}

TEST(Linearize, Examples)
{
    Polynomial p = parse_poly_expr("(aa)b");
    Polynomial lin = partial_linearize(p, 'a', 'd');
    EXPECT_EQ(lin, parse_poly_expr("(da)b + (ad)b"));
    EXPECT_EQ(partial_linearize(p, 'c', 'd').size(), 0u);
    EXPECT_THROW(partial_linearize(parse_poly_expr("(ad)b"), 'a', 'd'), DomainError);
}

TEST(MarkCenter, Examples)
{
    EXPECT_EQ(to_string(mark_center(parse_monomial("(ad)b"), 'd')), "((a|-d)-|b)");
    EXPECT_EQ(to_string(mark_center(parse_monomial("a((bd)c)"), 'd')), "(a|-((b|-d)-|c))");
    EXPECT_EQ(to_string(mark_center(parse_monomial("d"), 'd')), "d");
    EXPECT_THROW(mark_center(parse_monomial("ab"), 'd'), DomainError);
    EXPECT_THROW(mark_center(parse_monomial("dd"), 'd'), DomainError);
}

TEST(MarkCenter, CenterIsTheMarkedLetter)
{
    for (const auto& [m, c] : partial_linearize(glennie_G(), 'b', 'd')) {
        DiTerm t = mark_center(m, 'd');
        DiMonomial nf = normal_form(t);
        ASSERT_EQ(nf.word[nf.center - 1], 'd');
    }
}

TEST(OppositeRewrite, Examples)
{
    EXPECT_EQ(to_string(opposite_rewrite(parse_diterm("(a|-d)"))), "da");
    EXPECT_EQ(to_string(opposite_rewrite(parse_diterm("(d-|a)"))), "da");
    EXPECT_EQ(to_string(opposite_rewrite(parse_diterm("(a|-((b|-d)-|c))"))), "((db)c)a");
}

TEST(Preimage, TermCounts)
{
    EXPECT_EQ(glennie_preimage('a').size(), 100u);
    EXPECT_EQ(glennie_preimage('b').size(), 100u);
    EXPECT_EQ(glennie_preimage('c').size(), 72u);
    EXPECT_THROW(glennie_preimage('d'), DomainError);
}

TEST(Preimage, MatchesFixture)
{
    Polynomial f = fixture();
    EXPECT_EQ(f.size(), 72u);
    EXPECT_TRUE(glennie_preimage('c').proportional_to(straighten_poly(f)));
}

TEST(Preimage, ExpansionVanishes)
{
    for (char x : {'a', 'b', 'c'})
        EXPECT_TRUE(verify_preimage(x)) << x;
    EXPECT_TRUE(verify_preimage(fixture()));
}

TEST(Preimage, DroppingATermBreaksIt)
{
    Polynomial k = glennie_preimage('c');
    Polynomial broken = k;
    const auto& [m, c] = *k.begin();
    broken.add(m, -c);
    EXPECT_EQ(broken.size(), 71u);
    EXPECT_FALSE(verify_preimage(broken));
}

TEST(Preimage, CollapsesToGlennie)
{
    for (char x : {'a', 'b', 'c'})
        EXPECT_TRUE(commutative_collapse(glennie_preimage(x)).proportional_to(glennie_G())) << x;
}
