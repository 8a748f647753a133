#include "qjd/fp_linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace qjd;
using boost::multiprecision::cpp_int;

namespace {

// Fraction-free (Bareiss) rank over the integers.
std::size_t integer_rank(std::vector<std::vector<cpp_int>> a)
{
    const std::size_t m = a.size(), n = a.empty() ? 0 : a[0].size();
    cpp_int prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t piv = r;
        while (piv < m && a[piv][c] == 0)
            ++piv;
        if (piv == m)
            continue;
        std::swap(a[piv], a[r]);
        for (std::size_t i = r + 1; i < m; ++i) {
            for (std::size_t j = c + 1; j < n; ++j)
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

FpMatrix random_matrix(std::uint32_t p, std::size_t rows, std::size_t cols, std::mt19937& rng, int hi = 100)
{
    std::uniform_int_distribution<int> d(0, hi);
    FpMatrix m(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.set(i, j, d(rng));
    return m;
}

} // namespace

TEST(Prime, RejectsBadModuli)
{
    EXPECT_THROW(checked_prime(2), ConfigError);
    EXPECT_THROW(checked_prime(1), ConfigError);
    EXPECT_THROW(checked_prime(4), ConfigError);
    EXPECT_THROW(checked_prime(65537), ConfigError);
    EXPECT_EQ(checked_prime(101), 101u);
    EXPECT_THROW(FpMatrix(9, 2, 2), ConfigError);
}

TEST(Rcf, IdentityIsFixed)
{
    FpMatrix id = FpMatrix::identity(101, 3);
    RcfResult r = rcf(id);
    EXPECT_EQ(r.matrix, id);
    EXPECT_EQ(r.rank, 3u);
    EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Rcf, SmallHandExample)
{
    // [[2,4],[1,3]] over F_7 -> identity
    FpMatrix m(7, 2, 2);
    m.set(0, 0, 2);
    m.set(0, 1, 4);
    m.set(1, 0, 1);
    m.set(1, 1, 3);
    EXPECT_EQ(rcf(m).matrix, FpMatrix::identity(7, 2));
    // [[1,2],[2,4]] -> [[1,2],[0,0]]
    FpMatrix s(7, 2, 2);
    s.set(0, 0, 1);
    s.set(0, 1, 2);
    s.set(1, 0, 2);
    s.set(1, 1, 4);
    RcfResult r = rcf(s);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_EQ(r.matrix.at(0, 1), 2);
    EXPECT_EQ(r.matrix.at(1, 0), 0);
    EXPECT_EQ(r.matrix.at(1, 1), 0);
}

TEST(Rcf, MatchesIntegerEliminationOnRandomMatrices)
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 4; ++trial) {
        FpMatrix r = random_matrix(101, 40, 60, rng);
        std::vector<std::vector<cpp_int>> z(40, std::vector<cpp_int>(60));
        for (std::size_t i = 0; i < 40; ++i)
            for (std::size_t j = 0; j < 60; ++j)
                z[i][j] = r.at(i, j);
        // make some rows dependent over the integers so the rank is not trivially full
        if (trial % 2 == 1)
            for (std::size_t i = 30; i < 40; ++i)
                for (std::size_t j = 0; j < 60; ++j)
                    z[i][j] = z[i - 30][j] + 2 * z[i - 29][j];
        FpMatrix m(101, 40, 60);
        for (std::size_t i = 0; i < 40; ++i)
            for (std::size_t j = 0; j < 60; ++j)
                m.set(i, j, static_cast<std::int64_t>(z[i][j]));
        EXPECT_EQ(rank(m), integer_rank(z)) << "trial " << trial;
        EXPECT_EQ(rank(m), trial % 2 ? 30u : 40u);
    }
}

TEST(Rcf, OutputSatisfiesPredicateAndIsIdempotent)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        FpMatrix m = random_matrix(13, 12, 15, rng, 3);
        RcfResult r = rcf(m);
        EXPECT_TRUE(is_rcf(r.matrix));
        EXPECT_EQ(rcf(r.matrix).matrix, r.matrix);
        EXPECT_EQ(r.rank, r.pivots.size());
        // row space unchanged
        EXPECT_EQ(append_and_reduce(r.matrix, m).rank, r.rank);
    }
}

TEST(Rcf, LargeSparseDeterministic)
{
    std::mt19937 rng(99);
    FpMatrix m = random_matrix(101, 300, 700, rng, 1);
    EXPECT_EQ(rcf(m).matrix, rcf(m).matrix);
}

TEST(AppendAndReduce, RowInSpaceKeepsRank)
{
    std::mt19937 rng(3);
    FpMatrix m = random_matrix(101, 5, 8, rng);
    RcfResult r = rcf(m);
    FpMatrix extra(101, 0, 8);
    std::vector<Residue> combo(8);
    for (std::size_t j = 0; j < 8; ++j)
        combo[j] = static_cast<Residue>((3u * m.at(0, j) + 5u * m.at(4, j)) % 101);
    extra.append_row(combo);
    RcfResult s = append_and_reduce(r.matrix, extra);
    EXPECT_EQ(s.rank, r.rank);
    EXPECT_TRUE(is_rcf(s.matrix));
}

TEST(AppendAndReduce, OneAtATimeEqualsAllAtOnce)
{
    std::mt19937 rng(4);
    FpMatrix m = random_matrix(101, 30, 20, rng, 2);
    FpMatrix state(101, 0, 20);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        FpMatrix row(101, 0, 20);
        row.append_row(m.row(i));
        RcfResult s = append_and_reduce(state, row);
        FpMatrix trimmed(101, 0, 20);
        for (std::size_t k = 0; k < s.rank; ++k)
            trimmed.append_row(s.matrix.row(k));
        state = trimmed;
    }
    RcfResult all = rcf(m);
    EXPECT_EQ(state.rows(), all.rank);
    for (std::size_t k = 0; k < all.rank; ++k)
        EXPECT_TRUE(std::equal(state.row(k).begin(), state.row(k).end(), all.matrix.row(k).begin()));
}

TEST(AppendAndReduce, Errors)
{
    FpMatrix a(101, 1, 3), b(101, 1, 4);
    EXPECT_THROW(append_and_reduce(a, b), DimensionError);
    FpMatrix bad(101, 1, 3);
    bad.set(0, 0, 2);
    EXPECT_THROW(append_and_reduce(bad, a), DomainError);
}

TEST(RowReducer, IncrementalMatchesBatch)
{
    std::mt19937 rng(11);
    FpMatrix m = random_matrix(103, 50, 40, rng, 1);
    RowReducer inc(103, 40);
    for (std::size_t i = 0; i < m.rows(); ++i)
        inc.append(m.row(i));
    RowReducer batch(103, 40);
    batch.append(m);
    EXPECT_EQ(inc.rank(), batch.rank());
    EXPECT_EQ(inc.basis(), batch.basis());
    for (std::size_t i = 0; i < m.rows(); ++i)
        EXPECT_TRUE(batch.contains(m.row(i)));
}

TEST(Nullspace, IdentityHasNone) { EXPECT_TRUE(nullspace_basis(FpMatrix::identity(101, 4)).empty()); }

TEST(Nullspace, VectorsAreKernelAndIndependent)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        FpMatrix m = random_matrix(101, 15, 25, rng, 2);
        for (std::size_t j = 0; j < 25; ++j)
            m.set(14, j, static_cast<std::int64_t>(m.at(0, j)) * 2);
        auto ns = nullspace_basis(m);
        EXPECT_EQ(ns.size() + rank(m), m.cols());
        RcfResult r = rcf(m);
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < 25; ++j)
            if (std::find(r.pivots.begin(), r.pivots.end(), j) == r.pivots.end())
                free.push_back(j);
        ASSERT_EQ(free.size(), ns.size());
        FpMatrix vs(101, 0, 25);
        for (std::size_t k = 0; k < ns.size(); ++k) {
            auto prod = multiply(m, ns[k]);
            EXPECT_TRUE(std::all_of(prod.begin(), prod.end(), [](Residue x) { return x == 0; }));
            for (std::size_t l = 0; l < free.size(); ++l)
                EXPECT_EQ(ns[k][free[l]], k == l ? 1 : 0);
            vs.append_row(ns[k]);
        }
        EXPECT_EQ(rank(vs), ns.size());
    }
}

TEST(Lift, SymmetricLiftExamples)
{
    EXPECT_EQ(symmetric_lift(100, 101), -1);
    EXPECT_EQ(symmetric_lift(0, 101), 0);
    EXPECT_EQ(symmetric_lift(3, 101), 3);
    EXPECT_EQ(symmetric_lift(98, 101), -3);
    EXPECT_EQ(symmetric_lift(50, 101), 50);
    EXPECT_EQ(symmetric_lift(51, 101), -50);
}

TEST(Lift, SymmetricLiftInvertsReduction)
{
    for (std::int64_t z = -50; z <= 50; ++z)
        EXPECT_EQ(symmetric_lift(reduce_mod(z, 101), 101), z);
    for (std::uint32_t r = 0; r < 101; ++r)
        EXPECT_EQ(reduce_mod(symmetric_lift(r, 101), 101), r);
}

TEST(Lift, RecognizeRational)
{
    EXPECT_EQ(recognize_rational(51, 101, 3, 2), (std::pair<std::int64_t, std::int64_t>{1, 2}));
    EXPECT_EQ(recognize_rational(52, 101, 3, 2), (std::pair<std::int64_t, std::int64_t>{3, 2}));
    EXPECT_EQ(recognize_rational(49, 101, 3, 2), (std::pair<std::int64_t, std::int64_t>{-3, 2}));
    EXPECT_EQ(recognize_rational(50, 101, 3, 2), (std::pair<std::int64_t, std::int64_t>{-1, 2}));
    EXPECT_EQ(recognize_rational(2, 101, 3, 2), (std::pair<std::int64_t, std::int64_t>{2, 1}));
    EXPECT_FALSE(recognize_rational(40, 101, 3, 2).has_value());
}

TEST(FpMatrix, TsvRoundTripAndHeader)
{
    std::mt19937 rng(8);
    FpMatrix m = random_matrix(101, 3, 4, rng);
    std::string t = m.to_tsv();
    EXPECT_EQ(t.substr(0, t.find('\n')), "101 3 4");
    EXPECT_EQ(FpMatrix::from_tsv(t), m);
}

TEST(FpMatrix, InverseAndMultiply)
{
    std::mt19937 rng(9);
    FpMatrix m = random_matrix(101, 6, 6, rng);
    while (rank(m) < 6)
        m = random_matrix(101, 6, 6, rng);
    EXPECT_EQ(multiply(m, inverse(m)), FpMatrix::identity(101, 6));
    FpMatrix z(101, 2, 2);
    EXPECT_THROW(inverse(z), DomainError);
}

TEST(FpMatrix, DimensionErrors)
{
    FpMatrix m(101, 2, 3);
    std::vector<Residue> wrong(2);
    EXPECT_THROW(m.append_row(wrong), DimensionError);
    EXPECT_THROW(multiply(m, std::span<const Residue>(wrong)), DimensionError);
    RowReducer r(101, 3);
    EXPECT_THROW(r.append(std::span<const Residue>(wrong)), DimensionError);
}
