#pragma once

// Representations of S_n over F_p through Clifton matrices, and per-partition
// ranks of the lifted identities ("old") and of the kernel of the expansion
// map ("all").

#include "qjd/expansion.hpp"
#include "qjd/fp_linalg.hpp"
#include "qjd/free_magma.hpp"
#include "qjd/identity_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace qjd {

using Partition = std::vector<int>;

/// Partitions of n in reverse lexicographic order: (n) first, (1^n) last.
inline std::vector<Partition> partitions(int n)
{
    if (n < 1)
        throw DomainError("partitions need n >= 1");
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int rest, int max_part) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(rest, max_part); k >= 1; --k) {
            cur.push_back(k);
            rec(rest - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

inline std::string to_string(const Partition& lambda)
{
    std::string s;
    for (int k : lambda)
        s += std::to_string(k);
    return s;
}

/// Parses concatenated parts such as "431" (parts are single digits).
inline Partition parse_partition(std::string_view text)
{
    Partition out;
    for (char c : text) {
        if (c < '1' || c > '9')
            throw ParseError(std::string("bad partition '") + std::string(text) + "'", out.size());
        out.push_back(c - '0');
    }
    if (out.empty() || !std::is_sorted(out.rbegin(), out.rend()))
        throw ParseError("partition parts must be non-increasing", 0);
    return out;
}

/// A tableau as rows of numbers 1..n.
using Tableau = std::vector<std::vector<int>>;

inline std::vector<int> reading_word(const Tableau& t)
{
    std::vector<int> w;
    for (const auto& row : t)
        w.insert(w.end(), row.begin(), row.end());
    return w;
}

/// Standard tableaux of shape lambda, ordered by row-reading word.
inline std::vector<Tableau> standard_tableaux(const Partition& lambda)
{
    int n = 0;
    for (int k : lambda)
        n += k;
    std::vector<Tableau> out;
    Tableau cur(lambda.size());
    std::function<void(int)> rec = [&](int next) {
        if (next > n) {
            out.push_back(cur);
            return;
        }
        for (std::size_t r = 0; r < lambda.size(); ++r) {
            int len = static_cast<int>(cur[r].size());
            if (len < lambda[r] && (r == 0 || static_cast<int>(cur[r - 1].size()) > len)) {
                cur[r].push_back(next);
                rec(next + 1);
                cur[r].pop_back();
            }
        }
    };
    rec(1);
    std::sort(out.begin(), out.end(), [](const Tableau& a, const Tableau& b) { return reading_word(a) < reading_word(b); });
    return out;
}

/// Permutation of {0..n-1}: perm[i] is the image of i.
using Perm = std::vector<std::uint8_t>;

inline Perm identity_perm(std::size_t n)
{
    Perm p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = static_cast<std::uint8_t>(i);
    return p;
}

/// (a b)(i) = a(b(i))
inline Perm compose(const Perm& a, const Perm& b)
{
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[b[i]];
    return c;
}

inline Perm inverse(const Perm& a)
{
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[a[i]] = static_cast<std::uint8_t>(i);
    return c;
}

/// A word that rearranges the first n letters, read as the permutation that
/// sends position i to the letter in position i.
inline Perm perm_of_word(std::string_view w)
{
    Perm p(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        p[i] = static_cast<std::uint8_t>(w[i] - 'a');
    return p;
}

/// Tableaux data for one partition, and the Clifton matrices R_pi.
class CliftonTable {
public:
    explicit CliftonTable(const Partition& lambda, bool reversed_order = false)
        : lambda_(lambda), tableaux_(standard_tableaux(lambda))
    {
        if (reversed_order)
            std::reverse(tableaux_.begin(), tableaux_.end());
        n_ = 0;
        for (int k : lambda)
            n_ += static_cast<std::size_t>(k);
        for (const auto& t : tableaux_) {
            std::vector<std::uint8_t> row(n_ + 1), col(n_ + 1);
            for (std::size_t r = 0; r < t.size(); ++r)
                for (std::size_t c = 0; c < t[r].size(); ++c) {
                    row[t[r][c]] = static_cast<std::uint8_t>(r);
                    col[t[r][c]] = static_cast<std::uint8_t>(c);
                }
            row_of_.push_back(std::move(row));
            col_of_.push_back(std::move(col));
        }
    }

    const Partition& lambda() const noexcept { return lambda_; }
    std::size_t degree() const noexcept { return n_; }
    std::size_t dim() const noexcept { return tableaux_.size(); }
    const std::vector<Tableau>& tableaux() const noexcept { return tableaux_; }

    /// Clifton matrix of pi, d x d row-major, entries in {-1, 0, 1}.
    std::vector<std::int8_t> clifton(const Perm& pi) const
    {
        const std::size_t d = dim();
        std::vector<std::int8_t> out(d * d);
        std::vector<std::uint8_t> jrow(n_ + 1);
        // grid[r][c] of a working copy of T_i
        std::vector<std::vector<int>> grid;
        std::vector<std::uint8_t> irow(n_ + 1), icol(n_ + 1);
        for (std::size_t j = 0; j < d; ++j) {
            // number pi(e) sits where e sits in T_j
            for (std::size_t e = 1; e <= n_; ++e)
                jrow[pi[e - 1] + 1] = row_of_[j][e];
            for (std::size_t i = 0; i < d; ++i) {
                grid = tableaux_[i];
                irow = row_of_[i];
                icol = col_of_[i];
                int entry = 1;
                for (std::size_t number = 1; number <= n_; ++number) {
                    std::size_t ir = irow[number], ic = icol[number], jr = jrow[number];
                    if (ir == jr)
                        continue;
                    if (ic >= static_cast<std::size_t>(lambda_[jr]) || grid[jr][ic] < grid[ir][ic]) {
                        entry = 0;
                        break;
                    }
                    int other = grid[jr][ic];
                    std::swap(grid[jr][ic], grid[ir][ic]);
                    irow[other] = static_cast<std::uint8_t>(ir);
                    irow[number] = static_cast<std::uint8_t>(jr);
                    entry = -entry;
                }
                out[i * d + j] = static_cast<std::int8_t>(entry);
            }
        }
        return out;
    }

private:
    Partition lambda_;
    std::vector<Tableau> tableaux_;
    std::size_t n_;
    std::vector<std::vector<std::uint8_t>> row_of_, col_of_;
};

inline FpMatrix to_fp(const std::vector<std::int8_t>& m, std::size_t d, std::uint32_t p)
{
    FpMatrix out(p, d, d);
    for (std::size_t i = 0; i < d * d; ++i)
        out.set(i / d, i % d, m[i]);
    return out;
}

/// Normalized representation matrices rho(pi) = R_id^{-1} R_pi, memoized.
class RepMatrixCache {
public:
    RepMatrixCache(const Partition& lambda, std::uint32_t p)
        : table_(lambda), p_(checked_prime(p))
    {
        if (p_ <= table_.degree())
            throw ConfigError("prime must exceed the degree");
        try {
            rid_inverse_ = qjd::inverse(to_fp(table_.clifton(identity_perm(table_.degree())), dim(), p_));
        } catch (const DomainError&) {
            throw ConfigError("Clifton matrix of the identity is singular mod p; the prime is too small");
        }
    }

    std::size_t dim() const noexcept { return table_.dim(); }
    const CliftonTable& table() const noexcept { return table_; }

    const FpMatrix& rep_matrix(const Perm& pi)
    {
        std::string key(pi.begin(), pi.end());
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        FpMatrix m = multiply(rid_inverse_, to_fp(table_.clifton(pi), dim(), p_));
        return memo_.emplace(std::move(key), std::move(m)).first->second;
    }

private:
    CliftonTable table_;
    std::uint32_t p_;
    FpMatrix rid_inverse_;
    std::unordered_map<std::string, FpMatrix> memo_;
};

// ---------------------------------------------------------------------------
// Per-partition ranks

struct PartitionRanks {
    Partition lambda;
    std::size_t d = 0;
    std::size_t old_rows = 0, old_cols = 0, old_rank = 0;
    std::size_t all_rows = 0, all_cols = 0, all_rank = 0;
    std::size_t symmetry_rank = 0;   ///< rank of the symmetries alone
    std::vector<std::size_t> trace;  ///< old rank after each lifted generator

    std::size_t new_count() const { return all_rank - old_rank; }
};

namespace detail {

inline std::unordered_map<std::string, std::size_t> rc_shape_index(std::size_t n)
{
    std::unordered_map<std::string, std::size_t> out;
    for (const auto& t : rc_types(n))
        out.emplace(t.shape, t.index);
    return out;
}

// acc (d x d, int64) += c * R
inline void accumulate(std::vector<std::int64_t>& acc, const std::vector<std::int8_t>& r, std::int64_t c)
{
    for (std::size_t i = 0; i < r.size(); ++i)
        acc[i] += c * r[i];
}

} // namespace detail

/// Rank of the lifted identities in partition lambda.
///
/// Rows of a generator are [R(x_1) ... R(x_t)] with unnormalized Clifton
/// matrices: left multiplication of a whole block row by R_id^{-1} does not
/// change its row space.  The symmetries of type k only touch block k, so each
/// block is reduced modulo the symmetry row space Q_k and only the free
/// columns of Q_k are kept.
inline PartitionRanks old_rank_partition(std::size_t n, const Partition& lambda, const std::vector<Generator>& gens,
                                         std::uint32_t p, bool reversed_tableaux = false)
{
    checked_prime(p);
    if (p <= n)
        throw ConfigError("prime must exceed the degree");
    CliftonTable table(lambda, reversed_tableaux);
    if (table.degree() != n)
        throw DomainError("partition " + to_string(lambda) + " is not a partition of " + std::to_string(n));
    const std::size_t d = table.dim();
    const auto& types = rc_types(n);
    const std::size_t t = types.size();
    const auto shape_index = detail::rc_shape_index(n);

    PartitionRanks out;
    out.lambda = lambda;
    out.d = d;
    out.old_rows = (t + 1) * d;
    out.old_cols = t * d;

    const auto rid = table.clifton(identity_perm(n));
    std::vector<RowReducer> q;
    std::vector<std::vector<std::size_t>> free_cols(t);
    std::vector<std::size_t> offset(t + 1, 0);
    std::size_t q_rank = 0;
    for (std::size_t k = 0; k < t; ++k) {
        q.emplace_back(p, d);
        const std::string basic = types[k].basic().code;
        for (const auto& s : types[k].symmetries) {
            auto rs = table.clifton(perm_of_word(word(swap_at(basic, s.node))));
            FpMatrix block(p, d, d);
            for (std::size_t i = 0; i < d * d; ++i)
                block.set(i / d, i % d, static_cast<std::int64_t>(rid[i]) - rs[i]);
            q[k].append(block);
        }
        q_rank += q[k].rank();
        std::vector<char> pivot(d, 0);
        for (auto c : q[k].pivot_columns())
            pivot[c] = 1;
        for (std::size_t c = 0; c < d; ++c)
            if (!pivot[c])
                free_cols[k].push_back(c);
        offset[k + 1] = offset[k] + free_cols[k].size();
    }

    out.symmetry_rank = q_rank;
    RowReducer main(p, offset[t]);
    for (const auto& g : gens) {
        std::map<std::size_t, std::vector<std::int64_t>> blocks;
        for (const auto& [m, c] : g.poly) {
            auto it = shape_index.find(shape(m.code));
            if (it == shape_index.end())
                throw DomainError("generator term " + to_string(m) + " is not of a canonical type");
            auto& acc = blocks[it->second];
            if (acc.empty())
                acc.assign(d * d, 0);
            detail::accumulate(acc, table.clifton(perm_of_word(word(m.code))), c);
        }
        FpMatrix rows(p, d, offset[t]);
        std::vector<Residue> brow(d);
        for (const auto& [k, acc] : blocks) {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t c = 0; c < d; ++c)
                    brow[c] = reduce_mod(acc[i * d + c], p);
                auto red = q[k].rank() ? q[k].reduce(brow) : brow;
                auto dst = rows.row_data(i);
                for (std::size_t f = 0; f < free_cols[k].size(); ++f)
                    dst[offset[k] + f] = red[free_cols[k][f]];
            }
        }
        main.append(rows);
        out.trace.push_back(q_rank + main.rank());
    }
    out.old_rank = q_rank + main.rank();
    return out;
}

/// Rank of all identities in partition lambda: t d minus the rank of the left
/// side of X_lambda (blocks of expansion terms grouped by center).
inline std::size_t all_rank_partition(std::size_t n, const Partition& lambda, std::uint32_t p,
                                      bool reversed_tableaux = false)
{
    checked_prime(p);
    if (p <= n)
        throw ConfigError("prime must exceed the degree");
    CliftonTable table(lambda, reversed_tableaux);
    if (table.degree() != n)
        throw DomainError("partition " + to_string(lambda) + " is not a partition of " + std::to_string(n));
    const std::size_t d = table.dim();
    const auto& types = rc_types(n);
    RowReducer left(p, n * d);
    for (const auto& type : types) {
        std::vector<std::int64_t> acc(d * n * d, 0);
        for (const auto& pat : expansion_patterns(type.shape)) {
            Perm pi(pat.leaf.begin(), pat.leaf.end());
            auto r = table.clifton(pi);
            const std::size_t j = pat.center - 1;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    acc[a * n * d + j * d + b] += r[a * d + b];
        }
        FpMatrix rows(p, d, n * d);
        for (std::size_t i = 0; i < acc.size(); ++i)
            rows.set(i / (n * d), i % (n * d), acc[i]);
        left.append(rows);
    }
    return types.size() * d - left.rank();
}

/// Both ranks for one partition, in the table's row/column conventions.
inline PartitionRanks partition_ranks(std::size_t n, const Partition& lambda, const std::vector<Generator>& gens,
                                      std::uint32_t p, bool reversed_tableaux = false)
{
    PartitionRanks r = old_rank_partition(n, lambda, gens, p, reversed_tableaux);
    const std::size_t t = rc_types(n).size();
    r.all_rows = t * r.d;
    r.all_cols = (n + t) * r.d;
    r.all_rank = all_rank_partition(n, lambda, p, reversed_tableaux);
    return r;
}

// ---------------------------------------------------------------------------
// Reference constructions (normalized matrices, no quotient); slow, used to
// cross-check the fast routes in low degree.

inline std::size_t old_rank_partition_reference(std::size_t n, const Partition& lambda,
                                                const std::vector<Generator>& gens, std::uint32_t p)
{
    RepMatrixCache cache(lambda, p);
    const std::size_t d = cache.dim();
    const auto& types = rc_types(n);
    const std::size_t t = types.size();
    const auto shape_index = detail::rc_shape_index(n);
    RowReducer m(p, t * d);
    auto add_block = [&](FpMatrix& rows, std::size_t k, const FpMatrix& b, std::int64_t c) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                rows.add(i, k * d + j, c * b.at(i, j));
    };
    for (std::size_t k = 0; k < t; ++k) {
        const std::string basic = types[k].basic().code;
        for (const auto& s : types[k].symmetries) {
            FpMatrix rows(p, d, t * d);
            add_block(rows, k, cache.rep_matrix(identity_perm(n)), 1);
            add_block(rows, k, cache.rep_matrix(perm_of_word(word(swap_at(basic, s.node)))), -1);
            m.append(rows);
        }
    }
    for (const auto& g : gens) {
        FpMatrix rows(p, d, t * d);
        for (const auto& [mono, c] : g.poly)
            add_block(rows, shape_index.at(shape(mono.code)), cache.rep_matrix(perm_of_word(word(mono.code))), c);
        m.append(rows);
    }
    return m.rank();
}

/// Builds the full X_lambda with -I blocks and counts RCF rows whose leading
/// one lies in the right side.
inline std::size_t all_rank_partition_reference(std::size_t n, const Partition& lambda, std::uint32_t p)
{
    RepMatrixCache cache(lambda, p);
    const std::size_t d = cache.dim();
    const auto& types = rc_types(n);
    const std::size_t t = types.size();
    FpMatrix x(p, t * d, (n + t) * d);
    for (std::size_t i = 0; i < t; ++i) {
        for (const auto& pat : expansion_patterns(types[i].shape)) {
            const FpMatrix& r = cache.rep_matrix(Perm(pat.leaf.begin(), pat.leaf.end()));
            const std::size_t j = pat.center - 1;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    x.add(i * d + a, j * d + b, r.at(a, b));
        }
        for (std::size_t a = 0; a < d; ++a)
            x.set(i * d + a, (n + i) * d + a, -1);
    }
    RcfResult r = rcf(x);
    std::size_t count = 0;
    for (auto c : r.pivots)
        count += c >= n * d;
    return count;
}

// ---------------------------------------------------------------------------
// Generator chain and tables

/// Runs f(i) for i < count on up to `threads` workers; f must write only to
/// its own slot.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

using ProgressFn = std::function<void(const std::string&)>;

struct ChainOptions {
    std::uint32_t p = 101;
    unsigned threads = 1;
    ProgressFn progress;
};

/// Generators retained in degree n (4 <= n <= 7).  Degrees up to 6 use the
/// direct pipeline; degree 7 keeps a lifting when it raises the rank in at
/// least one partition.
inline std::vector<Generator> retained_generators(std::size_t n, const ChainOptions& opt);

/// Lifted generators of degree n: J and K for n = 4, otherwise the liftings of
/// the generators retained in degree n-1.
inline std::vector<Generator> lifted_generators(std::size_t n, const ChainOptions& opt)
{
    if (n < 4 || n > 8)
        throw DomainError("generator chain covers degrees 4 to 8");
    if (n == 4)
        return degree4_generators();
    return lift_all(retained_generators(n - 1, opt));
}

inline std::vector<std::size_t> retained_by_partitions(std::size_t n, const std::vector<Generator>& gens,
                                                       const ChainOptions& opt)
{
    auto parts = partitions(static_cast<int>(n));
    std::vector<PartitionRanks> results(parts.size());
    std::mutex progress_mutex;
    parallel_for(parts.size(), opt.threads, [&](std::size_t i) {
        results[i] = old_rank_partition(n, parts[i], gens, opt.p);
        if (opt.progress) {
            std::lock_guard lock(progress_mutex);
            opt.progress("retention degree " + std::to_string(n) + " partition " + to_string(parts[i]) +
                         " rank " + std::to_string(results[i].old_rank));
        }
    });
    std::vector<char> keep(gens.size(), 0);
    for (const auto& r : results) {
        std::size_t prev = r.symmetry_rank;
        for (std::size_t g = 0; g < r.trace.size(); ++g) {
            if (r.trace[g] > prev)
                keep[g] = 1;
            prev = r.trace[g];
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < gens.size(); ++g)
        if (keep[g])
            out.push_back(g + 1);
    return out;
}

inline std::vector<Generator> retained_generators(std::size_t n, const ChainOptions& opt)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::uint32_t>, std::vector<Generator>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find({n, opt.p}); it != cache.end())
            return it->second;
    }
    if (n < 4 || n > 7)
        throw DomainError("retention is computed for degrees 4 to 7");
    std::vector<Generator> gens = lifted_generators(n, opt);
    std::vector<std::size_t> keep;
    if (n <= 6)
        keep = lifting_trace(gens, n, opt.p).retained;
    else
        keep = retained_by_partitions(n, gens, opt);
    std::vector<Generator> out = select(gens, keep);
    if (opt.progress)
        opt.progress("degree " + std::to_string(n) + ": " + std::to_string(out.size()) + " of " +
                     std::to_string(gens.size()) + " generators retained");
    std::lock_guard lock(mutex);
    cache[{n, opt.p}] = out;
    return out;
}

/// Table of per-partition ranks for degree n, optionally restricted to some partitions.
inline std::vector<PartitionRanks> rank_table(std::size_t n, const ChainOptions& opt,
                                              const std::vector<Partition>& filter = {})
{
    if (n < 4 || n > 8)
        throw DomainError("rank tables cover degrees 4 to 8");
    if (opt.p <= n)
        throw ConfigError("prime must exceed the degree");
    std::vector<Generator> gens = lifted_generators(n, opt);
    std::vector<Partition> parts;
    for (const auto& lambda : partitions(static_cast<int>(n)))
        if (filter.empty() || std::find(filter.begin(), filter.end(), lambda) != filter.end())
            parts.push_back(lambda);
    for (const auto& f : filter)
        if (std::find(parts.begin(), parts.end(), f) == parts.end())
            throw DomainError("unknown partition " + to_string(f) + " of " + std::to_string(n));
    std::vector<PartitionRanks> out(parts.size());
    std::mutex progress_mutex;
    parallel_for(parts.size(), opt.threads, [&](std::size_t i) {
        out[i] = partition_ranks(n, parts[i], gens, opt.p);
        if (opt.progress) {
            std::lock_guard lock(progress_mutex);
            opt.progress("partition " + to_string(parts[i]) + ": old " + std::to_string(out[i].old_rank) + " all " +
                         std::to_string(out[i].all_rank));
        }
    });
    return out;
}

} // namespace qjd
