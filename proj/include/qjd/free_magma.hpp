#pragma once

// Free nonassociative monomials, commutative and right-commutative association
// types, straightening, and the FRC bases.
//
// A monomial is stored as its preorder code: '*' for a product node followed by
// its two subtrees, a letter for a leaf.  "((ab)c)d" is "***abcd".  A shape is
// the same code with every letter replaced by '.'.

#include "qjd/error.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qjd {

constexpr std::size_t kDefaultMaxDegree = 8;

struct Monomial {
    std::string code;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return std::hash<std::string>{}(m.code); }
};

inline Monomial leaf(char letter) { return Monomial{std::string(1, letter)}; }

inline Monomial product(const Monomial& u, const Monomial& v) { return Monomial{"*" + u.code + v.code}; }

/// Index one past the subtree of `code` that starts at `pos`.
inline std::size_t subtree_end(std::string_view code, std::size_t pos)
{
    std::size_t need = 1;
    while (need > 0) {
        if (pos >= code.size())
            throw DomainError("truncated monomial code");
        need += code[pos++] == '*' ? 1 : -1;
    }
    return pos;
}

inline bool is_leaf(std::string_view code) { return code.size() == 1; }

/// The two children of a product code.
inline std::pair<std::string_view, std::string_view> split(std::string_view code)
{
    std::size_t mid = subtree_end(code, 1);
    return {code.substr(1, mid - 1), code.substr(mid)};
}

inline std::size_t degree(std::string_view code)
{
    return static_cast<std::size_t>(std::count_if(code.begin(), code.end(), [](char c) { return c != '*'; }));
}
inline std::size_t degree(const Monomial& m) { return degree(m.code); }

inline std::string word(std::string_view code)
{
    std::string w;
    for (char c : code)
        if (c != '*')
            w.push_back(c);
    return w;
}
inline std::string word(const Monomial& m) { return word(m.code); }

inline std::string shape(std::string_view code)
{
    std::string s(code);
    for (char& c : s)
        if (c != '*')
            c = '.';
    return s;
}

/// Places the letters of `w` at the leaves of `shape_code`, left to right.
inline std::string fill_shape(std::string_view shape_code, std::string_view w)
{
    std::string out(shape_code);
    std::size_t k = 0;
    for (char& c : out)
        if (c != '*')
            c = w[k++];
    return out;
}

inline std::string basic_word(std::size_t n)
{
    std::string w;
    for (std::size_t i = 0; i < n; ++i)
        w.push_back(static_cast<char>('a' + i));
    return w;
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

inline void print_code(std::string_view code, std::string& out, bool outer)
{
    if (is_leaf(code)) {
        out.push_back(code[0]);
        return;
    }
    auto [u, v] = split(code);
    if (!outer)
        out.push_back('(');
    print_code(u, out, false);
    print_code(v, out, false);
    if (!outer)
        out.push_back(')');
}

struct MonomialParser {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t depth = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos); }

    std::string item()
    {
        if (pos >= text.size())
            fail(depth ? "unbalanced parentheses" : "unexpected end of monomial");
        char c = text[pos];
        if (c >= 'a' && c <= 'z') {
            ++pos;
            return std::string(1, c);
        }
        if (c != '(')
            fail(std::string("unexpected character '") + c + "'");
        ++pos;
        ++depth;
        std::string left = item();
        std::string right = item();
        if (pos >= text.size())
            fail("unbalanced parentheses");
        if (text[pos] != ')')
            fail(std::string("expected ')' but found '") + text[pos] + "'");
        ++pos;
        --depth;
        return "*" + left + right;
    }
};

} // namespace detail

inline std::string to_string(const Monomial& m)
{
    std::string out;
    detail::print_code(m.code, out, true);
    return out;
}

/// Parses `monomial := letter | "(" monomial monomial ")"`; the outermost pair of
/// parentheses may be omitted.
inline Monomial parse_monomial(std::string_view text)
{
    detail::MonomialParser p{text};
    if (text.empty())
        throw ParseError("empty monomial", 0);
    std::vector<std::string> items;
    while (p.pos < text.size()) {
        if (text[p.pos] == ')')
            p.fail("unbalanced parentheses");
        items.push_back(p.item());
    }
    if (items.size() == 1)
        return Monomial{items[0]};
    if (items.size() == 2)
        return Monomial{"*" + items[0] + items[1]};
    throw ParseError("more than two top-level factors", 0);
}

// ---------------------------------------------------------------------------
// Orders on shapes

/// Order on canonical commutative shapes: degree ascending, then for w = uv
/// (deg v, u, v) lexicographically.  Letters are ignored.
inline int compare_comm_shape(std::string_view x, std::string_view y)
{
    std::size_t dx = degree(x), dy = degree(y);
    if (dx != dy)
        return dx < dy ? -1 : 1;
    if (is_leaf(x))
        return 0;
    auto [xu, xv] = split(x);
    auto [yu, yv] = split(y);
    std::size_t ex = degree(xv), ey = degree(yv);
    if (ex != ey)
        return ex < ey ? -1 : 1;
    if (int c = compare_comm_shape(xu, yu))
        return c;
    return compare_comm_shape(xv, yv);
}

/// Order on right-commutative shapes w = uv: (deg v, u as rc, v as comm).
inline int compare_rc_shape(std::string_view x, std::string_view y)
{
    std::size_t dx = degree(x), dy = degree(y);
    if (dx != dy)
        return dx < dy ? -1 : 1;
    if (is_leaf(x))
        return 0;
    auto [xu, xv] = split(x);
    auto [yu, yv] = split(y);
    std::size_t ex = degree(xv), ey = degree(yv);
    if (ex != ey)
        return ex < ey ? -1 : 1;
    if (int c = compare_rc_shape(xu, yu))
        return c;
    return compare_comm_shape(xv, yv);
}

/// Child order inside commutative subtrees: degree descending, shape, leaf word.
inline bool comm_child_before(std::string_view x, std::string_view y)
{
    std::size_t dx = degree(x), dy = degree(y);
    if (dx != dy)
        return dx > dy;
    if (int c = compare_comm_shape(x, y))
        return c < 0;
    return word(x) < word(y);
}

// ---------------------------------------------------------------------------
// Canonical forms

inline std::string comm_canonical_code(std::string_view code)
{
    if (is_leaf(code))
        return std::string(code);
    auto [u, v] = split(code);
    std::string cu = comm_canonical_code(u), cv = comm_canonical_code(v);
    if (comm_child_before(cv, cu))
        std::swap(cu, cv);
    return "*" + cu + cv;
}

inline std::string straighten_code(std::string_view code)
{
    if (is_leaf(code))
        return std::string(code);
    auto [u, v] = split(code);
    return "*" + straighten_code(u) + comm_canonical_code(v);
}

/// Canonical representative of the right-commutativity class of m.
inline Monomial straighten(const Monomial& m) { return Monomial{straighten_code(m.code)}; }

/// Canonical representative under full commutativity (children sorted everywhere).
inline Monomial comm_canonical(const Monomial& m) { return Monomial{comm_canonical_code(m.code)}; }

// ---------------------------------------------------------------------------
// Association types

enum class TypeKind { comm, rc };

struct Symmetry {
    std::size_t node;       ///< preorder position of the node in the shape code
    std::size_t left_leaf;  ///< leaf index where the left child starts
    std::size_t right_leaf; ///< leaf index where the right child starts
    std::size_t leaves;     ///< leaf count of each child
};

struct AssociationType {
    std::string shape;  ///< shape code, '.' leaves
    TypeKind kind = TypeKind::rc;
    std::size_t index = 0; ///< 0-based position in the enumeration
    std::vector<Symmetry> symmetries;

    std::size_t degree() const { return qjd::degree(shape); }
    Monomial basic() const { return Monomial{fill_shape(shape, basic_word(degree()))}; }
};

namespace detail {

inline std::size_t leaves_before(std::string_view code, std::size_t pos)
{
    return degree(code.substr(0, pos));
}

inline void comm_symmetries(std::string_view code, std::size_t pos, std::vector<Symmetry>& out)
{
    if (code[pos] != '*')
        return;
    std::size_t mid = subtree_end(code, pos + 1);
    std::size_t end = subtree_end(code, mid);
    comm_symmetries(code, pos + 1, out);
    comm_symmetries(code, mid, out);
    std::string_view x = code.substr(pos + 1, mid - pos - 1), y = code.substr(mid, end - mid);
    if (shape(x) == shape(y))
        out.push_back({pos, leaves_before(code, pos + 1), leaves_before(code, mid), degree(x)});
}

inline void rc_symmetries(std::string_view code, std::size_t pos, std::vector<Symmetry>& out)
{
    if (code[pos] != '*')
        return;
    std::size_t mid = subtree_end(code, pos + 1);
    rc_symmetries(code, pos + 1, out);
    comm_symmetries(code, mid, out);
}

inline std::mutex& type_cache_mutex()
{
    static std::mutex m;
    return m;
}

inline std::map<std::size_t, std::vector<AssociationType>>& comm_cache()
{
    static std::map<std::size_t, std::vector<AssociationType>> c;
    return c;
}

inline std::map<std::size_t, std::vector<AssociationType>>& rc_cache()
{
    static std::map<std::size_t, std::vector<AssociationType>> c;
    return c;
}

inline const std::vector<AssociationType>& comm_types_locked(std::size_t n);

inline const std::vector<AssociationType>& comm_types_locked(std::size_t n)
{
    auto& cache = comm_cache();
    if (auto it = cache.find(n); it != cache.end())
        return it->second;
    std::vector<AssociationType> out;
    if (n == 1) {
        out.push_back({".", TypeKind::comm, 0, {}});
    } else {
        for (std::size_t i = 1; i <= n / 2; ++i) {
            const auto& us = comm_types_locked(n - i);
            const auto& vs = comm_types_locked(i);
            for (const auto& u : us)
                for (const auto& v : vs) {
                    if (n - i == i && u.index > v.index)
                        continue;
                    AssociationType t{"*" + u.shape + v.shape, TypeKind::comm, out.size(), {}};
                    comm_symmetries(t.shape, 0, t.symmetries);
                    out.push_back(std::move(t));
                }
        }
    }
    return cache.emplace(n, std::move(out)).first->second;
}

inline const std::vector<AssociationType>& rc_types_locked(std::size_t n)
{
    auto& cache = rc_cache();
    if (auto it = cache.find(n); it != cache.end())
        return it->second;
    std::vector<AssociationType> out;
    if (n == 1) {
        out.push_back({".", TypeKind::rc, 0, {}});
    } else {
        for (std::size_t i = 1; i < n; ++i) {
            const auto& us = rc_types_locked(n - i);
            const auto& vs = comm_types_locked(i);
            for (const auto& u : us)
                for (const auto& v : vs) {
                    AssociationType t{"*" + u.shape + v.shape, TypeKind::rc, out.size(), {}};
                    rc_symmetries(t.shape, 0, t.symmetries);
                    out.push_back(std::move(t));
                }
        }
    }
    return cache.emplace(n, std::move(out)).first->second;
}

} // namespace detail

/// Commutative association types of degree n in canonical order.
inline const std::vector<AssociationType>& comm_types(std::size_t n)
{
    if (n == 0)
        throw DomainError("degree must be at least 1");
    std::lock_guard lock(detail::type_cache_mutex());
    return detail::comm_types_locked(n);
}

/// Right-commutative association types of degree n in canonical order, with symmetries.
inline const std::vector<AssociationType>& rc_types(std::size_t n)
{
    if (n == 0)
        throw DomainError("degree must be at least 1");
    std::lock_guard lock(detail::type_cache_mutex());
    return detail::rc_types_locked(n);
}

/// Symmetries of a right-commutative shape, in discovery order.
inline std::vector<Symmetry> symmetries_of(std::string_view rc_shape)
{
    std::vector<Symmetry> out;
    detail::rc_symmetries(rc_shape, 0, out);
    return out;
}

/// Swaps the two children of the node at preorder position `node`.
inline std::string swap_at(std::string_view code, std::size_t node)
{
    std::size_t mid = subtree_end(code, node + 1);
    std::size_t end = subtree_end(code, mid);
    std::string out(code.substr(0, node + 1));
    out.append(code.substr(mid, end - mid));
    out.append(code.substr(node + 1, mid - node - 1));
    out.append(code.substr(end));
    return out;
}

struct TypeCounts {
    std::uint64_t comm = 0;  ///< C_n
    std::uint64_t rc = 0;    ///< R_n
    std::uint64_t all = 0;   ///< K_n, the Catalan count of binary shapes
};

inline TypeCounts count_types(std::size_t n)
{
    if (n == 0)
        throw DomainError("degree must be at least 1");
    std::vector<std::uint64_t> c(n + 1, 0), r(n + 1, 0);
    c[1] = r[1] = 1;
    for (std::size_t m = 2; m <= n; ++m) {
        for (std::size_t i = 1; 2 * i < m; ++i)
            c[m] += c[m - i] * c[i];
        if (m % 2 == 0)
            c[m] += c[m / 2] * (c[m / 2] + 1) / 2;
        for (std::size_t i = 1; i < m; ++i)
            r[m] += r[m - i] * c[i];
    }
    // K_n = binom(2n-2, n-1) / n
    std::uint64_t k = 1;
    for (std::size_t i = 1; i < n; ++i)
        k = k * (n - 1 + i) / i;
    return {c[n], r[n], k / n};
}

inline std::uint64_t factorial(std::size_t n)
{
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i)
        f *= i;
    return f;
}

/// dim FRC_n from the type list: the sum of n!/2^s over right-commutative types.
inline std::uint64_t frc_dim(std::size_t n)
{
    std::uint64_t total = 0;
    for (const auto& t : rc_types(n))
        total += factorial(n) >> t.symmetries.size();
    return total;
}

/// n (2n-2)! / (2^(n-1) (n-1)!) = n (2n-3)!!
inline std::uint64_t frc_dim_conjecture(std::size_t n)
{
    if (n == 0)
        throw DomainError("degree must be at least 1");
    std::uint64_t v = n;
    for (std::uint64_t k = 1; k + 2 <= 2 * n - 1; k += 2)
        v *= k;
    return v;
}

// ---------------------------------------------------------------------------
// Bases

using PackedWord = std::uint64_t;

inline PackedWord pack_word(std::string_view w)
{
    PackedWord x = 0;
    for (char c : w)
        x = (x << 5) | static_cast<PackedWord>(c - 'a');
    return x;
}

inline std::string unpack_word(PackedWord x, std::size_t n)
{
    std::string w(n, 'a');
    for (std::size_t i = n; i-- > 0;) {
        w[i] = static_cast<char>('a' + (x & 31));
        x >>= 5;
    }
    return w;
}

/// A word is canonical for an rc type when, at every symmetry, the left factor's
/// leaves are lexicographically no larger than the right factor's.
inline bool is_canonical_word(const AssociationType& t, std::string_view w)
{
    for (const auto& s : t.symmetries)
        if (w.substr(s.right_leaf, s.leaves) < w.substr(s.left_leaf, s.leaves))
            return false;
    return true;
}

inline void check_degree_guard(std::size_t n, bool allow_large)
{
    if (n > kDefaultMaxDegree && !allow_large)
        throw ResourceError("degree " + std::to_string(n) + " exceeds the default limit of " +
                            std::to_string(kDefaultMaxDegree) + " (override to proceed)");
}

/// Ordered basis of canonical right-commutative monomials with a fixed leaf
/// multiset: type-major, then leaf word lexicographically.
class FrcBasis {
public:
    /// Multilinear basis of FRC_n on the letters a, b, ...
    static FrcBasis multilinear(std::size_t n, bool allow_large = false)
    {
        if (n == 0)
            throw DomainError("degree must be at least 1");
        return FrcBasis(basic_word(n), allow_large);
    }

    /// Basis for an arbitrary content such as "aaaabbbc".
    static FrcBasis with_content(std::string content, bool allow_large = false)
    {
        if (content.empty())
            throw DomainError("empty content");
        for (char c : content)
            if (c < 'a' || c > 'z')
                throw DomainError("content letters must be a-z");
        std::sort(content.begin(), content.end());
        return FrcBasis(std::move(content), allow_large);
    }

    std::size_t size() const noexcept { return offsets_.back(); }
    std::size_t degree() const noexcept { return content_.size(); }
    const std::string& content() const noexcept { return content_; }
    const std::vector<AssociationType>& types() const { return rc_types(degree()); }
    std::size_t type_count() const noexcept { return words_.size(); }
    std::size_t type_offset(std::size_t k) const { return offsets_[k]; }
    std::size_t type_size(std::size_t k) const { return words_[k].size(); }

    std::optional<std::size_t> type_of_shape(const std::string& shape_code) const
    {
        auto it = shape_index_.find(shape_code);
        if (it == shape_index_.end())
            return std::nullopt;
        return it->second;
    }

    /// Type index of the basis element at `index`.
    std::size_t type_at(std::size_t index) const
    {
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
        return static_cast<std::size_t>(it - offsets_.begin()) - 1;
    }

    std::string word_at(std::size_t index) const
    {
        std::size_t k = type_at(index);
        return unpack_word(words_[k][index - offsets_[k]], degree());
    }

    Monomial monomial(std::size_t index) const
    {
        std::size_t k = type_at(index);
        return Monomial{fill_shape(types()[k].shape, unpack_word(words_[k][index - offsets_[k]], degree()))};
    }

    /// Index of a canonical monomial; absent when it is not a basis element.
    std::optional<std::size_t> index_of(const Monomial& m) const
    {
        auto k = type_of_shape(shape(m.code));
        if (!k)
            return std::nullopt;
        return index_of(*k, word(m.code));
    }

    std::optional<std::size_t> index_of(std::size_t type, std::string_view w) const
    {
        if (w.size() != degree())
            return std::nullopt;
        const auto& ws = words_[type];
        PackedWord x = pack_word(w);
        auto it = std::lower_bound(ws.begin(), ws.end(), x);
        if (it == ws.end() || *it != x)
            return std::nullopt;
        return offsets_[type] + static_cast<std::size_t>(it - ws.begin());
    }

private:
    FrcBasis(std::string content, bool allow_large) : content_(std::move(content))
    {
        const std::size_t n = content_.size();
        check_degree_guard(n, allow_large);
        const auto& ts = rc_types(n);
        offsets_.push_back(0);
        for (const auto& t : ts) {
            std::vector<PackedWord> ws;
            std::string w = content_;
            do {
                if (is_canonical_word(t, w))
                    ws.push_back(pack_word(w));
            } while (std::next_permutation(w.begin(), w.end()));
            offsets_.push_back(offsets_.back() + ws.size());
            words_.push_back(std::move(ws));
            shape_index_.emplace(t.shape, t.index);
        }
    }

    std::string content_;
    std::vector<std::vector<PackedWord>> words_;
    std::vector<std::size_t> offsets_;
    std::unordered_map<std::string, std::size_t> shape_index_;
};

inline FrcBasis frc_basis(std::size_t n, bool allow_large = false) { return FrcBasis::multilinear(n, allow_large); }

inline FrcBasis nonlinear_basis(std::string content, bool allow_large = false)
{
    return FrcBasis::with_content(std::move(content), allow_large);
}

} // namespace qjd
