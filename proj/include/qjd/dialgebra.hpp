#pragma once

// The free associative dialgebra: two-operation terms, normal forms (word plus
// center), products of normal forms, and the FD bases.

#include "qjd/error.hpp"
#include "qjd/free_magma.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qjd {

enum class DiOp : char { left = '<', right = '>' };  // left is a -| b, right is a |- b

/// Normal form a_1 ... a_{k-1} ^a_k a_{k+1} ... a_n; center is 1-based.
struct DiMonomial {
    std::string word;
    std::size_t center = 1;

    auto operator<=>(const DiMonomial& o) const
    {
        if (auto c = center <=> o.center; c != 0)
            return c;
        return word <=> o.word;
    }
    bool operator==(const DiMonomial&) const = default;
};

inline std::string to_string(const DiMonomial& m)
{
    std::string out = m.word.substr(0, m.center - 1);
    out.push_back('^');
    out.append(m.word.substr(m.center - 1));
    return out;
}

/// Parses `letter* "^" letter letter*`.
inline DiMonomial parse_dimonomial(std::string_view text)
{
    std::size_t caret = text.find('^');
    if (caret == std::string_view::npos)
        throw ParseError("missing '^'", 0);
    std::string w;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i == caret)
            continue;
        char c = text[i];
        if (c < 'a' || c > 'z')
            throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    w = std::string(text.substr(0, caret)) + std::string(text.substr(caret + 1));
    if (caret + 1 >= text.size())
        throw ParseError("'^' must precede a letter", caret);
    return DiMonomial{w, caret + 1};
}

inline DiMonomial di_product(const DiMonomial& u, DiOp op, const DiMonomial& v)
{
    return DiMonomial{u.word + v.word, op == DiOp::left ? u.center : u.word.size() + v.center};
}

/// A dialgebra term in preorder: '<' for -|, '>' for |-, letters for leaves.
struct DiTerm {
    std::string code;
    bool operator==(const DiTerm&) const = default;
};

namespace detail {

inline bool is_op(char c) { return c == '<' || c == '>'; }

inline std::size_t di_subtree_end(std::string_view code, std::size_t pos)
{
    std::size_t need = 1;
    while (need > 0) {
        if (pos >= code.size())
            throw DomainError("truncated dialgebra term");
        need += is_op(code[pos++]) ? 1 : -1;
    }
    return pos;
}

// Returns (center position 0-based within the subtree, leaf count).
inline std::pair<std::size_t, std::size_t> di_center(std::string_view code, std::size_t& pos)
{
    char c = code[pos++];
    if (!is_op(c))
        return {0, 1};
    auto [lc, ln] = di_center(code, pos);
    auto [rc, rn] = di_center(code, pos);
    return {c == '<' ? lc : ln + rc, ln + rn};
}

inline void print_diterm(std::string_view code, std::size_t& pos, std::string& out)
{
    char c = code[pos++];
    if (!is_op(c)) {
        out.push_back(c);
        return;
    }
    out.push_back('(');
    print_diterm(code, pos, out);
    out.append(c == '<' ? "-|" : "|-");
    print_diterm(code, pos, out);
    out.push_back(')');
}

struct DiTermParser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos); }

    std::string term()
    {
        if (pos >= text.size())
            fail("unexpected end of term");
        char c = text[pos];
        if (c >= 'a' && c <= 'z') {
            ++pos;
            return std::string(1, c);
        }
        if (c != '(')
            fail(std::string("unexpected character '") + c + "'");
        ++pos;
        std::string left = term();
        char op = operator_symbol();
        std::string right = term();
        if (pos >= text.size() || text[pos] != ')')
            fail("expected ')'");
        ++pos;
        return std::string(1, op) + left + right;
    }

    char operator_symbol()
    {
        std::string_view rest = text.substr(pos);
        if (rest.starts_with("-|")) {
            pos += 2;
            return '<';
        }
        if (rest.starts_with("|-")) {
            pos += 2;
            return '>';
        }
        fail("expected '-|' or '|-'");
    }
};

} // namespace detail

inline DiTerm di_leaf(char letter) { return DiTerm{std::string(1, letter)}; }

inline DiTerm di_node(DiOp op, const DiTerm& u, const DiTerm& v)
{
    return DiTerm{std::string(1, static_cast<char>(op)) + u.code + v.code};
}

inline std::string to_string(const DiTerm& t)
{
    std::string out;
    std::size_t pos = 0;
    detail::print_diterm(t.code, pos, out);
    return out;
}

/// Parses `diterm := letter | "(" diterm ("-|" | "|-") diterm ")"`.
inline DiTerm parse_diterm(std::string_view text)
{
    detail::DiTermParser p{text};
    std::string code = p.term();
    if (p.pos != text.size())
        p.fail("trailing characters");
    return DiTerm{code};
}

inline std::string di_word(const DiTerm& t)
{
    std::string w;
    for (char c : t.code)
        if (!detail::is_op(c))
            w.push_back(c);
    return w;
}

/// 1-based leaf position of the center.
inline std::size_t center(const DiTerm& t)
{
    std::size_t pos = 0;
    return detail::di_center(t.code, pos).first + 1;
}

inline DiMonomial normal_form(const DiTerm& t) { return DiMonomial{di_word(t), center(t)}; }

/// Ordered basis of normal forms with a fixed content: center-major, then the
/// distinct words in lexicographic order.
class FdBasis {
public:
    static FdBasis multilinear(std::size_t n, bool allow_large = false)
    {
        if (n == 0)
            throw DomainError("degree must be at least 1");
        return FdBasis(basic_word(n), allow_large);
    }

    static FdBasis with_content(std::string content, bool allow_large = false)
    {
        if (content.empty())
            throw DomainError("empty content");
        for (char c : content)
            if (c < 'a' || c > 'z')
                throw DomainError("content letters must be a-z");
        std::sort(content.begin(), content.end());
        return FdBasis(std::move(content), allow_large);
    }

    std::size_t degree() const noexcept { return content_.size(); }
    std::size_t words() const noexcept { return words_.size(); }
    std::size_t size() const noexcept { return degree() * words_.size(); }
    const std::string& content() const noexcept { return content_; }

    DiMonomial monomial(std::size_t index) const
    {
        return DiMonomial{unpack_word(words_[index % words_.size()], degree()), index / words_.size() + 1};
    }

    std::optional<std::size_t> index_of(const DiMonomial& m) const
    {
        if (m.word.size() != degree() || m.center < 1 || m.center > degree())
            return std::nullopt;
        auto w = word_index(pack_word(m.word));
        if (!w)
            return std::nullopt;
        return (m.center - 1) * words_.size() + *w;
    }

    std::optional<std::size_t> word_index(PackedWord x) const
    {
        auto it = std::lower_bound(words_.begin(), words_.end(), x);
        if (it == words_.end() || *it != x)
            return std::nullopt;
        return static_cast<std::size_t>(it - words_.begin());
    }

private:
    FdBasis(std::string content, bool allow_large) : content_(std::move(content))
    {
        check_degree_guard(content_.size(), allow_large);
        std::string w = content_;
        do
            words_.push_back(pack_word(w));
        while (std::next_permutation(w.begin(), w.end()));
    }

    std::string content_;
    std::vector<PackedWord> words_;
};

inline FdBasis fd_basis(std::size_t n, bool allow_large = false) { return FdBasis::multilinear(n, allow_large); }

} // namespace qjd
