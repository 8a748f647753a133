#pragma once

// Sparse integer linear combinations keyed by monomials.

#include "qjd/error.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <string>

namespace qjd {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw DomainError("integer overflow in coefficient arithmetic");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw DomainError("integer overflow in coefficient arithmetic");
    return r;
}

/// Map from keys to nonzero int64 coefficients, iterated in key order.
template <class Key>
class LinearCombination {
public:
    using Map = std::map<Key, std::int64_t>;

    LinearCombination() = default;

    void add(const Key& key, std::int64_t coef)
    {
        if (coef == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(key, coef);
        if (!inserted) {
            it->second = checked_add(it->second, coef);
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    LinearCombination& operator+=(const LinearCombination& other)
    {
        for (const auto& [k, c] : other.terms_)
            add(k, c);
        return *this;
    }

    LinearCombination& operator-=(const LinearCombination& other)
    {
        for (const auto& [k, c] : other.terms_)
            add(k, -c);
        return *this;
    }

    friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
    friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }

    LinearCombination scaled(std::int64_t s) const
    {
        LinearCombination out;
        if (s == 0)
            return out;
        for (const auto& [k, c] : terms_)
            out.terms_.emplace(k, checked_mul(c, s));
        return out;
    }

    std::int64_t coefficient(const Key& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? 0 : it->second;
    }

    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    const Map& terms() const noexcept { return terms_; }

    std::int64_t content_gcd() const
    {
        std::int64_t g = 0;
        for (const auto& [k, c] : terms_)
            g = std::gcd(g, c);
        return g;
    }

    /// Divides by the gcd of the coefficients and makes the first coefficient positive.
    LinearCombination normalized() const
    {
        if (terms_.empty())
            return *this;
        std::int64_t g = content_gcd();
        if (terms_.begin()->second < 0)
            g = -g;
        LinearCombination out;
        for (const auto& [k, c] : terms_)
            out.terms_.emplace(k, c / g);
        return out;
    }

    /// True when `other` equals s * this for one nonzero rational s.
    bool proportional_to(const LinearCombination& other) const
    {
        if (size() != other.size() || empty())
            return size() == other.size();
        auto a = normalized(), b = other.normalized();
        return a == b || a == b.scaled(-1);
    }

    bool operator==(const LinearCombination&) const = default;

private:
    Map terms_;
};

} // namespace qjd
