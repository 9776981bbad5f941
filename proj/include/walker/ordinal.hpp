#pragma once

// Ordinals below epsilon_0 in Cantor normal form.
//
// An ordinal is a finite list of terms w^e * c with strictly decreasing
// exponents e (themselves ordinals) and coefficients c >= 1. The empty list is
// zero. Text form:
//
//   ordinal := term ("+" term)*
//   term    := "w^" atom "*" nat | "w^" atom | "w*" nat | "w" | nat
//   atom    := nat | "w" | "(" ordinal ")"
//
// Whitespace is ignored on input. Output is canonical: terms joined by " + ".

#include "walker/error.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace walker {

struct CnfTerm;

class Ordinal {
  public:
    Ordinal() = default;

    static Ordinal natural(std::uint64_t n);
    static Ordinal omega();
    /// w^exponent * coefficient; coefficient 0 yields zero.
    static Ordinal omega_power(const Ordinal& exponent,
                               std::uint64_t coefficient = 1);
    static Ordinal parse(std::string_view text);

    [[nodiscard]] const std::vector<CnfTerm>& terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] bool is_finite() const;
    [[nodiscard]] bool is_limit() const;
    [[nodiscard]] bool is_successor() const { return !is_zero() && !is_limit(); }
    [[nodiscard]] std::optional<std::uint64_t> to_natural() const;
    [[nodiscard]] Ordinal successor() const;
    [[nodiscard]] std::string to_string() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b);

  private:
    std::vector<CnfTerm> terms_;

    friend Ordinal add(const Ordinal& a, const Ordinal& b);
    friend Ordinal left_sub(const Ordinal& a, const Ordinal& b);
};

struct CnfTerm {
    Ordinal exponent;
    std::uint64_t coefficient = 1;
};

inline bool operator==(const CnfTerm& a, const CnfTerm& b) {
    return a.coefficient == b.coefficient && a.exponent == b.exponent;
}

enum class Comparison { less, equal, greater };

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const auto n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (auto c = x.exponent <=> y.exponent; c != 0)
            return c;
        if (auto c = x.coefficient <=> y.coefficient; c != 0)
            return c;
    }
    return a.terms_.size() <=> b.terms_.size();
}

inline bool operator==(const Ordinal& a, const Ordinal& b) {
    return a.terms_ == b.terms_;
}

inline Comparison cmp(const Ordinal& a, const Ordinal& b) {
    const auto c = a <=> b;
    if (c < 0)
        return Comparison::less;
    if (c > 0)
        return Comparison::greater;
    return Comparison::equal;
}

inline Ordinal Ordinal::natural(std::uint64_t n) {
    Ordinal r;
    if (n != 0)
        r.terms_.push_back(CnfTerm{Ordinal{}, n});
    return r;
}

inline Ordinal Ordinal::omega() { return omega_power(natural(1)); }

inline Ordinal Ordinal::omega_power(const Ordinal& exponent,
                                    std::uint64_t coefficient) {
    Ordinal r;
    if (coefficient != 0)
        r.terms_.push_back(CnfTerm{exponent, coefficient});
    return r;
}

inline bool Ordinal::is_finite() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.front().exponent.is_zero());
}

inline bool Ordinal::is_limit() const {
    return !terms_.empty() && !terms_.back().exponent.is_zero();
}

inline std::optional<std::uint64_t> Ordinal::to_natural() const {
    if (!is_finite())
        return std::nullopt;
    return terms_.empty() ? 0 : terms_.front().coefficient;
}

/// Ordinal sum. Terms of `a` below the leading exponent of `b` are absorbed.
inline Ordinal add(const Ordinal& a, const Ordinal& b) {
    if (b.terms_.empty())
        return a;
    const Ordinal& lead = b.terms_.front().exponent;
    Ordinal r;
    std::size_t i = 0;
    for (; i < a.terms_.size() && a.terms_[i].exponent > lead; ++i)
        r.terms_.push_back(a.terms_[i]);
    auto rest = b.terms_.begin();
    if (i < a.terms_.size() && a.terms_[i].exponent == lead) {
        r.terms_.push_back(
            CnfTerm{lead, a.terms_[i].coefficient + rest->coefficient});
        ++rest;
    }
    r.terms_.insert(r.terms_.end(), rest, b.terms_.end());
    return r;
}

/// The unique g with a + g = b. Throws Underflow when a > b.
inline Ordinal left_sub(const Ordinal& a, const Ordinal& b) {
    if (a > b)
        throw Error(Errc::underflow,
                    a.to_string() + " exceeds " + b.to_string());
    Ordinal r;
    std::size_t i = 0;
    while (i < a.terms_.size() && i < b.terms_.size() &&
           a.terms_[i] == b.terms_[i])
        ++i;
    if (i == b.terms_.size())
        return r;
    auto rest = b.terms_.begin() + static_cast<std::ptrdiff_t>(i);
    if (i < a.terms_.size() && a.terms_[i].exponent == rest->exponent) {
        // a <= b forces the smaller coefficient on a's side here
        r.terms_.push_back(CnfTerm{rest->exponent,
                                   rest->coefficient - a.terms_[i].coefficient});
        ++rest;
    }
    r.terms_.insert(r.terms_.end(), rest, b.terms_.end());
    return r;
}

inline Ordinal Ordinal::successor() const { return add(*this, natural(1)); }

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }

namespace detail {

inline std::string ordinal_atom(const Ordinal& e) {
    if (e.is_finite())
        return e.to_string();
    if (e == Ordinal::omega())
        return "w";
    return "(" + e.to_string() + ")";
}

class OrdinalParser {
  public:
    explicit OrdinalParser(std::string_view text) : text_(text) {}

    Ordinal parse_all() {
        Ordinal r = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return r;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::parse_error, "ordinal '" + std::string(text_) +
                                           "' at position " +
                                           std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool peek_digit() {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
    }

    std::uint64_t parse_nat() {
        if (!peek_digit())
            fail("expected a natural number");
        std::uint64_t n = 0;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
            const auto d = static_cast<std::uint64_t>(text_[pos_] - '0');
            if (n > (UINT64_MAX - d) / 10)
                fail("natural number overflows 64 bits");
            n = n * 10 + d;
            ++pos_;
        }
        return n;
    }

    Ordinal parse_sum() {
        Ordinal r = parse_term();
        while (accept('+'))
            r = add(r, parse_term());
        return r;
    }

    Ordinal parse_atom() {
        if (accept('('))
        {
            Ordinal r = parse_sum();
            if (!accept(')'))
                fail("expected ')'");
            return r;
        }
        if (accept('w'))
            return Ordinal::omega();
        return Ordinal::natural(parse_nat());
    }

    Ordinal parse_term() {
        if (peek_digit())
            return Ordinal::natural(parse_nat());
        if (!accept('w'))
            fail("expected 'w' or a natural number");
        Ordinal exponent = Ordinal::natural(1);
        if (accept('^'))
            exponent = parse_atom();
        std::uint64_t coefficient = 1;
        if (accept('*')) {
            coefficient = parse_nat();
            if (coefficient == 0)
                fail("coefficient must be positive");
        }
        return Ordinal::omega_power(exponent, coefficient);
    }
};

} // namespace detail

inline Ordinal Ordinal::parse(std::string_view text) {
    return detail::OrdinalParser(text).parse_all();
}

inline std::string Ordinal::to_string() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty())
            out += " + ";
        if (t.exponent.is_zero()) {
            out += std::to_string(t.coefficient);
            continue;
        }
        out += "w";
        if (t.exponent != natural(1))
            out += "^" + detail::ordinal_atom(t.exponent);
        if (t.coefficient != 1)
            out += "*" + std::to_string(t.coefficient);
    }
    return out;
}

} // namespace walker
