#pragma once

// Elements of a forest module as formal combinations of generators.
//
// The normal form has an antichain support (no generator together with one of
// its ancestors) and unit coefficients reduced modulo the order of their
// generator. Equality is decided on coordinates in the realization, never on
// the normal form alone.

#include "walker/error.hpp"
#include "walker/linalg.hpp"
#include "walker/module.hpp"
#include "walker/presentation.hpp"

#include <map>
#include <memory>
#include <string>

namespace walker {

class Element {
  public:
    using Terms = std::map<std::size_t, BigInt>;

    Element(std::shared_ptr<const ForestPresentation> pres, Terms terms)
        : pres_(std::move(pres)), terms_(std::move(terms)) {}

    [[nodiscard]] const ForestPresentation& presentation() const { return *pres_; }
    [[nodiscard]] const std::shared_ptr<const ForestPresentation>&
    presentation_ptr() const noexcept {
        return pres_;
    }
    /// Generator index -> coefficient.
    [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
    [[nodiscard]] std::map<std::string, BigInt> terms_by_id() const {
        std::map<std::string, BigInt> out;
        for (const auto& [g, c] : terms_)
            out.emplace(pres_->id(g), c);
        return out;
    }
    [[nodiscard]] bool is_syntactically_zero() const noexcept {
        return terms_.empty();
    }

    friend bool operator==(const Element& a, const Element& b) {
        return (a.pres_ == b.pres_ || *a.pres_ == *b.pres_) && a.terms_ == b.terms_;
    }

  private:
    std::shared_ptr<const ForestPresentation> pres_;
    Terms terms_;
};

namespace detail {

inline BigInt big_pow(std::uint64_t p, unsigned k) {
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i)
        r *= p;
    return r;
}

inline BigInt mod_nonneg(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0)
        r += m;
    return r;
}

inline void check_same(const Element& x, const Element& y) {
    if (x.presentation_ptr() != y.presentation_ptr() &&
        !(x.presentation() == y.presentation()))
        throw Error(Errc::presentation_mismatch,
                    "elements of different presentations");
}

} // namespace detail

/// Rewrites raw coefficients to antichain-unit normal form.
inline Element normalize(std::shared_ptr<const ForestPresentation> pres,
                         Element::Terms raw) {
    const ForestPresentation& F = *pres;
    const std::uint64_t p = F.p();
    for (const auto& [g, c] : raw)
        if (g >= F.size())
            throw Error(Errc::unknown_generator,
                        "generator index " + std::to_string(g));

    // (a) + (b): reduce modulo the generator order and push multiples of p to
    // ancestors, deepest generators first
    std::map<std::pair<std::size_t, std::size_t>, BigInt, std::greater<>> work;
    for (const auto& [g, c] : raw)
        work[{F.depth(g), g}] += c;
    Element::Terms terms;
    while (!work.empty()) {
        auto it = work.begin();
        const std::size_t g = it->first.second;
        BigInt c = detail::mod_nonneg(it->second,
                                      detail::big_pow(p, F.order_exponent(g)));
        work.erase(it);
        if (c == 0)
            continue;
        unsigned k = 0;
        while (c % p == 0) {
            c /= p;
            ++k;
        }
        if (k == 0) {
            terms.emplace(g, c);
            continue;
        }
        const std::size_t a = *F.ancestor(g, k); // k <= depth(g) after reduction
        work[{F.depth(a), a}] += c;
    }

    // (c): fold each ancestor into its deepest (then lexicographically least)
    // descendant in the support
    std::map<std::size_t, std::size_t> target;
    for (const auto& [t, c] : terms) {
        auto cur = F.parent(t);
        while (cur) {
            if (terms.count(*cur)) {
                auto [pos, fresh] = target.emplace(*cur, t);
                if (!fresh) {
                    const std::size_t old = pos->second;
                    if (F.depth(t) > F.depth(old) ||
                        (F.depth(t) == F.depth(old) && F.id(t) < F.id(old)))
                        pos->second = t;
                }
            }
            cur = F.parent(*cur);
        }
    }
    for (const auto& [s, t] : target) {
        const BigInt u = terms.at(s);
        const auto shift = static_cast<unsigned>(F.depth(t) - F.depth(s));
        BigInt& ct = terms.at(t);
        ct = detail::mod_nonneg(ct + u * detail::big_pow(p, shift),
                                detail::big_pow(p, F.order_exponent(t)));
    }
    for (const auto& [s, t] : target)
        terms.erase(s);
    return Element(std::move(pres), std::move(terms));
}

inline Element normalize(std::shared_ptr<const ForestPresentation> pres,
                         const std::map<std::string, BigInt>& raw) {
    Element::Terms idx;
    for (const auto& [id, c] : raw)
        idx[pres->index_of(id)] += c;
    return normalize(std::move(pres), std::move(idx));
}

inline Element generator_element(std::shared_ptr<const ForestPresentation> pres,
                                 std::size_t g) {
    return normalize(std::move(pres), Element::Terms{{g, BigInt(1)}});
}

inline Element add(const Element& x, const Element& y) {
    detail::check_same(x, y);
    Element::Terms raw = x.terms();
    for (const auto& [g, c] : y.terms())
        raw[g] += c;
    return normalize(x.presentation_ptr(), std::move(raw));
}

inline Element scalar_mul(const BigInt& c, const Element& x) {
    Element::Terms raw;
    for (const auto& [g, v] : x.terms())
        raw.emplace(g, v * c);
    return normalize(x.presentation_ptr(), std::move(raw));
}

inline Element negate(const Element& x) { return scalar_mul(BigInt(-1), x); }

namespace detail {
inline void check_realization(const FiniteModule& G, const ForestPresentation& F) {
    if (!G.has_generators() || G.generator_count() != F.size() || G.p() != F.p())
        throw Error(Errc::presentation_mismatch,
                    "module is not the realization of this presentation");
}
} // namespace detail

/// Coordinates of x in the realization G of its presentation.
inline Coords to_coords(const FiniteModule& G, const Element& x) {
    detail::check_realization(G, x.presentation());
    Coords c = G.zero();
    for (const auto& [g, v] : x.terms())
        c = G.add(c, G.scale(G.generator_coords(g), v));
    return c;
}

/// The element with the given coordinates, in normal form.
inline Element from_coords(std::shared_ptr<const ForestPresentation> pres,
                           const FiniteModule& G, const Coords& c) {
    detail::check_realization(G, *pres);
    const Coords x = G.normalize(c);
    Element::Terms raw;
    const auto& back = G.generators().from_coords;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0)
            continue;
        for (std::size_t g = 0; g < back[k].size(); ++g)
            if (back[k][g] != 0)
                raw[g] += BigInt(back[k][g]) * x[k];
    }
    return normalize(std::move(pres), std::move(raw));
}

inline bool is_zero(const FiniteModule& G, const Element& x) {
    return G.is_zero(to_coords(G, x));
}

inline bool eq(const FiniteModule& G, const Element& x, const Element& y) {
    return is_zero(G, add(x, negate(y)));
}

inline std::string format_element(const Element& x) {
    if (x.terms().empty())
        return "0";
    std::string out;
    for (const auto& [id, c] : x.terms_by_id()) {
        if (!out.empty())
            out += " + ";
        out += c.str() + "*" + id;
    }
    return out;
}

/// Submodule of G generated by elements of its presentation.
inline Submodule span_elements(const FiniteModule& G,
                               const std::vector<Element>& gens) {
    std::vector<Coords> coords;
    for (const auto& e : gens)
        coords.push_back(to_coords(G, e));
    return Submodule(G, coords);
}

/// Submodule of G generated by the named generators.
inline Submodule span_generators(const FiniteModule& G,
                                 const std::vector<std::size_t>& gens) {
    std::vector<Coords> coords;
    for (auto g : gens)
        coords.push_back(G.generator_coords(g));
    return Submodule(G, coords);
}

} // namespace walker
