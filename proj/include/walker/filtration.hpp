#pragma once

// The p-power filtration p^sigma G of a finite module and what is read off it:
// heights, socles, length, Ulm-Kaplansky invariants and the closure of a
// submodule below a cutoff.
//
// A finite module is reduced, so the filtration reaches 0 at sigma = length(G)
// and stays there; every infinite sigma is clamped to that stable value.

#include "walker/elements.hpp"
#include "walker/module.hpp"
#include "walker/ordinal.hpp"
#include "walker/presentation.hpp"

#include <map>
#include <optional>
#include <string>

namespace walker {

/// Height of an element: an ordinal, or infinity for elements in every
/// p^sigma G.
class Height {
  public:
    static Height infinity() { return Height(); }
    static Height finite(Ordinal value) { return Height(std::move(value)); }

    [[nodiscard]] bool is_infinite() const noexcept { return !value_; }
    [[nodiscard]] const Ordinal& value() const { return value_.value(); }
    [[nodiscard]] std::string to_string() const {
        return value_ ? value_->to_string() : "inf";
    }

    friend bool operator==(const Height&, const Height&) = default;
    friend std::strong_ordering operator<=>(const Height& a, const Height& b) {
        if (a.is_infinite() || b.is_infinite())
            return a.is_infinite() <=> b.is_infinite();
        return *a.value_ <=> *b.value_;
    }

  private:
    Height() = default;
    explicit Height(Ordinal v) : value_(std::move(v)) {}
    std::optional<Ordinal> value_;
};

namespace detail {

/// Least n with p^n N = 0, i.e. the largest cyclic exponent in N.
inline unsigned submodule_length(const Submodule& N) {
    const auto& ring = N.basis().ring();
    unsigned n = 0;
    for (const auto& row : N.basis().rows())
        for (auto v : row)
            if (v != 0)
                n = std::max(n, ring.exponent() - ring.valuation(v));
    return n;
}

} // namespace detail

/// Least n with p^(n+1) G = p^n G.
inline unsigned length(const FiniteModule& G) {
    Submodule cur = Submodule::whole(G);
    for (unsigned n = 0;; ++n) {
        Submodule next = scale(cur, 1);
        if (next == cur)
            return n;
        cur = std::move(next);
    }
}

inline Ordinal length_ordinal(const FiniteModule& G) {
    return Ordinal::natural(length(G));
}

/// min(cutoff, length(G) + 1) as a natural number: the indices sigma that a
/// predicate quantified over sigma < cutoff has to inspect.
inline unsigned effective_cutoff(const FiniteModule& G, const Ordinal& cutoff) {
    const unsigned stable = length(G) + 1;
    if (auto n = cutoff.to_natural())
        return static_cast<unsigned>(std::min<std::uint64_t>(*n, stable));
    return stable;
}

/// p^sigma N for a submodule N (N = G gives the filtration of G).
inline Submodule p_sigma(const Submodule& N, const Ordinal& sigma) {
    const unsigned len = detail::submodule_length(N);
    const auto n = sigma.to_natural();
    if (!n || *n >= len)
        return Submodule::zero(N.ambient());
    return scale(N, static_cast<unsigned>(*n));
}

inline Submodule p_sigma(const FiniteModule& G, const Ordinal& sigma) {
    return p_sigma(Submodule::whole(G), sigma);
}

inline Submodule p_sigma(const FiniteModule& G, unsigned sigma) {
    return p_sigma(G, Ordinal::natural(sigma));
}

/// The least sigma with x in p^sigma G but not in p^(sigma+1) G.
inline Height height(const FiniteModule& G, const Coords& x) {
    const Coords c = G.normalize(x);
    if (G.is_zero(c))
        return Height::infinity();
    Submodule layer = Submodule::whole(G);
    for (unsigned s = 0;; ++s) {
        layer = scale(layer, 1);
        if (!layer.contains(c))
            return Height::finite(Ordinal::natural(s));
    }
}

/// Closed-form height of a Walker generator: its last label.
inline Ordinal generator_height(const WalkerPresentation& P, std::string_view gid) {
    return P.last_label(P.forest().index_of(gid));
}

/// Height of a normal form in P_beta read off its support: the least last
/// label among its generators. Checked against height() on the realization for
/// every finite beta <= 5 in the tests; use height() when in doubt.
inline Height antichain_height(const WalkerPresentation& P, const Element& x) {
    if (!(x.presentation() == P.forest()))
        throw Error(Errc::presentation_mismatch, "element is not over this P_beta");
    std::optional<Ordinal> best;
    for (const auto& [g, c] : x.terms())
        if (!best || P.last_label(g) < *best)
            best = P.last_label(g);
    return best ? Height::finite(*best) : Height::infinity();
}

/// G[p^n], the elements killed by p^n.
inline Submodule torsion_part(const FiniteModule& G, unsigned n) {
    std::vector<Coords> gens;
    for (std::size_t i = 0; i < G.rank(); ++i) {
        const unsigned e = G.exponents()[i];
        gens.push_back(G.scale(G.unit(i), G.ring().power(e > n ? e - n : 0)));
    }
    return Submodule(G, gens);
}

/// N[p^n].
inline Submodule torsion_part(const Submodule& N, unsigned n) {
    return intersection(N, torsion_part(N.ambient(), n));
}

struct UlmProfile {
    std::uint64_t p = 2;
    std::map<Ordinal, unsigned> values;
};

/// f_sigma = dim (p^sigma G)[p] / (p^(sigma+1) G)[p] for sigma < length(G).
inline UlmProfile ulm_invariants(const FiniteModule& G) {
    UlmProfile out{G.p(), {}};
    const unsigned len = length(G);
    Submodule layer = Submodule::whole(G);
    unsigned socle = torsion_part(layer, 1).log_order();
    for (unsigned s = 0; s < len; ++s) {
        Submodule next = scale(layer, 1);
        const unsigned next_socle = torsion_part(next, 1).log_order();
        out.values.emplace(Ordinal::natural(s), socle - next_socle);
        layer = std::move(next);
        socle = next_socle;
    }
    return out;
}

/// sum over sigma of f_sigma * (sigma + 1), which must equal log_p |G|.
inline std::uint64_t ulm_mass(const UlmProfile& u) {
    std::uint64_t m = 0;
    for (const auto& [sigma, f] : u.values)
        m += static_cast<std::uint64_t>(f) * (sigma.to_natural().value() + 1);
    return m;
}

/// "sigma: f" per line, then the mass check.
inline std::string format_ulm_report(const UlmProfile& u, const FiniteModule& G) {
    std::string out;
    for (const auto& [sigma, f] : u.values)
        out += sigma.to_string() + ": " + std::to_string(f) + "\n";
    const auto mass = ulm_mass(u);
    out += "mass: " + std::to_string(mass) + " = log_p|G| " +
           std::to_string(G.log_order()) +
           (mass == G.log_order() ? " OK" : " MISMATCH") + "\n";
    return out;
}

/// One-line form "0:1 1:0 2:1".
inline std::string format_ulm_inline(const UlmProfile& u) {
    std::string out;
    for (const auto& [sigma, f] : u.values) {
        if (!out.empty())
            out += " ";
        out += sigma.to_string() + ":" + std::to_string(f);
    }
    return out;
}

/// Intersection of p^sigma G + N over sigma < min(cutoff, length(G) + 1).
inline Submodule closure(const Submodule& N, const Ordinal& cutoff) {
    const FiniteModule& G = N.ambient();
    const unsigned bound = effective_cutoff(G, cutoff);
    Submodule acc = Submodule::whole(G);
    for (unsigned s = 0; s < bound; ++s)
        acc = intersection(acc, sum(p_sigma(G, s), N));
    return acc;
}

} // namespace walker
