#pragma once

// Proper elements, nice / isotypic / balanced submodules, and short exact
// sequences of finite modules.
//
// Every predicate quantifies over sigma < cutoff; cutoffs are clamped at
// length(G) + 1, where all filtrations of G, N and G/N have reached 0. Passing
// w therefore means "all sigma".

#include "walker/filtration.hpp"
#include "walker/module.hpp"
#include "walker/ordinal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace walker {

/// 0 -> N -> B -> B/N -> 0.
class ShortExactSequence {
  public:
    explicit ShortExactSequence(Submodule kernel)
        : kernel_(std::move(kernel)), quotient_(quotient(kernel_)),
          projection_(quotient_.projection_map(kernel_.ambient())) {
        if (kernel_.log_order() + quotient_.module.log_order() !=
            middle().log_order())
            throw Error(Errc::invalid_presentation,
                        "order accounting |B| = |N||C| failed");
    }

    [[nodiscard]] const FiniteModule& middle() const noexcept {
        return kernel_.ambient();
    }
    [[nodiscard]] const Submodule& kernel() const noexcept { return kernel_; }
    [[nodiscard]] const FiniteModule& cokernel() const noexcept {
        return quotient_.module;
    }
    [[nodiscard]] const LinearMap& projection() const noexcept {
        return projection_;
    }
    [[nodiscard]] Coords project(const Coords& b) const {
        return projection_.apply(b);
    }
    /// Some preimage of c in B.
    [[nodiscard]] Coords lift_coset(const Coords& c) const {
        const FiniteModule& B = middle();
        const Coords x = cokernel().normalize(c);
        Coords b = B.zero();
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0)
                b = B.add(b, B.scale(quotient_.section[j], x[j]));
        return b;
    }

  private:
    Submodule kernel_;
    Quotient quotient_;
    LinearMap projection_;
};

/// Outcome of a filtration predicate: the first failing sigma and an element
/// of B witnessing the failure.
struct CheckResult {
    bool holds = true;
    std::optional<unsigned> sigma;
    std::optional<Coords> witness;

    explicit operator bool() const noexcept { return holds; }

    [[nodiscard]] std::string describe() const {
        if (holds)
            return "holds";
        std::string s = "fails at sigma=" + std::to_string(*sigma);
        if (witness)
            s += " witness=" + format_coords(*witness);
        return s;
    }
};

/// x is proper with respect to N: x is not in p^(h(x)+1) G + N. An element of
/// infinite height is 0 here, which lies in N.
inline bool is_proper(const Submodule& N, const Coords& x) {
    const FiniteModule& G = N.ambient();
    const Height h = height(G, x);
    if (h.is_infinite())
        return N.contains(x);
    const unsigned s = static_cast<unsigned>(*h.value().to_natural());
    return !sum(p_sigma(G, s + 1), N).contains(x);
}

namespace detail {

inline CheckResult failure(unsigned sigma, Coords witness) {
    return CheckResult{false, sigma, std::move(witness)};
}

/// First generator of `big` outside `small`, if any.
inline std::optional<Coords> escapee(const Submodule& big, const Submodule& small) {
    for (const auto& g : big.generators())
        if (!small.contains(g))
            return g;
    return std::nullopt;
}

inline std::optional<Coords> nice_failure_at(const ShortExactSequence& seq,
                                             unsigned s) {
    const Submodule lhs = p_sigma(seq.cokernel(), s);
    const Submodule rhs = seq.projection().image(p_sigma(seq.middle(), s));
    if (auto w = escapee(lhs, rhs))
        return seq.lift_coset(*w);
    if (auto w = escapee(rhs, lhs))
        return seq.lift_coset(*w);
    return std::nullopt;
}

inline std::optional<Coords> isotypic_failure_at(const Submodule& N, unsigned s) {
    const Submodule meet = intersection(p_sigma(N.ambient(), s), N);
    return escapee(meet, p_sigma(N, Ordinal::natural(s)));
}

} // namespace detail

/// p^sigma (G/N) = (p^sigma G + N) / N for sigma below the cutoff.
inline CheckResult check_nice(const ShortExactSequence& seq, const Ordinal& cutoff) {
    const unsigned bound = effective_cutoff(seq.middle(), cutoff);
    for (unsigned s = 0; s < bound; ++s)
        if (auto w = detail::nice_failure_at(seq, s))
            return detail::failure(s, *w);
    return {};
}

/// p^sigma G and N = p^sigma N for sigma below the cutoff.
inline CheckResult check_isotypic(const Submodule& N, const Ordinal& cutoff) {
    const unsigned bound = effective_cutoff(N.ambient(), cutoff);
    for (unsigned s = 0; s < bound; ++s)
        if (auto w = detail::isotypic_failure_at(N, s))
            return detail::failure(s, *w);
    return {};
}

/// Isotypic and nice below the cutoff.
inline CheckResult check_balanced(const ShortExactSequence& seq,
                                  const Ordinal& cutoff) {
    const unsigned bound = effective_cutoff(seq.middle(), cutoff);
    for (unsigned s = 0; s < bound; ++s) {
        if (auto w = detail::isotypic_failure_at(seq.kernel(), s))
            return detail::failure(s, *w);
        if (auto w = detail::nice_failure_at(seq, s))
            return detail::failure(s, *w);
    }
    return {};
}

/// (p^sigma G[p] + N)/N = p^sigma(G/N)[p] for every sigma below a limit
/// cutoff. Equivalent to balancedness.
inline CheckResult check_balanced_criterion(const ShortExactSequence& seq,
                                            const Ordinal& cutoff) {
    if (!cutoff.is_limit())
        throw Error(Errc::not_limit_ordinal,
                    "limit ordinal required, got " + cutoff.to_string());
    const FiniteModule& B = seq.middle();
    const FiniteModule& C = seq.cokernel();
    const unsigned bound = effective_cutoff(B, cutoff);
    const Submodule socle_b = torsion_part(B, 1);
    const Submodule socle_c = torsion_part(C, 1);
    for (unsigned s = 0; s < bound; ++s) {
        const Submodule lhs =
            seq.projection().image(intersection(p_sigma(B, s), socle_b));
        const Submodule rhs = intersection(p_sigma(C, s), socle_c);
        if (auto w = detail::escapee(rhs, lhs))
            return detail::failure(s, seq.lift_coset(*w));
        if (auto w = detail::escapee(lhs, rhs))
            return detail::failure(s, seq.lift_coset(*w));
    }
    return {};
}

inline bool is_lambda_nice(const Submodule& N, const Ordinal& cutoff) {
    return check_nice(ShortExactSequence(N), cutoff).holds;
}

inline bool is_lambda_isotypic(const Submodule& N, const Ordinal& cutoff) {
    return check_isotypic(N, cutoff).holds;
}

inline bool is_lambda_balanced(const Submodule& N, const Ordinal& cutoff) {
    return check_balanced(ShortExactSequence(N), cutoff).holds;
}

inline bool balanced_criterion(const Submodule& N, const Ordinal& cutoff) {
    return check_balanced_criterion(ShortExactSequence(N), cutoff).holds;
}

} // namespace walker
