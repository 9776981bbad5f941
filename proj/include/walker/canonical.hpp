#pragma once

// The finite analogue of the canonical presentation of P_n:
// T = sum over beta < n of one copy of P_beta per morphism P_beta -> P_n, with
// the evaluation map phi: T -> P_n and K = ker phi.
//
// For finite n the images of P_beta (beta < n) have exponent at most n, so phi
// lands in P_n[p^n] and the sequence is 0 -> K -> T -> P_n[p^n] -> 0.

#include "walker/error.hpp"
#include "walker/filtration.hpp"
#include "walker/homlift.hpp"
#include "walker/module.hpp"
#include "walker/presentation.hpp"
#include "walker/purity.hpp"

#include <memory>
#include <string>
#include <vector>

namespace walker {

struct CanonicalBlock {
    unsigned beta = 0;
    std::size_t copies = 0;
};

struct CanonicalPresentation {
    unsigned n;
    std::uint64_t p;
    std::vector<CanonicalBlock> blocks;
    WalkerPresentation target;
    FiniteModule target_module;
    std::shared_ptr<const ForestPresentation> total;
    FiniteModule total_module;
    LinearMap phi;
    Submodule kernel;
    ShortExactSequence sequence;

    /// "P_0^4 + P_1^8".
    [[nodiscard]] std::string decomposition() const {
        std::string out;
        for (const auto& b : blocks) {
            if (!out.empty())
                out += " + ";
            out += "P_" + std::to_string(b.beta) + "^" + std::to_string(b.copies);
        }
        return out.empty() ? "0" : out;
    }
    /// phi(T), which should be P_n[p^n].
    [[nodiscard]] Submodule image() const { return phi.image(); }
    [[nodiscard]] Submodule reachable() const { return torsion_part(target_module, n); }
};

inline CanonicalPresentation canonical_presentation(unsigned n, std::uint64_t p,
                                                    bool allow_large = false,
                                                    std::uint64_t hom_bound = kDefaultHomBound) {
    if (n > 3 || (n == 3 && !allow_large))
        throw Error(Errc::resource_limit,
                    "canonical presentation for n=" + std::to_string(n) +
                        (n == 3 ? " needs --allow-large" : " is out of range"));
    WalkerPresentation target = p_beta(Ordinal::natural(n), p);
    FiniteModule target_module = realize(target.forest());

    std::vector<CanonicalBlock> blocks;
    std::vector<Generator> gens;
    std::vector<Coords> values; // phi on each generator of T
    for (unsigned beta = 0; beta < n; ++beta) {
        const WalkerPresentation P = p_beta(Ordinal::natural(beta), p);
        const auto homs = hom_set(P.forest_ptr(), target_module, hom_bound);
        blocks.push_back({beta, homs.size()});
        for (std::size_t k = 0; k < homs.size(); ++k) {
            const std::size_t offset = gens.size();
            const std::string prefix =
                "P_" + std::to_string(beta) + "[" + std::to_string(k) + "]:";
            for (std::size_t g = 0; g < P.size(); ++g) {
                Generator gen = P.forest().generator(g);
                gen.id = prefix + gen.id;
                if (gen.parent)
                    *gen.parent += offset;
                gens.push_back(std::move(gen));
                values.push_back(homs[k].image(g));
            }
        }
    }
    auto total = std::make_shared<const ForestPresentation>(p, std::move(gens));
    FiniteModule total_module = realize(*total);
    Morphism eval(total, target_module, std::move(values));
    LinearMap phi = eval.on_realization(total_module);
    Submodule kernel = phi.kernel();
    ShortExactSequence seq(kernel);
    return CanonicalPresentation{n,
                                 p,
                                 std::move(blocks),
                                 std::move(target),
                                 std::move(target_module),
                                 std::move(total),
                                 std::move(total_module),
                                 std::move(phi),
                                 kernel,
                                 std::move(seq)};
}

} // namespace walker
