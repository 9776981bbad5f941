#pragma once

// Homomorphisms out of forest presentations, Hom-sets, the morphism
// P_beta -> G determined by a socle element of height >= beta, and lifting of
// morphisms P_beta -> B/N to B.

#include "walker/error.hpp"
#include "walker/filtration.hpp"
#include "walker/module.hpp"
#include "walker/presentation.hpp"
#include "walker/purity.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace walker {

/// A homomorphism from a forest presentation to a finite module, stored as
/// the image of every generator.
class Morphism {
  public:
    Morphism(std::shared_ptr<const ForestPresentation> source, FiniteModule target,
             std::vector<Coords> images)
        : source_(std::move(source)), target_(std::move(target)),
          images_(std::move(images)) {
        const ForestPresentation& F = *source_;
        if (images_.size() != F.size())
            throw Error(Errc::invalid_morphism,
                        std::to_string(images_.size()) + " images for " +
                            std::to_string(F.size()) + " generators");
        if (F.p() != target_.p())
            throw Error(Errc::shape_mismatch, "source and target over different p");
        for (auto& x : images_)
            x = target_.normalize(x);
        for (std::size_t g = 0; g < F.size(); ++g) {
            const Coords px = target_.scale(images_[g], static_cast<std::int64_t>(F.p()));
            const auto parent = F.parent(g);
            const bool ok = parent ? px == images_[*parent] : target_.is_zero(px);
            if (!ok)
                throw Error(Errc::invalid_morphism,
                            "relation at '" + F.id(g) + "' not respected");
        }
    }

    [[nodiscard]] const ForestPresentation& source() const noexcept { return *source_; }
    [[nodiscard]] const std::shared_ptr<const ForestPresentation>& source_ptr() const noexcept {
        return source_;
    }
    [[nodiscard]] const FiniteModule& target() const noexcept { return target_; }
    [[nodiscard]] const std::vector<Coords>& images() const noexcept { return images_; }
    [[nodiscard]] const Coords& image(std::size_t g) const { return images_.at(g); }
    [[nodiscard]] const Coords& image(std::string_view id) const {
        return images_.at(source_->index_of(id));
    }

    /// The same map on the realization R of the source.
    [[nodiscard]] LinearMap on_realization(const FiniteModule& R) const {
        if (!R.has_generators() || R.generator_count() != source_->size())
            throw Error(Errc::shape_mismatch, "not a realization of the source");
        std::vector<Coords> basis;
        for (const auto& row : R.generators().from_coords) {
            Coords y = target_.zero();
            for (std::size_t g = 0; g < row.size(); ++g)
                if (row[g] != 0)
                    y = target_.add(y, target_.scale(images_[g], row[g]));
            basis.push_back(std::move(y));
        }
        return LinearMap(R, target_, std::move(basis));
    }

  private:
    std::shared_ptr<const ForestPresentation> source_;
    FiniteModule target_;
    std::vector<Coords> images_;
};

inline bool morphism_eq(const Morphism& f, const Morphism& g) {
    return (f.source_ptr() == g.source_ptr() || f.source() == g.source()) &&
           f.target().same_shape(g.target()) && f.images() == g.images();
}

inline Morphism zero_morphism(std::shared_ptr<const ForestPresentation> src,
                              const FiniteModule& H) {
    const std::size_t n = src->size();
    return Morphism(std::move(src), H, std::vector<Coords>(n, H.zero()));
}

/// The map sending each generator to itself in the realization R.
inline Morphism identity(std::shared_ptr<const ForestPresentation> src,
                         const FiniteModule& R) {
    if (R.generator_count() != src->size())
        throw Error(Errc::shape_mismatch, "not a realization of the source");
    return Morphism(std::move(src), R, R.generators().to_coords);
}

/// Post-composition with a homomorphism of finite modules.
inline Morphism compose(const Morphism& f, const LinearMap& h) {
    if (!f.target().same_shape(h.source()))
        throw Error(Errc::shape_mismatch,
                    "cannot compose into " + format_exponents(h.source().exponents()));
    std::vector<Coords> out;
    for (const auto& x : f.images())
        out.push_back(h.apply(x));
    return Morphism(f.source_ptr(), h.target(), std::move(out));
}

/// g after f, where f lands in the realization of g's source.
inline Morphism compose(const Morphism& f, const Morphism& g) {
    const FiniteModule& R = f.target();
    bool ok = R.has_generators() && R.generator_count() == g.source().size();
    for (std::size_t i = 0; ok && i < g.source().size(); ++i)
        ok = R.generators().ids[i] == g.source().id(i);
    if (!ok)
        throw Error(Errc::shape_mismatch,
                    "target of the first map is not the realization of the "
                    "source of the second");
    return compose(f, g.on_realization(R));
}

inline Morphism add(const Morphism& f, const Morphism& g) {
    if (!(f.source() == g.source()) || !f.target().same_shape(g.target()))
        throw Error(Errc::shape_mismatch, "sum of morphisms with different shapes");
    std::vector<Coords> out;
    for (std::size_t i = 0; i < f.images().size(); ++i)
        out.push_back(f.target().add(f.image(i), g.image(i)));
    return Morphism(f.source_ptr(), f.target(), std::move(out));
}

inline Morphism sub(const Morphism& f, const Morphism& g) {
    if (!(f.source() == g.source()) || !f.target().same_shape(g.target()))
        throw Error(Errc::shape_mismatch,
                    "difference of morphisms with different shapes");
    std::vector<Coords> out;
    for (std::size_t i = 0; i < f.images().size(); ++i)
        out.push_back(f.target().sub(f.image(i), g.image(i)));
    return Morphism(f.source_ptr(), f.target(), std::move(out));
}

// -- Hom-sets -----------------------------------------------------------------

inline constexpr std::uint64_t kDefaultHomBound = std::uint64_t{1} << 20;

/// log_p |Hom(F, H)| where R realizes F: the sum over cyclic factors Z/p^a of
/// R of log_p |H[p^a]|.
inline unsigned hom_log_size(const FiniteModule& R, const FiniteModule& H) {
    unsigned total = 0;
    for (unsigned a : R.exponents())
        for (unsigned e : H.exponents())
            total += std::min(a, e);
    return total;
}

inline BigInt hom_set_size(const FiniteModule& R, const FiniteModule& H) {
    BigInt n = 1;
    for (unsigned k = 0; k < hom_log_size(R, H); ++k)
        n *= H.p();
    return n;
}

namespace detail {

/// The morphism whose value on the k-th cyclic factor of R is h[k].
inline Morphism from_factor_images(std::shared_ptr<const ForestPresentation> src,
                                   const FiniteModule& R, const FiniteModule& H,
                                   const std::vector<Coords>& h) {
    std::vector<Coords> images;
    for (std::size_t g = 0; g < src->size(); ++g) {
        Coords y = H.zero();
        const Coords& c = R.generator_coords(g);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0)
                y = H.add(y, H.scale(h[k], c[k]));
        images.push_back(std::move(y));
    }
    return Morphism(std::move(src), H, std::move(images));
}

} // namespace detail

/// Every morphism F -> H, where R realizes F. A morphism is the choice of an
/// element of H[p^a] for each cyclic factor Z/p^a of R; the list runs through
/// these choices in lexicographic order.
inline std::vector<Morphism> hom_set(std::shared_ptr<const ForestPresentation> src,
                                     const FiniteModule& R, const FiniteModule& H,
                                     std::uint64_t bound = kDefaultHomBound) {
    if (R.generator_count() != src->size())
        throw Error(Errc::shape_mismatch, "not a realization of the source");
    const BigInt size = hom_set_size(R, H);
    if (size > bound)
        throw Error(Errc::too_large, "|Hom| = " + size.str() +
                                         " exceeds bound " + std::to_string(bound));
    std::vector<std::vector<Coords>> choices;
    for (unsigned a : R.exponents())
        choices.push_back(enumerate_elements(torsion_part(H, a), bound));
    std::vector<Morphism> out;
    std::vector<std::size_t> pos(choices.size(), 0);
    std::vector<Coords> h(choices.size());
    for (;;) {
        for (std::size_t k = 0; k < choices.size(); ++k)
            h[k] = choices[k][pos[k]];
        out.push_back(detail::from_factor_images(src, R, H, h));
        std::size_t k = choices.size();
        while (k > 0) {
            --k;
            if (++pos[k] < choices[k].size())
                break;
            pos[k] = 0;
            if (k == 0)
                return out;
        }
        if (choices.empty())
            return out;
    }
}

inline std::vector<Morphism> hom_set(std::shared_ptr<const ForestPresentation> src,
                                     const FiniteModule& H,
                                     std::uint64_t bound = kDefaultHomBound) {
    const FiniteModule R = realize(*src);
    return hom_set(std::move(src), R, H, bound);
}

/// Generators of Hom(F, H) as a group: one per cyclic factor of R and basis
/// element of that factor's H[p^a].
inline std::vector<Morphism> hom_generators(std::shared_ptr<const ForestPresentation> src,
                                            const FiniteModule& R,
                                            const FiniteModule& H) {
    std::vector<Morphism> out;
    for (std::size_t k = 0; k < R.rank(); ++k)
        for (const auto& y : torsion_part(H, R.exponents()[k]).generators()) {
            std::vector<Coords> h(R.rank(), H.zero());
            h[k] = y;
            out.push_back(detail::from_factor_images(src, R, H, h));
        }
    return out;
}

// -- the morphism of a socle element ----------------------------------------

/// Solves p * x = y with x in p^s G, choosing the lexicographically least x.
class Divider {
  public:
    explicit Divider(const FiniteModule& G) : module_(G), length_(length(G)) {
        for (unsigned s = 0; s <= length_; ++s) {
            const auto gens = p_sigma(G, s).generators();
            std::vector<Coords> images;
            for (const auto& g : gens)
                images.push_back(G.scale(g, static_cast<std::int64_t>(G.p())));
            solvers_.emplace_back(G, G, gens, images);
        }
    }

    [[nodiscard]] const FiniteModule& module() const noexcept { return module_; }
    [[nodiscard]] unsigned module_length() const noexcept { return length_; }

    [[nodiscard]] std::optional<Coords> divide(const Coords& y, unsigned s) const {
        return solvers_[std::min(s, length_)].solve(y);
    }

  private:
    FiniteModule module_;
    unsigned length_;
    std::vector<PreimageSolver> solvers_;
};

namespace detail {

inline unsigned finite_label(const Ordinal& o) {
    auto n = o.to_natural();
    if (!n)
        throw Error(Errc::infinite_ordinal,
                    "label " + o.to_string() + " is not finite");
    return static_cast<unsigned>(*n);
}

inline void check_socle_element(const FiniteModule& G, const Coords& g,
                                const Ordinal& beta) {
    const Height h = height(G, g);
    if (h < Height::finite(beta))
        throw Error(Errc::height_too_low,
                    "height " + h.to_string() + " is below " + beta.to_string());
    if (!G.is_zero(G.scale(g, static_cast<std::int64_t>(G.p()))))
        throw Error(Errc::not_in_socle, format_coords(g) + " is not killed by p");
}

inline std::vector<Coords> socle_images(const WalkerPresentation& P,
                                        const Divider& div, const Coords& g) {
    const ForestPresentation& F = P.forest();
    std::vector<Coords> images(F.size());
    // generators are sorted by sequence length, so parents come first
    for (std::size_t i = 0; i < F.size(); ++i) {
        const auto parent = F.parent(i);
        if (!parent) {
            images[i] = div.module().normalize(g);
            continue;
        }
        auto x = div.divide(images[*parent], finite_label(P.last_label(i)));
        if (!x)
            throw Error(Errc::height_too_low,
                        "no division at '" + F.id(i) + "'");
        images[i] = std::move(*x);
    }
    return images;
}

} // namespace detail

/// f: P_beta -> G with f(beta) = g, for g in p^beta G[p]. Every later image is
/// the lexicographically least x in p^(last label) G with p * x = f(parent).
inline Morphism build_morphism(const WalkerPresentation& P, const Divider& div,
                               const Coords& g) {
    detail::finite_label(P.beta());
    for (const auto& l : P.labels())
        detail::finite_label(l);
    detail::check_socle_element(div.module(), g, P.beta());
    return Morphism(P.forest_ptr(), div.module(), detail::socle_images(P, div, g));
}

inline Morphism build_morphism(const Ordinal& beta, const FiniteModule& G,
                               const Coords& g) {
    if (!beta.is_finite())
        throw Error(Errc::infinite_ordinal,
                    "build_morphism needs a finite beta, got " + beta.to_string());
    detail::check_socle_element(G, g, beta);
    return build_morphism(p_beta(beta, G.p()), Divider(G), g);
}

// -- lifting -----------------------------------------------------------------

/// Finite Walker modules P_0, P_1, ... over a fixed p, with their realizations
/// and the position of each copy of P_gamma inside P_beta.
class WalkerFamily {
  public:
    explicit WalkerFamily(std::uint64_t p) : p_(p) {}

    [[nodiscard]] std::uint64_t p() const noexcept { return p_; }

    const WalkerPresentation& walker(unsigned beta) { return entry(beta).presentation; }
    const FiniteModule& realization(unsigned beta) { return entry(beta).realization; }

    /// For each generator gamma.rest of P_gamma (gamma < beta), the index of
    /// beta.gamma.rest in P_beta.
    const std::vector<std::size_t>& branch(unsigned beta, unsigned gamma) {
        if (gamma >= beta)
            throw Error(Errc::label_not_below_beta,
                        std::to_string(gamma) + " is not below " + std::to_string(beta));
        Entry& big = entry(beta);
        Entry& small = entry(gamma);
        std::lock_guard lock(mutex_);
        auto& slot = big.branches[gamma];
        if (slot.empty()) {
            const auto& Pb = big.presentation;
            const auto& Pg = small.presentation;
            for (std::size_t j = 0; j < Pg.size(); ++j) {
                std::vector<Ordinal> seq{Pb.beta()};
                const auto& tail = Pg.sequence(j);
                seq.insert(seq.end(), tail.begin(), tail.end());
                slot.push_back(Pb.find(seq).value());
            }
        }
        return slot;
    }

  private:
    struct Entry {
        WalkerPresentation presentation;
        FiniteModule realization;
        std::map<unsigned, std::vector<std::size_t>> branches;
    };

    std::uint64_t p_;
    std::mutex mutex_;
    std::map<unsigned, Entry> entries_;

    Entry& entry(unsigned beta) {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(beta);
        if (it == entries_.end()) {
            WalkerPresentation P = p_beta(Ordinal::natural(beta), p_);
            FiniteModule R = realize(P.forest());
            it = entries_.emplace(beta, Entry{std::move(P), std::move(R), {}}).first;
        }
        return it->second;
    }
};

/// Why a morphism does not lift: at the copy of P_sigma reached through
/// `path`, the element f(sigma) of C has no preimage in p^sigma B[p].
struct Obstruction {
    unsigned sigma = 0;
    Coords element;
    std::vector<unsigned> path;

    [[nodiscard]] std::string describe() const {
        std::string s = "sigma=" + std::to_string(sigma) +
                        " element=" + format_coords(element) + " path=";
        for (std::size_t i = 0; i < path.size(); ++i)
            s += (i ? "." : "") + std::to_string(path[i]);
        return s;
    }
};

enum class LiftMethod { recursion, factorwise };

struct LiftResult {
    std::optional<Morphism> morphism;
    std::optional<Obstruction> obstruction;
    LiftMethod method = LiftMethod::recursion;

    explicit operator bool() const noexcept { return morphism.has_value(); }
};

/// Lifts morphisms P_beta -> C along B -> C = B/N.
///
/// The top generator goes to the least b in p^beta B[p] over f(beta); the
/// morphism g built from b agrees with f on the top, so f - pi g factors
/// through P_beta / <beta>, a sum of copies of P_gamma (gamma < beta), each
/// lifted recursively and added back to g.
///
/// The recursion never fails on a balanced sequence. Elsewhere a fixed choice
/// of b can fail for a liftable f, so a failed recursion is retried factor by
/// factor: f lifts iff f(e_k) lies in pi(B[p^a_k]) for each cyclic factor
/// Z/p^a_k of P_beta. The obstruction reported is the recursion's.
class Lifter {
  public:
    Lifter(const ShortExactSequence& seq, WalkerFamily& family)
        : seq_(seq), family_(family), divider_(seq.middle()) {
        if (family.p() != seq.middle().p())
            throw Error(Errc::shape_mismatch, "Walker family over a different p");
        const FiniteModule& B = seq.middle();
        const Submodule socle = torsion_part(B, 1);
        for (unsigned s = 0; s <= divider_.module_length(); ++s) {
            const auto gens = intersection(p_sigma(B, s), socle).generators();
            std::vector<Coords> images;
            for (const auto& g : gens)
                images.push_back(seq.project(g));
            top_.emplace_back(B, seq.cokernel(), gens, images);
        }
    }

    [[nodiscard]] const ShortExactSequence& sequence() const noexcept { return seq_; }

    /// f must be a morphism from the family's P_beta into the cokernel.
    [[nodiscard]] LiftResult lift(unsigned beta, const Morphism& f) {
        const WalkerPresentation& P = family_.walker(beta);
        if (!(f.source() == P.forest()))
            throw Error(Errc::shape_mismatch, "source is not P_" + std::to_string(beta));
        if (!f.target().same_shape(seq_.cokernel()))
            throw Error(Errc::shape_mismatch, "target is not the cokernel");
        std::vector<unsigned> path;
        std::optional<Obstruction> obstruction;
        LiftMethod method = LiftMethod::recursion;
        auto images = lift_images(beta, f.images(), path, obstruction);
        if (!images) {
            images = lift_factorwise(beta, f);
            if (!images)
                return {std::nullopt, std::move(obstruction), method};
            method = LiftMethod::factorwise;
        }
        Morphism lifted(P.forest_ptr(), seq_.middle(), std::move(*images));
        for (std::size_t g = 0; g < f.images().size(); ++g)
            if (seq_.project(lifted.image(g)) != f.image(g))
                throw std::logic_error("lift does not project back to f");
        return {std::move(lifted), std::nullopt, method};
    }

    [[nodiscard]] LiftResult lift(const WalkerPresentation& P, const Morphism& f) {
        const auto n = P.beta().to_natural();
        if (!n)
            throw Error(Errc::infinite_ordinal,
                        "lifting needs a finite beta, got " + P.beta().to_string());
        if (!P.label_set().is_all_finite())
            throw Error(Errc::shape_mismatch, "lifting needs the full P_beta");
        return lift(static_cast<unsigned>(*n), f);
    }

  private:
    const ShortExactSequence& seq_;
    WalkerFamily& family_;
    Divider divider_;
    std::vector<PreimageSolver> top_;               // p^s B[p] -> C, per s
    std::map<unsigned, PreimageSolver> torsion_;    // B[p^a] -> C, per a

    const PreimageSolver& torsion_solver(unsigned a) {
        auto it = torsion_.find(a);
        if (it == torsion_.end()) {
            const auto gens = torsion_part(seq_.middle(), a).generators();
            std::vector<Coords> images;
            for (const auto& g : gens)
                images.push_back(seq_.project(g));
            it = torsion_.emplace(a, PreimageSolver(seq_.middle(), seq_.cokernel(),
                                                    gens, images)).first;
        }
        return it->second;
    }

    std::optional<std::vector<Coords>> lift_factorwise(unsigned beta, const Morphism& f) {
        const FiniteModule& R = family_.realization(beta);
        const FiniteModule& C = seq_.cokernel();
        const auto& table = R.generators();
        std::vector<Coords> h;
        for (std::size_t k = 0; k < R.rank(); ++k) {
            Coords y = C.zero();
            for (std::size_t g = 0; g < table.from_coords[k].size(); ++g)
                if (table.from_coords[k][g] != 0)
                    y = C.add(y, C.scale(f.image(g), table.from_coords[k][g]));
            auto b = torsion_solver(R.exponents()[k]).solve(y);
            if (!b)
                return std::nullopt;
            h.push_back(std::move(*b));
        }
        return detail::from_factor_images(family_.walker(beta).forest_ptr(), R,
                                          seq_.middle(), h)
            .images();
    }

    std::optional<std::vector<Coords>> lift_images(unsigned beta,
                                                   const std::vector<Coords>& f,
                                                   std::vector<unsigned>& path,
                                                   std::optional<Obstruction>& why) {
        const FiniteModule& B = seq_.middle();
        const auto b = top_[std::min<unsigned>(beta, divider_.module_length())].solve(f[0]);
        if (!b) {
            why = Obstruction{beta, f[0], path};
            return std::nullopt;
        }
        const WalkerPresentation& P = family_.walker(beta);
        std::vector<Coords> out = detail::socle_images(P, divider_, *b);
        const FiniteModule& C = seq_.cokernel();
        for (unsigned gamma = 0; gamma < beta; ++gamma) {
            const auto& idx = family_.branch(beta, gamma);
            std::vector<Coords> mu;
            mu.reserve(idx.size());
            for (auto i : idx)
                mu.push_back(C.sub(f[i], seq_.project(out[i])));
            path.push_back(gamma);
            auto sub_lift = lift_images(gamma, mu, path, why);
            path.pop_back();
            if (!sub_lift)
                return std::nullopt;
            for (std::size_t k = 0; k < idx.size(); ++k)
                out[idx[k]] = B.add(out[idx[k]], (*sub_lift)[k]);
        }
        return out;
    }
};

inline LiftResult lift(const ShortExactSequence& seq, const WalkerPresentation& P,
                       const Morphism& f) {
    WalkerFamily family(seq.middle().p());
    Lifter lifter(seq, family);
    return lifter.lift(P, f);
}

// -- the embeddings P_beta -> P_lambda -----------------------------------------

/// beta.rest -> lambda.rest, for generators of P_beta whose labels are all
/// materialized in P_lambda.
inline std::vector<std::size_t> walker_embedding_indices(const WalkerPresentation& Pb,
                                                         const WalkerPresentation& Pl) {
    if (!(Pb.beta() < Pl.beta()) || Pb.p() != Pl.p())
        throw Error(Errc::shape_mismatch,
                    "no embedding P_" + Pb.beta().to_string() + " -> P_" +
                        Pl.beta().to_string());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < Pb.size(); ++i) {
        std::vector<Ordinal> seq = Pb.sequence(i);
        seq.front() = Pl.beta();
        auto j = Pl.find(seq);
        if (!j)
            throw Error(Errc::shape_mismatch,
                        "'" + Pb.forest().id(i) + "' has no counterpart in P_" +
                            Pl.beta().to_string());
        out.push_back(*j);
    }
    return out;
}

/// nu_beta as a morphism into the realization of P_lambda.
inline Morphism walker_embedding(const WalkerPresentation& Pb,
                                 const WalkerPresentation& Pl,
                                 const FiniteModule& Rl) {
    std::vector<Coords> images;
    for (auto j : walker_embedding_indices(Pb, Pl))
        images.push_back(Rl.generator_coords(j));
    return Morphism(Pb.forest_ptr(), Rl, std::move(images));
}

/// f restricted along nu_beta, for f with source P_lambda.
inline Morphism restrict_along_embedding(const WalkerPresentation& Pb,
                                         const WalkerPresentation& Pl,
                                         const Morphism& f) {
    if (!(f.source() == Pl.forest()))
        throw Error(Errc::shape_mismatch,
                    "morphism source is not P_" + Pl.beta().to_string());
    std::vector<Coords> images;
    for (auto j : walker_embedding_indices(Pb, Pl))
        images.push_back(f.image(j));
    return Morphism(Pb.forest_ptr(), f.target(), std::move(images));
}

} // namespace walker
