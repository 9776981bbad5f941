#pragma once

// Finite abelian p-groups G = Z/p^e1 + ... + Z/p^er with explicit coordinates,
// and their subgroup lattice.
//
// Coordinates of G are vectors c with 0 <= c_i < p^e_i. Subgroup algebra runs
// in (Z/p^E)^r, E = max e_i, through the embedding c_i -> c_i * p^(E - e_i).

#include "walker/error.hpp"
#include "walker/linalg.hpp"
#include "walker/presentation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace walker {

/// Coordinates of the generators of a forest presentation in its realization,
/// together with the inverse translation.
struct GeneratorTable {
    std::vector<std::string> ids;
    std::vector<unsigned> order_exponents;   // per generator
    std::vector<Coords> to_coords;           // per generator
    std::vector<Coords> from_coords;         // per module coordinate, over generators
};

class FiniteModule {
  public:
    FiniteModule() : FiniteModule(2, {}) {}

    /// The abstract module with the given exponents, sorted descending.
    FiniteModule(std::uint64_t p, std::vector<unsigned> exponents)
        : p_(p), exponents_(std::move(exponents)),
          ring_(p, 1) {
        if (p_ < 2)
            throw Error(Errc::invalid_presentation, "p must be at least 2");
        if (std::any_of(exponents_.begin(), exponents_.end(),
                        [](unsigned e) { return e == 0; }))
            throw Error(Errc::invalid_presentation, "zero exponent");
        if (!std::is_sorted(exponents_.begin(), exponents_.end(),
                            std::greater<>()))
            throw Error(Errc::invalid_presentation,
                        "exponents must be non-increasing");
        const unsigned E = exponents_.empty() ? 1 : exponents_.front();
        ring_ = PowerRing(p_, E);
    }

    FiniteModule(std::uint64_t p, std::vector<unsigned> exponents,
                 std::shared_ptr<const GeneratorTable> table)
        : FiniteModule(p, std::move(exponents)) {
        table_ = std::move(table);
    }

    [[nodiscard]] std::uint64_t p() const noexcept { return p_; }
    [[nodiscard]] const std::vector<unsigned>& exponents() const noexcept {
        return exponents_;
    }
    [[nodiscard]] std::size_t rank() const noexcept { return exponents_.size(); }
    [[nodiscard]] unsigned log_order() const {
        return std::accumulate(exponents_.begin(), exponents_.end(), 0u);
    }
    [[nodiscard]] unsigned exponent_bound() const { return ring_.exponent(); }
    [[nodiscard]] const PowerRing& ring() const noexcept { return ring_; }
    [[nodiscard]] std::int64_t coordinate_modulus(std::size_t i) const {
        return ring_.power(exponents_.at(i));
    }

    [[nodiscard]] bool same_shape(const FiniteModule& other) const {
        return p_ == other.p_ && exponents_ == other.exponents_;
    }

    // -- coordinates --------------------------------------------------------

    [[nodiscard]] Coords zero() const { return Coords(rank(), 0); }
    [[nodiscard]] Coords unit(std::size_t i) const {
        Coords c = zero();
        c.at(i) = 1;
        return c;
    }
    [[nodiscard]] Coords normalize(Coords c) const {
        check_length(c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::int64_t m = coordinate_modulus(i);
            c[i] %= m;
            if (c[i] < 0)
                c[i] += m;
        }
        return c;
    }
    [[nodiscard]] Coords add(const Coords& a, const Coords& b) const {
        check_length(a);
        check_length(b);
        Coords c(rank());
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = (a[i] + b[i]) % coordinate_modulus(i);
        return c;
    }
    [[nodiscard]] Coords sub(const Coords& a, const Coords& b) const {
        check_length(a);
        check_length(b);
        Coords c(rank());
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::int64_t m = coordinate_modulus(i);
            c[i] = ((a[i] - b[i]) % m + m) % m;
        }
        return c;
    }
    [[nodiscard]] Coords scale(const Coords& a, std::int64_t k) const {
        check_length(a);
        Coords c(rank());
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::int64_t m = coordinate_modulus(i);
            c[i] = static_cast<std::int64_t>(
                ((static_cast<Wide>(a[i]) * k) % m + m) % m);
        }
        return c;
    }
    [[nodiscard]] Coords scale(const Coords& a, const BigInt& k) const {
        return scale(a, ring_.reduce(k));
    }
    [[nodiscard]] bool is_zero(const Coords& a) const {
        check_length(a);
        return std::all_of(a.begin(), a.end(),
                           [](std::int64_t v) { return v == 0; });
    }

    /// Image of c in (Z/p^E)^r for a ring with E >= exponent_bound().
    [[nodiscard]] Coords embed(const Coords& c, const PowerRing& ring) const {
        check_length(c);
        Coords out(rank());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = ring.mul(c[i], ring.power(ring.exponent() - exponents_[i]));
        return out;
    }
    [[nodiscard]] Coords embed(const Coords& c) const { return embed(c, ring_); }
    [[nodiscard]] Coords unembed(const Coords& x, const PowerRing& ring) const {
        Coords c(rank());
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = x[i] / ring.power(ring.exponent() - exponents_[i]);
        return c;
    }
    [[nodiscard]] Coords unembed(const Coords& x) const { return unembed(x, ring_); }

    // -- generator translation ---------------------------------------------

    [[nodiscard]] bool has_generators() const noexcept {
        return static_cast<bool>(table_);
    }
    [[nodiscard]] const GeneratorTable& generators() const {
        if (!table_)
            throw Error(Errc::presentation_mismatch,
                        "module has no generator translation");
        return *table_;
    }
    [[nodiscard]] std::size_t generator_count() const {
        return table_ ? table_->ids.size() : 0;
    }
    [[nodiscard]] const Coords& generator_coords(std::size_t g) const {
        return generators().to_coords.at(g);
    }

  private:
    std::uint64_t p_;
    std::vector<unsigned> exponents_;
    PowerRing ring_;
    std::shared_ptr<const GeneratorTable> table_;

    void check_length(const Coords& c) const {
        if (c.size() != rank())
            throw Error(Errc::ambient_mismatch,
                        "coordinate vector of length " +
                            std::to_string(c.size()) + " in a module of rank " +
                            std::to_string(rank()));
    }
};

inline std::string format_exponents(const std::vector<unsigned>& e) {
    std::string s = "[";
    for (std::size_t i = 0; i < e.size(); ++i)
        s += (i ? "," : "") + std::to_string(e[i]);
    return s + "]";
}

inline std::string format_coords(const Coords& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i)
        s += (i ? "," : "") + std::to_string(c[i]);
    return s + ")";
}

/// A subgroup of a finite module, kept as a Howell basis in embedded
/// coordinates.
class Submodule {
  public:
    Submodule(FiniteModule ambient, const std::vector<Coords>& generators)
        : ambient_(std::move(ambient)),
          basis_(ambient_.ring(), ambient_.rank(), embed_all(generators)) {}

    static Submodule whole(const FiniteModule& G) {
        std::vector<Coords> gens;
        for (std::size_t i = 0; i < G.rank(); ++i)
            gens.push_back(G.unit(i));
        return Submodule(G, gens);
    }
    static Submodule zero(const FiniteModule& G) { return Submodule(G, {}); }

    [[nodiscard]] const FiniteModule& ambient() const noexcept { return ambient_; }
    [[nodiscard]] const HowellForm& basis() const noexcept { return basis_; }
    [[nodiscard]] unsigned log_order() const { return basis_.log_order(); }
    [[nodiscard]] bool is_zero() const { return basis_.rows().empty(); }

    /// Basis rows in module coordinates.
    [[nodiscard]] std::vector<Coords> generators() const {
        std::vector<Coords> out;
        out.reserve(basis_.rows().size());
        for (const auto& r : basis_.rows())
            out.push_back(ambient_.unembed(r));
        return out;
    }

    [[nodiscard]] bool contains(const Coords& x) const {
        return basis_.contains(ambient_.embed(ambient_.normalize(x)));
    }
    [[nodiscard]] bool contains(const Submodule& other) const {
        check_ambient(other);
        return basis_.contains_all(other.basis_);
    }
    /// Lexicographically least element of the coset x + N.
    [[nodiscard]] Coords reduce(const Coords& x) const {
        return ambient_.unembed(basis_.reduce(ambient_.embed(ambient_.normalize(x))));
    }

    void check_ambient(const Submodule& other) const {
        if (!ambient_.same_shape(other.ambient_))
            throw Error(Errc::ambient_mismatch,
                        "submodules of " + format_exponents(ambient_.exponents()) +
                            " and " +
                            format_exponents(other.ambient_.exponents()));
    }

    friend bool operator==(const Submodule& a, const Submodule& b) {
        return a.ambient_.same_shape(b.ambient_) && a.basis_ == b.basis_;
    }

  private:
    FiniteModule ambient_;
    HowellForm basis_;

    std::vector<Coords> embed_all(const std::vector<Coords>& gens) const {
        std::vector<Coords> out;
        out.reserve(gens.size());
        for (const auto& g : gens)
            out.push_back(ambient_.embed(ambient_.normalize(g)));
        return out;
    }
};

inline Submodule sum(const Submodule& a, const Submodule& b) {
    a.check_ambient(b);
    auto gens = a.generators();
    auto more = b.generators();
    gens.insert(gens.end(), more.begin(), more.end());
    return Submodule(a.ambient(), gens);
}

inline Submodule intersection(const Submodule& a, const Submodule& b) {
    a.check_ambient(b);
    const auto& G = a.ambient();
    const std::size_t r = G.rank();
    // rows (x, x) for x in A and (y, 0) for y in B; rows with vanishing left
    // half span the intersection on the right
    std::vector<Coords> rows;
    for (const auto& x : a.basis().rows()) {
        Coords row(x);
        row.insert(row.end(), x.begin(), x.end());
        rows.push_back(std::move(row));
    }
    for (const auto& y : b.basis().rows()) {
        Coords row(y);
        row.resize(2 * r, 0);
        rows.push_back(std::move(row));
    }
    HowellForm h(G.ring(), 2 * r, std::move(rows));
    std::vector<Coords> gens;
    for (std::size_t i = 0; i < h.rows().size(); ++i)
        if (h.pivots()[i].column >= r)
            gens.push_back(G.unembed(Coords(h.rows()[i].begin() + static_cast<std::ptrdiff_t>(r),
                                            h.rows()[i].end())));
    return Submodule(G, gens);
}

/// p^k N.
inline Submodule scale(const Submodule& N, unsigned k) {
    const auto& G = N.ambient();
    const std::int64_t f = G.ring().power(std::min(k, G.exponent_bound()));
    std::vector<Coords> gens;
    for (const auto& g : N.generators())
        gens.push_back(G.scale(g, f));
    return Submodule(G, gens);
}

/// A homomorphism between finite modules, given by the images of the
/// coordinate basis of the source.
class LinearMap {
  public:
    LinearMap(FiniteModule source, FiniteModule target,
              std::vector<Coords> basis_images)
        : source_(std::move(source)), target_(std::move(target)),
          images_(std::move(basis_images)) {
        if (images_.size() != source_.rank())
            throw Error(Errc::shape_mismatch, "wrong number of basis images");
        for (std::size_t i = 0; i < images_.size(); ++i) {
            images_[i] = target_.normalize(images_[i]);
            if (!target_.is_zero(target_.scale(images_[i],
                                               source_.coordinate_modulus(i))))
                throw Error(Errc::invalid_morphism,
                            "image of basis vector " + std::to_string(i) +
                                " has order exceeding its source");
        }
    }

    [[nodiscard]] const FiniteModule& source() const noexcept { return source_; }
    [[nodiscard]] const FiniteModule& target() const noexcept { return target_; }
    [[nodiscard]] const std::vector<Coords>& basis_images() const noexcept {
        return images_;
    }

    [[nodiscard]] Coords apply(const Coords& x) const {
        const Coords c = source_.normalize(x);
        Coords y = target_.zero();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0)
                y = target_.add(y, target_.scale(images_[i], c[i]));
        return y;
    }

    [[nodiscard]] Submodule image(const Submodule& N) const {
        std::vector<Coords> gens;
        for (const auto& g : N.generators())
            gens.push_back(apply(g));
        return Submodule(target_, gens);
    }
    [[nodiscard]] Submodule image() const {
        return image(Submodule::whole(source_));
    }

    [[nodiscard]] Submodule kernel() const {
        const PowerRing ring(source_.p(), std::max(source_.exponent_bound(),
                                                   target_.exponent_bound()));
        const std::size_t rt = target_.rank();
        std::vector<Coords> rows;
        for (std::size_t i = 0; i < source_.rank(); ++i) {
            Coords row = target_.embed(images_[i], ring);
            const Coords s = source_.embed(source_.unit(i), ring);
            row.insert(row.end(), s.begin(), s.end());
            rows.push_back(std::move(row));
        }
        HowellForm h(ring, rt + source_.rank(), std::move(rows));
        std::vector<Coords> gens;
        for (std::size_t i = 0; i < h.rows().size(); ++i)
            if (h.pivots()[i].column >= rt)
                gens.push_back(source_.unembed(
                    Coords(h.rows()[i].begin() + static_cast<std::ptrdiff_t>(rt),
                           h.rows()[i].end()),
                    ring));
        return Submodule(source_, gens);
    }

  private:
    FiniteModule source_;
    FiniteModule target_;
    std::vector<Coords> images_;
};

/// Finds lexicographically least x in a subgroup M with phi(x) = y, for a
/// fixed homomorphism phi defined on M.
class PreimageSolver {
  public:
    /// `domain_gens` generate M inside `source`; `images` are their values.
    PreimageSolver(FiniteModule source, FiniteModule target,
                   const std::vector<Coords>& domain_gens,
                   const std::vector<Coords>& images)
        : source_(std::move(source)), target_(std::move(target)),
          ring_(source_.p(),
                std::max(source_.exponent_bound(), target_.exponent_bound())),
          form_(ring_, target_.rank() + source_.rank()) {
        std::vector<Coords> rows;
        for (std::size_t i = 0; i < domain_gens.size(); ++i) {
            Coords row = target_.embed(target_.normalize(images.at(i)), ring_);
            const Coords s = source_.embed(source_.normalize(domain_gens[i]), ring_);
            row.insert(row.end(), s.begin(), s.end());
            rows.push_back(std::move(row));
        }
        form_ = HowellForm(ring_, target_.rank() + source_.rank(), std::move(rows));
    }

    [[nodiscard]] std::optional<Coords> solve(const Coords& y) const {
        const std::size_t rt = target_.rank();
        Coords v = target_.embed(target_.normalize(y), ring_);
        v.resize(rt + source_.rank(), 0);
        form_.reduce_range(v, 0, rt);
        for (std::size_t j = 0; j < rt; ++j)
            if (v[j] != 0)
                return std::nullopt;
        // v = (0, -x) for some solution x
        for (std::size_t j = rt; j < v.size(); ++j)
            v[j] = ring_.sub(0, v[j]);
        form_.reduce_range(v, rt, v.size());
        return source_.unembed(Coords(v.begin() + static_cast<std::ptrdiff_t>(rt),
                                      v.end()),
                               ring_);
    }

  private:
    FiniteModule source_;
    FiniteModule target_;
    PowerRing ring_;
    HowellForm form_;
};

/// G / N with the projection and a set-theoretic section.
struct Quotient {
    FiniteModule module;
    std::vector<Coords> projection; // image of each ambient basis vector
    std::vector<Coords> section;    // lift of each quotient basis vector

    [[nodiscard]] LinearMap projection_map(const FiniteModule& ambient) const {
        return LinearMap(ambient, module, projection);
    }
};

namespace detail {

/// Diagonalizes an integer relation matrix over `cols` generators and reports
/// the nontrivial cyclic factors in descending order, with the transform rows
/// for each factor.
struct Diagonalized {
    std::vector<unsigned> exponents;
    std::vector<Coords> to_coords;   // per generator
    std::vector<std::vector<BigInt>> from_coords; // per factor, over generators
};

inline Diagonalized diagonalize(const BigMatrix& relations, std::size_t cols,
                                std::uint64_t p) {
    SmithForm snf = smith_normal_form(relations, cols);
    std::vector<std::pair<unsigned, std::size_t>> factors;
    for (std::size_t j = 0; j < cols; ++j) {
        if (j >= snf.diagonal.size() || snf.diagonal[j] == 0)
            throw Error(Errc::invalid_presentation,
                        "presentation is not torsion");
        const unsigned e = p_power_exponent(snf.diagonal[j], p);
        if (e > 0)
            factors.emplace_back(e, j);
    }
    std::stable_sort(factors.begin(), factors.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    Diagonalized out;
    for (const auto& f : factors)
        out.exponents.push_back(f.first);
    const PowerRing ring(p, out.exponents.empty() ? 1 : out.exponents.front());
    out.to_coords.assign(cols, Coords(factors.size(), 0));
    for (std::size_t g = 0; g < cols; ++g)
        for (std::size_t k = 0; k < factors.size(); ++k) {
            BigInt v = snf.transform[g][factors[k].second] %
                       BigInt(ring.power(factors[k].first));
            if (v < 0)
                v += ring.power(factors[k].first);
            out.to_coords[g][k] = static_cast<std::int64_t>(v);
        }
    for (const auto& f : factors)
        out.from_coords.push_back(snf.inverse_transform[f.second]);
    return out;
}

} // namespace detail

inline Quotient quotient(const Submodule& N) {
    const FiniteModule& G = N.ambient();
    const std::size_t r = G.rank();
    BigMatrix rel;
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<BigInt> row(r, 0);
        row[i] = BigInt(G.coordinate_modulus(i));
        rel.push_back(std::move(row));
    }
    for (const auto& g : N.generators()) {
        std::vector<BigInt> row(r);
        for (std::size_t i = 0; i < r; ++i)
            row[i] = g[i];
        rel.push_back(std::move(row));
    }
    auto d = detail::diagonalize(rel, r, G.p());
    Quotient q{FiniteModule(G.p(), d.exponents), {}, {}};
    for (std::size_t i = 0; i < r; ++i)
        q.projection.push_back(q.module.normalize(d.to_coords[i]));
    for (const auto& row : d.from_coords) {
        Coords c(r);
        for (std::size_t i = 0; i < r; ++i)
            c[i] = G.ring().reduce(row[i]) % G.coordinate_modulus(i);
        q.section.push_back(c);
    }
    return q;
}

/// Calls fn on every element of G in lexicographic coordinate order.
/// Throws TooLarge if |G| exceeds bound.
inline void for_each_element(const FiniteModule& G, std::uint64_t bound,
                             const std::function<void(const Coords&)>& fn) {
    std::uint64_t order = 1;
    for (unsigned k = 0; k < G.log_order(); ++k) {
        if (order > bound / G.p())
            throw Error(Errc::too_large,
                        "module of order p^" + std::to_string(G.log_order()) +
                            " exceeds enumeration bound " + std::to_string(bound));
        order *= G.p();
    }
    if (order > bound)
        throw Error(Errc::too_large, "module exceeds enumeration bound");
    Coords c = G.zero();
    for (;;) {
        fn(c);
        std::size_t i = c.size();
        while (i > 0) {
            --i;
            if (++c[i] < G.coordinate_modulus(i))
                break;
            c[i] = 0;
            if (i == 0)
                return;
        }
        if (c.empty())
            return;
    }
}

inline std::vector<Coords> enumerate_elements(const FiniteModule& G,
                                              std::uint64_t bound) {
    std::vector<Coords> out;
    for_each_element(G, bound, [&](const Coords& c) { out.push_back(c); });
    return out;
}

/// Elements of a subgroup, in lexicographic order.
inline std::vector<Coords> enumerate_elements(const Submodule& N,
                                              std::uint64_t bound) {
    std::vector<Coords> out;
    for_each_element(N.ambient(), bound, [&](const Coords& c) {
        if (N.contains(c))
            out.push_back(c);
    });
    return out;
}

/// Every subgroup of G exactly once, grown one cyclic generator at a time and
/// deduplicated by Howell form.
inline std::vector<Submodule> enumerate_subgroups(const FiniteModule& G,
                                                  std::uint64_t bound) {
    const auto elements = enumerate_elements(G, bound);
    std::vector<Submodule> found{Submodule::zero(G)};
    std::set<std::vector<Coords>> seen{found.front().basis().rows()};
    for (std::size_t next = 0; next < found.size(); ++next) {
        const Submodule current = found[next];
        for (const auto& x : elements) {
            if (current.contains(x))
                continue;
            auto gens = current.generators();
            gens.push_back(x);
            Submodule bigger(G, gens);
            if (seen.insert(bigger.basis().rows()).second)
                found.push_back(std::move(bigger));
        }
    }
    return found;
}

/// Isomorphism type of a subgroup, read off from the orders of p^k N.
inline std::vector<unsigned> invariants(const Submodule& N) {
    std::vector<unsigned> orders;
    Submodule cur = N;
    while (!cur.is_zero()) {
        orders.push_back(cur.log_order());
        cur = scale(cur, 1);
    }
    orders.push_back(0);
    // number of cyclic factors of order >= p^(k+1) is |p^k N| / |p^(k+1) N|
    std::vector<unsigned> exps;
    for (std::size_t k = orders.size() - 1; k-- > 0;) {
        const unsigned at_least = orders[k] - orders[k + 1];
        const unsigned longer = k + 2 < orders.size() ? orders[k + 1] - orders[k + 2] : 0;
        for (unsigned c = 0; c < at_least - longer; ++c)
            exps.push_back(static_cast<unsigned>(k + 1));
    }
    return exps;
}

// -- realization of forest presentations -------------------------------------

/// Realizes a finite forest presentation as a sum of cyclic groups. Each tree
/// is diagonalized separately; the factors are merged in descending order.
inline FiniteModule realize(const ForestPresentation& F) {
    const std::size_t n = F.size();
    const std::uint64_t p = F.p();
    struct Factor {
        unsigned exponent;
        Coords column;          // coordinate of each generator
        std::vector<BigInt> back; // inverse row over generators
    };
    std::vector<Factor> factors;

    std::vector<std::size_t> component(n);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t r : F.roots()) {
        std::vector<std::size_t> nodes{r};
        for (std::size_t k = 0; k < nodes.size(); ++k)
            for (std::size_t c : F.children(nodes[k]))
                nodes.push_back(c);
        for (std::size_t k = 0; k < nodes.size(); ++k)
            component[nodes[k]] = k;
        members.push_back(std::move(nodes));
    }
    for (const auto& nodes : members) {
        const std::size_t m = nodes.size();
        BigMatrix rel(m, std::vector<BigInt>(m, 0));
        for (std::size_t k = 0; k < m; ++k) {
            rel[k][k] = p;
            if (auto par = F.parent(nodes[k]))
                rel[k][component[*par]] = -1;
        }
        auto d = detail::diagonalize(rel, m, p);
        for (std::size_t f = 0; f < d.exponents.size(); ++f) {
            Factor fac{d.exponents[f], Coords(n, 0), std::vector<BigInt>(n, 0)};
            for (std::size_t k = 0; k < m; ++k) {
                fac.column[nodes[k]] = d.to_coords[k][f];
                fac.back[nodes[k]] = d.from_coords[f][k];
            }
            factors.push_back(std::move(fac));
        }
    }
    std::stable_sort(factors.begin(), factors.end(),
                     [](const Factor& a, const Factor& b) {
                         return a.exponent > b.exponent;
                     });
    std::vector<unsigned> exps;
    for (const auto& f : factors)
        exps.push_back(f.exponent);
    auto table = std::make_shared<GeneratorTable>();
    const PowerRing ring(p, exps.empty() ? 1 : exps.front());
    for (std::size_t g = 0; g < n; ++g) {
        table->ids.push_back(F.id(g));
        table->order_exponents.push_back(F.order_exponent(g));
        Coords c(factors.size());
        for (std::size_t k = 0; k < factors.size(); ++k)
            c[k] = factors[k].column[g];
        table->to_coords.push_back(std::move(c));
    }
    for (const auto& f : factors) {
        Coords row(n);
        for (std::size_t g = 0; g < n; ++g) {
            BigInt m = BigInt(1);
            for (unsigned k = 0; k < F.order_exponent(g); ++k)
                m *= p;
            BigInt v = f.back[g] % m;
            if (v < 0)
                v += m;
            row[g] = static_cast<std::int64_t>(v);
        }
        table->from_coords.push_back(std::move(row));
    }
    return FiniteModule(p, std::move(exps), std::move(table));
}

} // namespace walker
