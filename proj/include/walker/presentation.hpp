#pragma once

// Forest presentations of simply presented torsion modules.
//
// A forest presentation has one generator per node and the relations
// p * node = parent(node), p * root = 0. Generator g has order p^(depth(g)+1).
// Walker modules P_beta are forests whose nodes are the strictly decreasing
// ordinal sequences beta > b1 > ... > bn, with parent obtained by dropping the
// last entry.

#include "walker/error.hpp"
#include "walker/ordinal.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace walker {

/// Separator between labels in Walker generator ids (U+00B7).
inline constexpr std::string_view kLabelSeparator = "\xC2\xB7";

struct Generator {
    std::string id;
    std::optional<std::size_t> parent; // index into the generator list
    std::optional<Ordinal> label;
};

/// One relation p^power * generator = target (target empty means 0).
struct SimpleRelation {
    std::string generator;
    std::optional<std::string> target;
    unsigned power = 1;
};

class ForestPresentation {
  public:
    ForestPresentation(std::uint64_t p, std::vector<Generator> generators)
        : p_(p), generators_(std::move(generators)) {
        if (p_ < 2)
            throw Error(Errc::invalid_presentation, "p must be at least 2");
        const std::size_t n = generators_.size();
        index_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!index_.emplace(generators_[i].id, i).second)
                throw Error(Errc::invalid_presentation,
                            "duplicate generator id '" + generators_[i].id + "'");
            if (generators_[i].parent && *generators_[i].parent >= n)
                throw Error(Errc::invalid_presentation,
                            "parent index out of range for '" +
                                generators_[i].id + "'");
        }
        depth_.assign(n, kUnset);
        children_.assign(n, {});
        for (std::size_t i = 0; i < n; ++i)
            compute_depth(i);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& g = generators_[i];
            if (!g.parent) {
                roots_.push_back(i);
                continue;
            }
            children_[*g.parent].push_back(i);
            const auto& parent = generators_[*g.parent];
            if (g.label && parent.label && !(*g.label < *parent.label))
                throw Error(Errc::invalid_presentation,
                            "label of '" + g.id +
                                "' is not below the label of its parent");
        }
    }

    /// Builds a forest from (id, parent id) pairs in any order.
    static ForestPresentation from_parents(
        std::uint64_t p,
        const std::vector<std::pair<std::string, std::optional<std::string>>>&
            nodes) {
        std::unordered_map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            pos.emplace(nodes[i].first, i);
        std::vector<Generator> gens;
        gens.reserve(nodes.size());
        for (const auto& [id, parent] : nodes) {
            Generator g{id, std::nullopt, std::nullopt};
            if (parent) {
                auto it = pos.find(*parent);
                if (it == pos.end())
                    throw Error(Errc::unknown_generator,
                                "parent '" + *parent + "' of '" + id + "'");
                g.parent = it->second;
            }
            gens.push_back(std::move(g));
        }
        return ForestPresentation(p, std::move(gens));
    }

    /// Ingests general simply presented relations p^n x = y and p^m x = 0 by
    /// inserting the intermediate generators "x~1", ..., "x~(n-1)".
    static ForestPresentation from_relations(
        std::uint64_t p, const std::vector<SimpleRelation>& relations) {
        std::vector<std::pair<std::string, std::optional<std::string>>> nodes;
        std::set<std::string> seen;
        for (const auto& rel : relations) {
            if (rel.power == 0)
                throw Error(Errc::invalid_presentation,
                            "relation on '" + rel.generator + "' has power 0");
            if (!seen.insert(rel.generator).second)
                throw Error(Errc::invalid_presentation,
                            "generator '" + rel.generator +
                                "' has more than one relation");
            std::string current = rel.generator;
            for (unsigned k = 1; k < rel.power; ++k) {
                std::string mid = rel.generator + "~" + std::to_string(k);
                nodes.emplace_back(current, mid);
                current = mid;
            }
            nodes.emplace_back(current, rel.target);
        }
        return from_parents(p, nodes);
    }

    [[nodiscard]] std::uint64_t p() const noexcept { return p_; }
    [[nodiscard]] std::size_t size() const noexcept { return generators_.size(); }
    [[nodiscard]] const std::vector<Generator>& generators() const noexcept {
        return generators_;
    }
    [[nodiscard]] const Generator& generator(std::size_t i) const {
        return generators_.at(i);
    }
    [[nodiscard]] const std::string& id(std::size_t i) const {
        return generators_.at(i).id;
    }
    [[nodiscard]] std::optional<std::size_t> parent(std::size_t i) const {
        return generators_.at(i).parent;
    }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }
    [[nodiscard]] std::size_t index_of(std::string_view id) const {
        if (auto i = find(id))
            return *i;
        throw Error(Errc::unknown_generator, "'" + std::string(id) + "'");
    }
    [[nodiscard]] std::size_t depth(std::size_t i) const { return depth_.at(i); }
    /// log_p of the order of generator i.
    [[nodiscard]] unsigned order_exponent(std::size_t i) const {
        return static_cast<unsigned>(depth_.at(i) + 1);
    }
    [[nodiscard]] const std::vector<std::size_t>& children(std::size_t i) const {
        return children_.at(i);
    }
    [[nodiscard]] const std::vector<std::size_t>& roots() const noexcept {
        return roots_;
    }
    /// True if a is a proper ancestor of d.
    [[nodiscard]] bool is_ancestor(std::size_t a, std::size_t d) const {
        auto cur = generators_.at(d).parent;
        while (cur) {
            if (*cur == a)
                return true;
            cur = generators_[*cur].parent;
        }
        return false;
    }
    /// Ancestor k steps above i; nullopt when k exceeds the depth.
    [[nodiscard]] std::optional<std::size_t> ancestor(std::size_t i,
                                                      std::size_t k) const {
        std::optional<std::size_t> cur = i;
        for (std::size_t s = 0; s < k && cur; ++s)
            cur = generators_[*cur].parent;
        return cur;
    }

    friend bool operator==(const ForestPresentation& a,
                           const ForestPresentation& b) {
        if (a.p_ != b.p_ || a.generators_.size() != b.generators_.size())
            return false;
        for (std::size_t i = 0; i < a.generators_.size(); ++i)
            if (a.generators_[i].id != b.generators_[i].id ||
                a.generators_[i].parent != b.generators_[i].parent)
                return false;
        return true;
    }

  private:
    static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    static constexpr std::size_t kVisiting = static_cast<std::size_t>(-2);

    std::uint64_t p_;
    std::vector<Generator> generators_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> depth_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> roots_;

    void compute_depth(std::size_t start) {
        std::vector<std::size_t> path;
        std::size_t cur = start;
        while (depth_[cur] == kUnset) {
            depth_[cur] = kVisiting;
            path.push_back(cur);
            if (!generators_[cur].parent) {
                depth_[cur] = 0;
                path.pop_back();
                break;
            }
            cur = *generators_[cur].parent;
        }
        if (depth_[cur] == kVisiting)
            throw Error(Errc::invalid_presentation,
                        "parent links form a cycle through '" +
                            generators_[cur].id + "'");
        std::size_t d = depth_[cur];
        while (!path.empty()) {
            depth_[path.back()] = ++d;
            path.pop_back();
        }
    }
};

/// Labels from which Walker sequences are drawn: every ordinal below beta
/// (finite beta only), or an explicit finite set.
class LabelSet {
  public:
    static LabelSet all_finite() { return LabelSet(); }
    static LabelSet of(std::vector<Ordinal> labels) {
        LabelSet s;
        std::sort(labels.begin(), labels.end(), std::greater<>());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        s.labels_ = std::move(labels);
        return s;
    }
    [[nodiscard]] bool is_all_finite() const noexcept { return !labels_; }
    [[nodiscard]] const std::optional<std::vector<Ordinal>>& labels() const {
        return labels_;
    }

  private:
    std::optional<std::vector<Ordinal>> labels_;
};

inline std::string sequence_id(const std::vector<Ordinal>& seq) {
    std::string out;
    for (const auto& o : seq) {
        if (!out.empty())
            out += kLabelSeparator;
        out += o.to_string();
    }
    return out;
}

inline std::vector<Ordinal> parse_sequence_id(std::string_view id) {
    std::vector<Ordinal> seq;
    std::size_t start = 0;
    for (;;) {
        const auto pos = id.find(kLabelSeparator, start);
        seq.push_back(Ordinal::parse(id.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + kLabelSeparator.size();
    }
    return seq;
}

class WalkerPresentation {
  public:
    WalkerPresentation(Ordinal beta, std::uint64_t p, LabelSet labels);

    [[nodiscard]] const ForestPresentation& forest() const noexcept {
        return *forest_;
    }
    [[nodiscard]] std::shared_ptr<const ForestPresentation> forest_ptr() const {
        return forest_;
    }
    [[nodiscard]] const Ordinal& beta() const noexcept { return beta_; }
    [[nodiscard]] std::uint64_t p() const noexcept { return forest_->p(); }
    [[nodiscard]] const LabelSet& label_set() const noexcept { return labels_; }
    /// Labels available below beta, in decreasing order.
    [[nodiscard]] const std::vector<Ordinal>& labels() const noexcept {
        return materialized_;
    }
    [[nodiscard]] std::size_t depth_bound() const noexcept { return depth_bound_; }
    [[nodiscard]] std::size_t size() const noexcept { return forest_->size(); }
    [[nodiscard]] const std::vector<Ordinal>& sequence(std::size_t i) const {
        return sequences_.at(i);
    }
    [[nodiscard]] const Ordinal& last_label(std::size_t i) const {
        return sequences_.at(i).back();
    }
    [[nodiscard]] bool is_materialized(const Ordinal& a) const {
        return a == beta_ ||
               std::binary_search(materialized_.begin(), materialized_.end(), a,
                                  std::greater<>());
    }
    /// Index of the generator beta followed by `tail`.
    [[nodiscard]] std::optional<std::size_t>
    find(const std::vector<Ordinal>& seq) const {
        return forest_->find(sequence_id(seq));
    }

  private:
    Ordinal beta_;
    LabelSet labels_;
    std::vector<Ordinal> materialized_;
    std::size_t depth_bound_ = 1;
    std::vector<std::vector<Ordinal>> sequences_;
    std::shared_ptr<const ForestPresentation> forest_;
};

inline WalkerPresentation::WalkerPresentation(Ordinal beta, std::uint64_t p,
                                              LabelSet labels)
    : beta_(std::move(beta)), labels_(std::move(labels)) {
    if (labels_.is_all_finite()) {
        const auto n = beta_.to_natural();
        if (!n)
            throw Error(Errc::not_materialized,
                        "P_" + beta_.to_string() +
                            " needs an explicit label set");
        if (*n > 24)
            throw Error(Errc::resource_limit,
                        "P_" + beta_.to_string() + " has 2^" +
                            std::to_string(*n) + " generators");
        for (std::uint64_t k = *n; k-- > 0;)
            materialized_.push_back(Ordinal::natural(k));
    } else {
        for (const auto& l : *labels_.labels()) {
            if (!(l < beta_))
                throw Error(Errc::label_not_below_beta,
                            l.to_string() + " is not below " + beta_.to_string());
            materialized_.push_back(l);
        }
        if (materialized_.size() > 24)
            throw Error(Errc::resource_limit, "label set too large");
    }
    depth_bound_ = materialized_.size() + 1;

    // every subset of the labels, as a decreasing sequence after beta
    const std::size_t m = materialized_.size();
    std::vector<std::vector<Ordinal>> seqs;
    seqs.reserve(std::size_t{1} << m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<Ordinal> s{beta_};
        for (std::size_t k = 0; k < m; ++k)
            if (mask & (std::size_t{1} << k))
                s.push_back(materialized_[k]);
        seqs.push_back(std::move(s));
    }
    std::sort(seqs.begin(), seqs.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                            b.end(), std::greater<>());
    });
    std::unordered_map<std::string, std::size_t> pos;
    std::vector<std::string> ids;
    ids.reserve(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        ids.push_back(sequence_id(seqs[i]));
        pos.emplace(ids.back(), i);
    }
    std::vector<Generator> gens;
    gens.reserve(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        Generator g{ids[i], std::nullopt, seqs[i].back()};
        if (seqs[i].size() > 1) {
            std::vector<Ordinal> parent(seqs[i].begin(), seqs[i].end() - 1);
            g.parent = pos.at(sequence_id(parent));
        }
        gens.push_back(std::move(g));
    }
    sequences_ = std::move(seqs);
    forest_ = std::make_shared<const ForestPresentation>(p, std::move(gens));
}

/// P_beta over the given labels.
inline WalkerPresentation p_beta(const Ordinal& beta, std::uint64_t p,
                                 const LabelSet& labels = LabelSet::all_finite()) {
    return WalkerPresentation(beta, p, labels);
}

namespace detail {
inline void require_materialized(const WalkerPresentation& P, const Ordinal& a) {
    if (a > P.beta())
        throw Error(Errc::not_materialized,
                    a.to_string() + " exceeds beta = " + P.beta().to_string());
    if (!P.is_materialized(a))
        throw Error(Errc::not_materialized,
                    a.to_string() + " is not in the label set");
}
} // namespace detail

/// Generator indices whose last label equals alpha.
inline std::vector<std::size_t> x_alpha_indices(const WalkerPresentation& P,
                                                const Ordinal& alpha) {
    detail::require_materialized(P, alpha);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < P.size(); ++i)
        if (P.last_label(i) == alpha)
            out.push_back(i);
    return out;
}

/// Generators spanning X_alpha = p^alpha P_beta.
inline std::vector<std::string> x_alpha(const WalkerPresentation& P,
                                        const Ordinal& alpha) {
    std::vector<std::string> out;
    for (auto i : x_alpha_indices(P, alpha))
        out.push_back(P.forest().id(i));
    return out;
}

/// |S_{gamma,alpha}|: sequences ending in gamma whose previous entry is >= alpha.
inline std::size_t kappa(const WalkerPresentation& P, const Ordinal& gamma,
                         const Ordinal& alpha) {
    if (!(gamma < alpha))
        throw Error(Errc::not_materialized,
                    "kappa needs gamma < alpha, got " + gamma.to_string() +
                        " and " + alpha.to_string());
    detail::require_materialized(P, alpha);
    detail::require_materialized(P, gamma);
    std::size_t count = 0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const auto& s = P.sequence(i);
        if (s.size() >= 2 && s.back() == gamma && s[s.size() - 2] >= alpha)
            ++count;
    }
    return count;
}

/// One block of P_beta / X_alpha: `copies` copies of P_gamma. Each renaming
/// maps surviving generators of P_beta to generator ids of P_gamma.
struct QuotientSummand {
    Ordinal gamma;
    std::size_t copies = 0;
    std::vector<std::map<std::string, std::string>> renamings;
};

/// The forest of P_beta / X_alpha: generators whose last label is below alpha,
/// with parents in X_alpha removed.
inline ForestPresentation quotient_forest(const WalkerPresentation& P,
                                          const Ordinal& alpha) {
    detail::require_materialized(P, alpha);
    std::vector<std::pair<std::string, std::optional<std::string>>> nodes;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (!(P.last_label(i) < alpha))
            continue;
        auto parent = P.forest().parent(i);
        std::optional<std::string> pid;
        if (parent && P.last_label(*parent) < alpha)
            pid = P.forest().id(*parent);
        nodes.emplace_back(P.forest().id(i), pid);
    }
    return ForestPresentation::from_parents(P.p(), nodes);
}

inline std::vector<QuotientSummand> quotient_by_x_alpha(const WalkerPresentation& P,
                                                        const Ordinal& alpha) {
    detail::require_materialized(P, alpha);
    std::vector<QuotientSummand> out;
    // gamma runs over materialized labels below alpha in increasing order
    std::vector<Ordinal> gammas;
    for (const auto& l : P.labels())
        if (l < alpha)
            gammas.push_back(l);
    std::reverse(gammas.begin(), gammas.end());
    for (const auto& gamma : gammas) {
        QuotientSummand block{gamma, 0, {}};
        for (std::size_t i = 0; i < P.size(); ++i) {
            const auto& s = P.sequence(i);
            if (s.size() < 2 || s.back() != gamma || s[s.size() - 2] < alpha)
                continue;
            // root of a copy of P_gamma: rename s . rest to gamma . rest
            std::map<std::string, std::string> renaming;
            const std::size_t cut = s.size() - 1;
            for (std::size_t j = 0; j < P.size(); ++j) {
                const auto& t = P.sequence(j);
                if (t.size() < s.size() ||
                    !std::equal(s.begin(), s.end(), t.begin()))
                    continue;
                std::vector<Ordinal> renamed(t.begin() +
                                                 static_cast<std::ptrdiff_t>(cut),
                                             t.end());
                renaming.emplace(P.forest().id(j), sequence_id(renamed));
            }
            block.renamings.push_back(std::move(renaming));
            ++block.copies;
        }
        out.push_back(std::move(block));
    }
    return out;
}

/// P_beta / <beta>, one copy of P_gamma per materialized gamma < beta.
inline std::vector<QuotientSummand> quotient_by_top(const WalkerPresentation& P) {
    return quotient_by_x_alpha(P, P.beta());
}

/// The finite forest on an ancestor-closed set of generators.
inline ForestPresentation finite_restriction(const WalkerPresentation& P,
                                             const std::set<std::string>& ids) {
    std::vector<std::pair<std::string, std::optional<std::string>>> nodes;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const auto& id = P.forest().id(i);
        if (!ids.count(id))
            continue;
        std::optional<std::string> pid;
        if (auto parent = P.forest().parent(i)) {
            pid = P.forest().id(*parent);
            if (!ids.count(*pid))
                throw Error(Errc::not_ancestor_closed,
                            "'" + id + "' without its parent '" + *pid + "'");
        }
        nodes.emplace_back(id, pid);
    }
    for (const auto& id : ids)
        if (!P.forest().find(id))
            throw Error(Errc::unknown_generator, "'" + id + "'");
    auto forest = ForestPresentation::from_parents(P.p(), nodes);
    std::vector<Generator> gens = forest.generators();
    for (auto& g : gens)
        g.label = P.last_label(P.forest().index_of(g.id));
    return ForestPresentation(P.p(), std::move(gens));
}

} // namespace walker
