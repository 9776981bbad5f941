#pragma once

// JSON files for modules, elements, submodules, sequences and morphisms.
//
//   module     {"p": 2, "generators": [{"id": "2·1", "parent": "2"}, ...]}
//              optional per generator: "power" (p^power * id = parent)
//              Walker modules may give {"beta": "w", "labels": ["0", "1"]}
//   element    {"terms": {"2·1·0": 3, "2·0": 1}}
//   submodule  {"module": <module>, "generators": [<element>, ...]}
//   sequence   {"B": <module>, "N": <submodule>}
//   morphism   {"source": <module>, "target": <module>, "images": {id: <element>}}

#include "walker/elements.hpp"
#include "walker/error.hpp"
#include "walker/homlift.hpp"
#include "walker/module.hpp"
#include "walker/presentation.hpp"
#include "walker/purity.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace walker::io {

using Json = nlohmann::ordered_json;

/// A presentation together with its realization.
struct LoadedModule {
    std::shared_ptr<const ForestPresentation> forest;
    std::optional<WalkerPresentation> walker;
    FiniteModule realization;
};

struct LoadedSequence {
    LoadedModule B;
    Submodule N;
};

namespace detail {

[[noreturn]] inline void schema(const std::string& what) {
    throw Error(Errc::schema_error, what);
}

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        schema(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline std::string as_string(const Json& j, const char* what) {
    if (!j.is_string())
        schema(std::string(what) + " must be a string");
    return j.get<std::string>();
}

inline std::uint64_t as_prime(const Json& j) {
    if (!j.is_number_unsigned())
        schema("\"p\" must be a positive integer");
    const auto p = j.get<std::uint64_t>();
    if (p < 2)
        schema("\"p\" must be at least 2");
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            schema("\"p\" = " + std::to_string(p) + " is not prime");
    return p;
}

inline BigInt as_coefficient(const Json& j) {
    if (j.is_number_integer())
        return BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        try {
            return BigInt(s);
        } catch (const std::exception&) {
            schema("bad coefficient \"" + s + "\"");
        }
    }
    schema("coefficients must be integers");
}

} // namespace detail

inline Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::parse_error, e.what());
    }
}

inline Json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::schema_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

inline LoadedModule module_from_json(const Json& j) {
    const std::uint64_t p = detail::as_prime(detail::field(j, "p"));
    if (j.contains("beta")) {
        const Ordinal beta = Ordinal::parse(detail::as_string(j.at("beta"), "\"beta\""));
        LabelSet labels = LabelSet::all_finite();
        if (j.contains("labels")) {
            if (!j.at("labels").is_array())
                detail::schema("\"labels\" must be an array");
            std::vector<Ordinal> ls;
            for (const auto& l : j.at("labels"))
                ls.push_back(Ordinal::parse(detail::as_string(l, "label")));
            labels = LabelSet::of(std::move(ls));
        }
        WalkerPresentation P(beta, p, labels);
        if (j.contains("generators")) {
            // an explicit generator list must agree with the construction
            const auto listed = module_from_json(Json{{"p", p}, {"generators", j.at("generators")}});
            if (!(*listed.forest == P.forest()))
                detail::schema("generators do not match P_" + beta.to_string());
        }
        auto forest = P.forest_ptr();
        FiniteModule R = realize(*forest);
        return {std::move(forest), std::move(P), std::move(R)};
    }
    const Json& gens = detail::field(j, "generators");
    if (!gens.is_array())
        detail::schema("\"generators\" must be an array");
    std::vector<SimpleRelation> rels;
    for (const auto& g : gens) {
        SimpleRelation r;
        r.generator = detail::as_string(detail::field(g, "id"), "\"id\"");
        if (g.contains("parent") && !g.at("parent").is_null())
            r.target = detail::as_string(g.at("parent"), "\"parent\"");
        if (g.contains("power")) {
            if (!g.at("power").is_number_unsigned() || g.at("power").get<unsigned>() == 0)
                detail::schema("\"power\" must be a positive integer");
            r.power = g.at("power").get<unsigned>();
        }
        rels.push_back(std::move(r));
    }
    auto forest = std::make_shared<const ForestPresentation>(
        ForestPresentation::from_relations(p, rels));
    FiniteModule R = realize(*forest);
    return {std::move(forest), std::nullopt, std::move(R)};
}

inline Json module_to_json(const ForestPresentation& F,
                           const WalkerPresentation* walker = nullptr) {
    Json j;
    j["p"] = F.p();
    if (walker) {
        j["beta"] = walker->beta().to_string();
        if (!walker->label_set().is_all_finite()) {
            Json ls = Json::array();
            for (auto it = walker->labels().rbegin(); it != walker->labels().rend(); ++it)
                ls.push_back(it->to_string());
            j["labels"] = ls;
        }
    }
    Json gens = Json::array();
    for (std::size_t i = 0; i < F.size(); ++i) {
        Json g;
        g["id"] = F.id(i);
        g["parent"] = F.parent(i) ? Json(F.id(*F.parent(i))) : Json(nullptr);
        gens.push_back(g);
    }
    j["generators"] = gens;
    return j;
}

inline Json module_to_json(const LoadedModule& m) {
    return module_to_json(*m.forest, m.walker ? &*m.walker : nullptr);
}

inline Element element_from_json(const LoadedModule& m, const Json& j) {
    const Json& terms = detail::field(j, "terms");
    if (!terms.is_object())
        detail::schema("\"terms\" must be an object");
    std::map<std::string, BigInt> raw;
    for (const auto& [id, c] : terms.items())
        raw[id] += detail::as_coefficient(c);
    return normalize(m.forest, raw);
}

inline Json element_to_json(const Element& x) {
    Json terms = Json::object();
    for (const auto& [id, c] : x.terms_by_id()) {
        if (c <= std::numeric_limits<std::int64_t>::max())
            terms[id] = static_cast<std::int64_t>(c);
        else
            terms[id] = c.str();
    }
    return Json{{"terms", terms}};
}

inline Submodule submodule_from_json(const LoadedModule& m, const Json& j) {
    const Json& gens = detail::field(j, "generators");
    if (!gens.is_array())
        detail::schema("\"generators\" must be an array");
    std::vector<Element> elems;
    for (const auto& e : gens)
        elems.push_back(element_from_json(m, e));
    return span_elements(m.realization, elems);
}

inline LoadedSequence sequence_from_json(const Json& j) {
    LoadedModule B = module_from_json(detail::field(j, "B"));
    const Json& n = detail::field(j, "N");
    if (n.contains("module")) {
        const LoadedModule other = module_from_json(n.at("module"));
        if (!(*other.forest == *B.forest))
            detail::schema("\"N\" lives in a different module than \"B\"");
    }
    Submodule N = submodule_from_json(B, n);
    return {std::move(B), std::move(N)};
}

/// A morphism file with images given as elements of the target presentation.
struct LoadedMorphism {
    LoadedModule source;
    LoadedModule target;
    std::vector<Coords> images; // in the realization of the target, per source generator
};

inline LoadedMorphism morphism_from_json(const Json& j) {
    LoadedMorphism out{module_from_json(detail::field(j, "source")),
                       module_from_json(detail::field(j, "target")),
                       {}};
    const Json& images = detail::field(j, "images");
    if (!images.is_object())
        detail::schema("\"images\" must be an object");
    const auto& F = *out.source.forest;
    out.images.assign(F.size(), out.target.realization.zero());
    for (const auto& [id, e] : images.items())
        out.images[F.index_of(id)] =
            to_coords(out.target.realization, element_from_json(out.target, e));
    return out;
}

inline Json morphism_to_json(const LoadedModule& source, const LoadedModule& target,
                             const std::vector<Coords>& images) {
    Json im = Json::object();
    for (std::size_t g = 0; g < images.size(); ++g)
        im[source.forest->id(g)] =
            element_to_json(from_coords(target.forest, target.realization, images[g]));
    return Json{{"source", module_to_json(source)},
                {"target", module_to_json(target)},
                {"images", im}};
}

} // namespace walker::io
