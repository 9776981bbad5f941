#include "walker/io.hpp"
#include "walker/walker.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace walker;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex;
    ss.width(16);
    ss.fill('0');
    ss << v;
    return ss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::schema_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Enumeration cap: WALKER_RESOURCE_MB at ~64 bytes per enumerated item.
std::uint64_t resource_bound() {
    if (const char* mb = std::getenv("WALKER_RESOURCE_MB")) {
        const auto v = std::strtoull(mb, nullptr, 10);
        if (v > 0)
            return v * 16384;
    }
    return kDefaultHomBound;
}

class Report {
  public:
    explicit Report(std::string echo) { out_ << "# " << echo << "\n"; }

    void input(const std::string& name, const std::string& path) {
        out_ << "# input " << name << " " << path << " fnv1a64=" << hex64(fnv1a(slurp(path)))
             << "\n";
    }
    void line(const std::string& s) { out_ << s << "\n"; }
    void raw(const std::string& s) { out_ << s; }
    void check(const std::string& name, bool pass, const std::string& detail) {
        out_ << "CHECK " << name << (pass ? " PASS" : " FAIL");
        if (!detail.empty())
            out_ << " " << detail;
        out_ << "\n";
        ok_ = ok_ && pass;
    }
    [[nodiscard]] bool ok() const { return ok_; }
    [[nodiscard]] std::string str() const { return out_.str(); }

  private:
    std::ostringstream out_;
    bool ok_ = true;
};

std::vector<Ordinal> parse_labels(const std::string& csv) {
    std::vector<Ordinal> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(Ordinal::parse(item));
    return out;
}

std::string element_text(const io::LoadedModule& m, const Coords& c) {
    return format_element(from_coords(m.forest, m.realization, c));
}

// -- pbeta --------------------------------------------------------------------

struct PbetaArgs {
    std::string beta;
    std::uint64_t p = 2;
    std::string labels;
    bool realize_flag = false;
    bool ulm = false;
    std::string quotient;
    bool heights = false;
};

void cmd_pbeta(const PbetaArgs& a, Report& r) {
    const Ordinal beta = Ordinal::parse(a.beta);
    const LabelSet labels =
        a.labels.empty() ? LabelSet::all_finite() : LabelSet::of(parse_labels(a.labels));
    const WalkerPresentation P(beta, a.p, labels);
    const auto finite = beta.to_natural();
    r.line("beta: " + beta.to_string());
    r.line("p: " + std::to_string(a.p));
    r.line("generators: " + std::to_string(P.size()));
    if (finite)
        r.check("generator_count", P.size() == (std::size_t{1} << *finite),
                std::to_string(P.size()) + " = 2^" + std::to_string(*finite));

    const FiniteModule R = realize(P.forest());
    if (a.realize_flag) {
        r.line("invariants: " + format_exponents(R.exponents()));
        if (finite) {
            const unsigned len = length(R);
            r.check("length", len == *finite + 1,
                    std::to_string(len) + " = beta+1");
            const unsigned top = p_sigma(R, static_cast<unsigned>(*finite)).log_order();
            r.check("top_order", top == 1, "log_p |p^beta P| = " + std::to_string(top));
        }
    }
    if (a.ulm) {
        const UlmProfile u = ulm_invariants(R);
        r.line("ulm: " + format_ulm_inline(u));
        r.raw(format_ulm_report(u, R));
        r.check("ulm_mass", ulm_mass(u) == R.log_order(),
                std::to_string(ulm_mass(u)) + " = " + std::to_string(R.log_order()));
    }
    if (a.heights) {
        bool all = true;
        for (std::size_t i = 0; i < P.size(); ++i) {
            const Ordinal closed = P.last_label(i);
            std::string line = "height " + P.forest().id(i) + " = " + closed.to_string();
            if (finite) {
                const Height h = height(R, R.generator_coords(i));
                all = all && h == Height::finite(closed);
                line += " (realized " + h.to_string() + ")";
            }
            r.line(line);
        }
        if (finite)
            r.check("heights", all, "closed form matches the realization");
    }
    if (!a.quotient.empty()) {
        const Ordinal alpha = Ordinal::parse(a.quotient);
        const auto xs = x_alpha(P, alpha);
        std::string list;
        for (const auto& id : xs)
            list += (list.empty() ? "" : " ") + id;
        r.line("X_" + alpha.to_string() + ": " + list);
        const auto blocks = quotient_by_x_alpha(P, alpha);
        std::string shape;
        for (const auto& b : blocks)
            shape += (shape.empty() ? "" : " + ") + std::string("P_") + b.gamma.to_string() +
                     "^" + std::to_string(b.copies);
        r.line("quotient: " + (shape.empty() ? std::string("0") : shape));
        if (finite) {
            const auto idx = x_alpha_indices(P, alpha);
            const Submodule X = span_generators(R, idx);
            r.check("x_alpha", X == p_sigma(R, alpha), "span of X_alpha = p^alpha P");
            std::vector<unsigned> predicted;
            for (const auto& b : blocks) {
                const auto e = realize(p_beta(b.gamma, a.p).forest()).exponents();
                for (std::size_t c = 0; c < b.copies; ++c)
                    predicted.insert(predicted.end(), e.begin(), e.end());
            }
            std::sort(predicted.begin(), predicted.end(), std::greater<>());
            const auto actual = quotient(X).module.exponents();
            r.check("quotient_invariants", actual == predicted,
                    format_exponents(actual) + " vs " + format_exponents(predicted));
        }
    }
}

// -- check --------------------------------------------------------------------

struct CheckArgs {
    std::string seq;
    std::string what = "balanced";
    std::string lambda = "w";
};

void lifting_check(const io::LoadedSequence& s, const ShortExactSequence& seq,
                   Report& r) {
    WalkerFamily family(seq.middle().p());
    Lifter lifter(seq, family);
    const unsigned top = length(seq.middle());
    for (unsigned beta = 0; beta <= top; ++beta) {
        const auto gens = hom_generators(family.walker(beta).forest_ptr(),
                                         family.realization(beta), seq.cokernel());
        for (const auto& f : gens) {
            auto res = lifter.lift(beta, f);
            if (!res) {
                const auto& o = *res.obstruction;
                r.check("lifting", false,
                        "beta=" + std::to_string(beta) + " sigma=" + std::to_string(o.sigma) +
                            " witness=" + element_text(s.B, seq.lift_coset(o.element)));
                return;
            }
        }
    }
    r.check("lifting", true, "every morphism P_beta -> C lifts, beta <= " +
                                  std::to_string(top));
}

void cmd_check(const CheckArgs& a, Report& r) {
    r.input("seq", a.seq);
    const auto s = io::sequence_from_json(io::read_file(a.seq));
    const Ordinal cutoff = Ordinal::parse(a.lambda);
    const ShortExactSequence seq(s.N);
    r.line("B: " + format_exponents(s.B.realization.exponents()));
    r.line("N: " + format_exponents(invariants(s.N)));
    r.line("C: " + format_exponents(seq.cokernel().exponents()));
    r.line("lambda: " + cutoff.to_string());
    auto report = [&](const std::string& name, const CheckResult& res) {
        std::string detail;
        if (!res.holds) {
            detail = "sigma=" + std::to_string(*res.sigma);
            if (res.witness)
                detail += " witness=" + element_text(s.B, *res.witness);
        }
        r.check(name, res.holds, detail);
    };
    if (a.what == "nice")
        report("nice", check_nice(seq, cutoff));
    else if (a.what == "isotypic")
        report("isotypic", check_isotypic(s.N, cutoff));
    else if (a.what == "balanced")
        report("balanced", check_balanced(seq, cutoff));
    else if (a.what == "criterion")
        report("criterion", check_balanced_criterion(seq, cutoff));
    else if (a.what == "lifting")
        lifting_check(s, seq, r);
    else
        throw Error(Errc::schema_error, "unknown --what " + a.what);
}

// -- lift ---------------------------------------------------------------------

struct LiftArgs {
    std::string seq;
    std::string hom;
    std::string out;
};

void cmd_lift(const LiftArgs& a, Report& r) {
    r.input("seq", a.seq);
    r.input("hom", a.hom);
    const auto s = io::sequence_from_json(io::read_file(a.seq));
    const auto m = io::morphism_from_json(io::read_file(a.hom));
    if (!m.source.walker)
        throw Error(Errc::schema_error, "morphism source must be a Walker module");
    if (!(*m.target.forest == *s.B.forest))
        throw Error(Errc::presentation_mismatch, "morphism target is not B");
    const ShortExactSequence seq(s.N);
    std::vector<Coords> images;
    for (const auto& y : m.images)
        images.push_back(seq.project(y));
    const Morphism f(m.source.forest, seq.cokernel(), std::move(images));
    const auto res = lift(seq, *m.source.walker, f);
    if (!res) {
        const auto& o = *res.obstruction;
        r.line("OBSTRUCTION sigma=" + std::to_string(o.sigma) +
               " element=" + element_text(s.B, seq.lift_coset(o.element)) + " path=" +
               [&] {
                   std::string p;
                   for (auto g : o.path)
                       p += (p.empty() ? "" : ".") + std::to_string(g);
                   return p.empty() ? std::string("top") : p;
               }());
        r.check("lift", false, "no preimage in p^sigma B[p]");
        return;
    }
    const auto json = io::morphism_to_json(m.source, s.B, res.morphism->images());
    r.line("LIFTED");
    r.raw(json.dump(2) + "\n");
    bool exact = true;
    for (std::size_t g = 0; g < f.images().size(); ++g)
        exact = exact && seq.project(res.morphism->image(g)) == f.image(g);
    r.check("lift", exact, "pi after lift equals f");
    if (!a.out.empty()) {
        std::ofstream(a.out) << json.dump(2) << "\n";
        r.line("# wrote " + a.out);
    }
}

// -- canonical ----------------------------------------------------------------

struct CanonicalArgs {
    unsigned n = 1;
    std::uint64_t p = 2;
    bool allow_large = false;
    std::string out_dir;
};

void cmd_canonical(const CanonicalArgs& a, Report& r) {
    const auto c = canonical_presentation(a.n, a.p, a.allow_large, resource_bound());
    const bool balanced = check_balanced(c.sequence, Ordinal::omega()).holds;
    const bool closed = closure(c.kernel, Ordinal::omega()) == c.kernel;
    r.line("T = " + c.decomposition() + "; balanced " + (balanced ? "PASS" : "FAIL") +
           "; closure " + (closed ? "PASS" : "FAIL"));
    r.line("T: " + std::to_string(c.total->size()) + " generators, invariants " +
           format_exponents(c.total_module.exponents()));
    r.line("K: " + format_exponents(invariants(c.kernel)));
    r.line("P_" + std::to_string(a.n) + ": " + format_exponents(c.target_module.exponents()));
    bool sizes = true;
    for (const auto& b : c.blocks) {
        const auto pred = hom_set_size(
            realize(p_beta(Ordinal::natural(b.beta), a.p).forest()), c.target_module);
        sizes = sizes && pred == b.copies;
    }
    r.check("hom_sizes", sizes, c.decomposition());
    const bool onto = c.image() == c.reachable();
    r.check("surjective", onto,
            "phi(T) = P_" + std::to_string(a.n) + "[p^" + std::to_string(a.n) + "]");
    r.check("balanced", balanced, "cutoff w");
    r.check("criterion", check_balanced_criterion(c.sequence, Ordinal::omega()).holds,
            "cutoff w");
    r.check("closure", closed, "closure(T,K) = K");
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        io::LoadedModule T{c.total, std::nullopt, c.total_module};
        io::Json gens = io::Json::array();
        for (const auto& g : c.kernel.generators())
            gens.push_back(io::element_to_json(from_coords(c.total, c.total_module, g)));
        const io::Json seq{{"B", io::module_to_json(T)}, {"N", {{"generators", gens}}}};
        const auto path = std::filesystem::path(a.out_dir) /
                          ("canonical_n" + std::to_string(a.n) + "_p" +
                           std::to_string(a.p) + ".json");
        std::ofstream(path) << seq.dump(2) << "\n";
        r.line("# wrote " + path.filename().string());
    }
}

// -- oracle -------------------------------------------------------------------

struct OracleArgs {
    std::string module;
    unsigned trials = 1000;
    std::uint64_t seed = 1;
};

void cmd_oracle(const OracleArgs& a, Report& r) {
    r.input("module", a.module);
    const auto m = io::module_from_json(io::read_file(a.module));
    const auto& F = *m.forest;
    const auto& G = m.realization;
    r.line("seed: " + std::to_string(a.seed));
    r.line("invariants: " + format_exponents(G.exponents()));
    std::mt19937_64 rng(a.seed);
    auto below = [&](std::uint64_t n) { return n ? rng() % n : 0; };
    auto random_element = [&] {
        Element::Terms raw;
        const std::size_t k = 1 + below(3);
        for (std::size_t i = 0; i < k && F.size(); ++i)
            raw[below(F.size())] += BigInt(static_cast<std::int64_t>(below(64))) - 32;
        return normalize(m.forest, raw);
    };
    unsigned agree = 0;
    for (unsigned t = 0; t < a.trials; ++t) {
        const Element x = random_element();
        const Element y = random_element();
        const BigInt c = static_cast<std::int64_t>(below(50)) - 25;
        const Coords cx = to_coords(G, x);
        const Coords cy = to_coords(G, y);
        bool ok = to_coords(G, add(x, y)) == G.add(cx, cy) &&
                  to_coords(G, scalar_mul(c, x)) == G.scale(cx, c) &&
                  to_coords(G, from_coords(m.forest, G, cx)) == cx &&
                  eq(G, add(x, negate(x)), Element(m.forest, {}));
        for (const auto& [g, v] : x.terms())
            for (const auto& [h, w] : x.terms())
                ok = ok && !F.is_ancestor(g, h) && v % F.p() != 0;
        agree += ok ? 1 : 0;
    }
    r.line(std::to_string(agree) + "/" + std::to_string(a.trials) + " agree");
    r.check("oracle", agree == a.trials, "normal form vs coordinates");
}

std::string echo(int argc, char** argv) {
    std::string s = "walker";
    for (int i = 1; i < argc; ++i)
        s += std::string(" ") + argv[i];
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walker modules, filtrations and lifting of simply presented torsion modules"};
    app.require_subcommand(1);

    PbetaArgs pb;
    auto* pbeta = app.add_subcommand("pbeta", "Build P_beta and report its structure");
    pbeta->add_option("--beta", pb.beta, "ordinal, e.g. 3 or w+1")->required();
    pbeta->add_option("--p", pb.p, "prime")->required();
    pbeta->add_option("--labels", pb.labels, "comma-separated label set (needed for infinite beta)");
    pbeta->add_flag("--realize", pb.realize_flag, "cyclic decomposition");
    pbeta->add_flag("--ulm", pb.ulm, "Ulm-Kaplansky invariants");
    pbeta->add_option("--quotient", pb.quotient, "describe P_beta / X_alpha");
    pbeta->add_flag("--heights", pb.heights, "generator heights");

    CheckArgs ck;
    auto* check = app.add_subcommand("check", "Filtration predicates on a sequence file");
    check->add_option("--seq", ck.seq, "sequence file")->required();
    check->add_option("--what", ck.what, "nice|isotypic|balanced|criterion|lifting")
        ->check(CLI::IsMember({"nice", "isotypic", "balanced", "criterion", "lifting"}));
    check->add_option("--lambda", ck.lambda, "cutoff ordinal (w = all sigma)");

    LiftArgs lf;
    auto* liftc = app.add_subcommand("lift", "Lift a morphism P_beta -> B/N to B");
    liftc->add_option("--seq", lf.seq, "sequence file")->required();
    liftc->add_option("--hom", lf.hom, "morphism file with target B")->required();
    liftc->add_option("--out", lf.out, "write the lifted morphism here");

    CanonicalArgs cn;
    auto* canon = app.add_subcommand("canonical", "Canonical presentation of P_n");
    canon->add_option("--n", cn.n, "n")->required();
    canon->add_option("--p", cn.p, "prime")->required();
    canon->add_flag("--allow-large", cn.allow_large, "permit n = 3");
    canon->add_option("--out-dir", cn.out_dir, "write the sequence file here");

    OracleArgs oc;
    auto* oracle = app.add_subcommand("oracle", "Random normal-form vs coordinate checks");
    oracle->add_option("--module", oc.module, "module file")->required();
    oracle->add_option("--trials", oc.trials, "number of trials");
    oracle->add_option("--seed", oc.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    Report report(echo(argc, argv));
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (*pbeta)
            cmd_pbeta(pb, report);
        else if (*check)
            cmd_check(ck, report);
        else if (*liftc)
            cmd_lift(lf, report);
        else if (*canon)
            cmd_canonical(cn, report);
        else if (*oracle)
            cmd_oracle(oc, report);
        code = report.ok() ? 0 : 1;
    } catch (const Error& e) {
        report.line(std::string("ERROR ") + e.what());
        code = 2;
    }
    std::cout << report.str();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cerr << "time: " << ms << " ms\n";
    return code;
}
