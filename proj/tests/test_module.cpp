#include "support/oracle.hpp"

#include "walker/filtration.hpp"
#include "walker/linalg.hpp"
#include "walker/module.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace walker;

namespace {

/// Span of coordinate vectors by closure under addition.
std::set<Coords> brute_span(const FiniteModule& G, const std::vector<Coords>& gens) {
    std::set<Coords> s{G.zero()};
    std::vector<Coords> frontier{G.zero()};
    while (!frontier.empty()) {
        std::vector<Coords> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                Coords y = G.add(x, G.normalize(g));
                if (s.insert(y).second)
                    next.push_back(y);
            }
        frontier = std::move(next);
    }
    return s;
}

Coords random_coords(const FiniteModule& G, std::mt19937_64& rng) {
    Coords c(G.rank());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(G.coordinate_modulus(i)));
    return c;
}

std::vector<Coords> random_gens(const FiniteModule& G, std::mt19937_64& rng, int max) {
    std::vector<Coords> gens;
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(max + 1));
    for (int i = 0; i < k; ++i)
        gens.push_back(random_coords(G, rng));
    return gens;
}

const std::vector<FiniteModule>& small_modules() {
    static const std::vector<FiniteModule> ms{
        FiniteModule(2, {3, 1}),       FiniteModule(2, {2, 2}),
        FiniteModule(2, {2, 1, 1}),    FiniteModule(3, {2, 1}),
        FiniteModule(2, {4}),          FiniteModule(3, {1, 1, 1}),
        FiniteModule(5, {2}),          FiniteModule(2, {3, 2})};
    return ms;
}

} // namespace

TEST(PowerRing, Arithmetic) {
    const PowerRing r(3, 4);
    EXPECT_EQ(r.modulus(), 81);
    EXPECT_EQ(r.valuation(0), 4u);
    EXPECT_EQ(r.valuation(27), 3u);
    EXPECT_EQ(r.valuation(18), 2u);
    EXPECT_EQ(r.reduce(static_cast<Wide>(-1)), 80);
    for (std::int64_t u : {1, 2, 4, 5, 7, 80})
        EXPECT_EQ(r.mul(u, r.inverse(u)), 1);
}

TEST(PowerRing, RefusesOverflowingModulus) {
    EXPECT_THROW(PowerRing(2, 63), Error);
    EXPECT_NO_THROW(PowerRing(2, 40));
}

TEST(HowellForm, MembershipMatchesBruteForce) {
    std::mt19937_64 rng(1);
    for (const auto& G : small_modules())
        for (int t = 0; t < 25; ++t) {
            const auto gens = random_gens(G, rng, 3);
            const Submodule N(G, gens);
            const auto span = brute_span(G, gens);
            unsigned logs = 0;
            for (std::size_t c = span.size(); c > 1; c /= G.p())
                ++logs;
            EXPECT_EQ(N.log_order(), logs);
            for (const auto& x : enumerate_elements(G, 1 << 12))
                EXPECT_EQ(N.contains(x), span.count(x) == 1);
        }
}

TEST(HowellForm, CanonicalForEqualSpans) {
    std::mt19937_64 rng(2);
    for (const auto& G : small_modules())
        for (int t = 0; t < 20; ++t) {
            auto gens = random_gens(G, rng, 3);
            const Submodule a(G, gens);
            // same span from a shuffled, padded generating set
            auto more = gens;
            for (const auto& g : gens)
                more.push_back(G.add(g, g));
            std::shuffle(more.begin(), more.end(), rng);
            more.push_back(G.zero());
            const Submodule b(G, more);
            EXPECT_EQ(a.basis().rows(), b.basis().rows());
            EXPECT_TRUE(a == b);
        }
}

TEST(HowellForm, ReduceGivesLexLeastCosetMember) {
    std::mt19937_64 rng(3);
    for (const auto& G : small_modules())
        for (int t = 0; t < 15; ++t) {
            const auto gens = random_gens(G, rng, 2);
            const Submodule N(G, gens);
            const auto span = brute_span(G, gens);
            const Coords x = random_coords(G, rng);
            Coords best = x;
            for (const auto& n : span)
                best = std::min(best, G.add(x, n));
            EXPECT_EQ(N.reduce(x), best);
        }
}

TEST(Smith, TransformIsInvertibleAndDivisible) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
        const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
        BigMatrix a(rows, std::vector<BigInt>(cols));
        for (auto& r : a)
            for (auto& v : r)
                v = static_cast<int>(rng() % 19) - 9;
        const auto s = smith_normal_form(a, cols);
        for (std::size_t i = 0; i < cols; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                BigInt acc = 0;
                for (std::size_t k = 0; k < cols; ++k)
                    acc += s.transform[i][k] * s.inverse_transform[k][j];
                EXPECT_EQ(acc, i == j ? 1 : 0);
            }
        for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i)
            if (s.diagonal[i] != 0) {
                EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
            }
        if (rows == cols && rows == 2) {
            BigInt det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if (det < 0)
                det = -det;
            EXPECT_EQ(s.diagonal[0] * s.diagonal[1], det);
        }
    }
}

TEST(Realize, MatchesDigitOracle) {
    for (std::uint64_t p : {2, 3})
        for (const auto& parent : oracle::all_forests(5)) {
            const auto F = oracle::to_forest(p, parent);
            const FiniteModule R = realize(F);
            const oracle::DigitModule D(p, parent);
            const oracle::Lattice L(D);
            EXPECT_EQ(R.exponents(), L.invariants(L.whole()));
            EXPECT_EQ(R.log_order(), F.size());
            // relations hold in coordinates
            for (std::size_t g = 0; g < F.size(); ++g) {
                const Coords pg = R.scale(R.generator_coords(g), static_cast<std::int64_t>(p));
                EXPECT_EQ(pg, F.parent(g) ? R.generator_coords(*F.parent(g)) : R.zero());
                EXPECT_EQ(oracle::from_coords(D, R, R.generator_coords(g)), D.generator(g));
            }
            // the back-translation inverts the forward one on unit vectors
            for (std::size_t k = 0; k < R.rank(); ++k) {
                Coords acc = R.zero();
                for (std::size_t g = 0; g < F.size(); ++g)
                    acc = R.add(acc, R.scale(R.generator_coords(g), R.generators().from_coords[k][g]));
                EXPECT_EQ(acc, R.unit(k));
            }
        }
}

TEST(Submodule, LatticeOperationsMatchOracle) {
    std::mt19937_64 rng(5);
    for (const auto& parent : oracle::all_forests(4)) {
        const auto F = oracle::to_forest(2, parent);
        const FiniteModule R = realize(F);
        const oracle::DigitModule D(2, parent);
        const oracle::Lattice L(D);
        for (int t = 0; t < 6; ++t) {
            const Submodule A(R, random_gens(R, rng, 2));
            const Submodule B(R, random_gens(R, rng, 2));
            const auto a = oracle::to_set(L, A), b = oracle::to_set(L, B);
            EXPECT_EQ(oracle::to_set(L, sum(A, B)), L.sum(a, b));
            EXPECT_EQ(oracle::to_set(L, intersection(A, B)), oracle::Lattice::meet(a, b));
            EXPECT_EQ(oracle::to_set(L, scale(A, 1)), L.multiples(a, 1));
            EXPECT_EQ(oracle::to_set(L, torsion_part(A, 1)), L.socle(a));
            EXPECT_EQ(invariants(A), L.invariants(a));
            EXPECT_EQ(A.contains(B), oracle::Lattice::meet(a, b) == b);
        }
    }
}

TEST(Submodule, EnumerationCountsMatchOracle) {
    for (std::uint64_t p : {2, 3})
        for (const auto& parent : oracle::all_forests(4)) {
            const auto F = oracle::to_forest(p, parent);
            const FiniteModule R = realize(F);
            const oracle::DigitModule D(p, parent);
            const oracle::Lattice L(D);
            const auto lib = enumerate_subgroups(R, 1 << 12);
            const auto ref = L.subgroups();
            EXPECT_EQ(lib.size(), ref.size());
            std::set<oracle::Set> mapped;
            for (const auto& N : lib)
                mapped.insert(oracle::to_set(L, N));
            EXPECT_EQ(mapped.size(), ref.size());
        }
}

TEST(Submodule, KnownSubgroupCounts) {
    // Z/p + Z/p has p + 3 subgroups; Z/4 + Z/2 has 8
    EXPECT_EQ(enumerate_subgroups(FiniteModule(2, {1, 1}), 64).size(), 5u);
    EXPECT_EQ(enumerate_subgroups(FiniteModule(3, {1, 1}), 64).size(), 6u);
    EXPECT_EQ(enumerate_subgroups(FiniteModule(2, {2, 1}), 64).size(), 8u);
    EXPECT_EQ(enumerate_subgroups(FiniteModule(2, {3}), 64).size(), 4u);
}

TEST(Submodule, AmbientMismatchIsRejected) {
    const FiniteModule G(2, {2}), H(2, {1, 1});
    try {
        (void)sum(Submodule::whole(G), Submodule::whole(H));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ambient_mismatch);
    }
    EXPECT_THROW((void)G.add({1}, {1, 0}), Error);
}

TEST(Module, RejectsBadShapes) {
    EXPECT_THROW(FiniteModule(2, {1, 2}), Error);
    EXPECT_THROW(FiniteModule(2, {0}), Error);
    EXPECT_THROW(FiniteModule(1, {1}), Error);
}

TEST(Module, EnumerationBound) {
    const FiniteModule G(2, {5, 5});
    try {
        (void)enumerate_elements(G, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::too_large);
    }
    EXPECT_EQ(enumerate_elements(G, 1024).size(), 1024u);
    EXPECT_EQ(enumerate_elements(FiniteModule(2, {}), 1).size(), 1u);
}

TEST(LinearMap, KernelAndImageMatchBruteForce) {
    std::mt19937_64 rng(6);
    const FiniteModule S(2, {3, 1}), T(2, {2, 2});
    for (int t = 0; t < 40; ++t) {
        // images must respect orders: image of Z/2 lands in T[2], of Z/8 anywhere
        Coords a = random_coords(T, rng);
        Coords b = T.scale(random_coords(T, rng), 2);
        const LinearMap f(S, T, {a, b});
        std::set<Coords> ker, img;
        for (const auto& x : enumerate_elements(S, 64)) {
            const Coords y = f.apply(x);
            img.insert(y);
            if (T.is_zero(y))
                ker.insert(x);
        }
        for (const auto& x : enumerate_elements(S, 64))
            EXPECT_EQ(f.kernel().contains(x), ker.count(x) == 1);
        for (const auto& y : enumerate_elements(T, 64))
            EXPECT_EQ(f.image().contains(y), img.count(y) == 1);
    }
}

TEST(LinearMap, RejectsOrderViolations) {
    const FiniteModule S(2, {1}), T(2, {2});
    try {
        LinearMap(S, T, {{1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_morphism);
    }
}

TEST(PreimageSolver, LexLeastSolution) {
    std::mt19937_64 rng(7);
    const FiniteModule G(2, {3, 2, 1});
    for (unsigned s = 0; s <= 3; ++s) {
        const auto M = p_sigma(G, s).generators();
        std::vector<Coords> images;
        for (const auto& m : M)
            images.push_back(G.scale(m, 2));
        const PreimageSolver solver(G, G, M, images);
        const Submodule dom(G, M);
        for (const auto& y : enumerate_elements(G, 64)) {
            std::optional<Coords> best;
            for (const auto& x : enumerate_elements(G, 64))
                if (dom.contains(x) && G.scale(x, 2) == y && (!best || x < *best))
                    best = x;
            EXPECT_EQ(solver.solve(y), best) << "s=" << s << " y=" << format_coords(y);
        }
    }
}

TEST(Quotient, ProjectionAndSection) {
    std::mt19937_64 rng(8);
    for (const auto& G : small_modules())
        for (int t = 0; t < 10; ++t) {
            const Submodule N(G, random_gens(G, rng, 2));
            const Quotient q = quotient(N);
            EXPECT_EQ(q.module.log_order() + N.log_order(), G.log_order());
            const LinearMap pi = q.projection_map(G);
            EXPECT_TRUE(pi.kernel() == N);
            EXPECT_TRUE(pi.image() == Submodule::whole(q.module));
            for (std::size_t j = 0; j < q.section.size(); ++j)
                EXPECT_EQ(pi.apply(q.section[j]), q.module.unit(j));
        }
}
