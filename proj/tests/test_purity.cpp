#include "support/oracle.hpp"

#include "walker/filtration.hpp"
#include "walker/purity.hpp"

#include <gtest/gtest.h>

using namespace walker;

namespace {

Ordinal N(std::uint64_t n) { return Ordinal::natural(n); }
const Ordinal w = Ordinal::omega();

} // namespace

TEST(Ulm, WalkerExamples) {
    const auto u1 = ulm_invariants(realize(p_beta(N(1), 2).forest()));
    EXPECT_EQ(u1.values, (std::map<Ordinal, unsigned>{{N(0), 0}, {N(1), 1}}));
    const FiniteModule R2 = realize(p_beta(N(2), 2).forest());
    const auto u2 = ulm_invariants(R2);
    EXPECT_EQ(u2.values, (std::map<Ordinal, unsigned>{{N(0), 1}, {N(1), 0}, {N(2), 1}}));
    EXPECT_EQ(format_ulm_inline(u2), "0:1 1:0 2:1");
    EXPECT_EQ(ulm_mass(u2), R2.log_order());
    EXPECT_NE(format_ulm_report(u2, R2).find("OK"), std::string::npos);
    const auto u3 = ulm_invariants(FiniteModule(3, {1, 1}));
    EXPECT_EQ(u3.values, (std::map<Ordinal, unsigned>{{N(0), 2}}));
    EXPECT_TRUE(ulm_invariants(FiniteModule(2, {})).values.empty());
}

TEST(Ulm, MatchesOracleAndMass) {
    for (std::uint64_t p : {2, 3})
        for (const auto& parent : oracle::all_forests(5)) {
            const FiniteModule R = realize(oracle::to_forest(p, parent));
            const oracle::DigitModule D(p, parent);
            const oracle::Lattice L(D);
            const auto u = ulm_invariants(R);
            std::vector<unsigned> got;
            for (const auto& [s, f] : u.values)
                got.push_back(f);
            EXPECT_EQ(got, L.ulm());
            EXPECT_EQ(ulm_mass(u), R.log_order());
            EXPECT_EQ(length(R), L.length());
        }
}

TEST(Filtration, TorsionPartsAndDescent) {
    const FiniteModule G(2, {3, 1});
    EXPECT_EQ(torsion_part(G, 1).log_order(), 2u);
    EXPECT_EQ(torsion_part(G, 2).log_order(), 3u);
    EXPECT_TRUE(torsion_part(G, 3) == Submodule::whole(G));
    EXPECT_TRUE(torsion_part(G, 0).is_zero());
    for (unsigned s = 0; s < 5; ++s)
        EXPECT_TRUE(p_sigma(G, s).contains(p_sigma(G, s + 1)));
    EXPECT_EQ(height(FiniteModule(2, {2}), Coords{2}), Height::finite(N(1)));
    EXPECT_EQ(height(FiniteModule(3, {3}), Coords{9}), Height::finite(N(2)));
}

TEST(Filtration, ClosureExamples) {
    const FiniteModule G(2, {2});
    const Submodule half(G, {Coords{2}});
    // p^2 G = 0, so the closure of N below w is N itself
    EXPECT_TRUE(closure(half, w) == half);
    EXPECT_TRUE(closure(half, N(1)) == Submodule::whole(G));
    EXPECT_TRUE(closure(Submodule(G, {}), N(0)) == Submodule::whole(G));
    for (const auto& parent : oracle::all_forests(4)) {
        const FiniteModule R = realize(oracle::to_forest(2, parent));
        for (const auto& S : enumerate_subgroups(R, 1 << 12))
            EXPECT_TRUE(closure(S, w) == S);
    }
}

TEST(Purity, ProperElements) {
    const FiniteModule G(2, {2});
    const Submodule zero(G, {});
    const Submodule half(G, {Coords{2}});
    EXPECT_TRUE(is_proper(zero, Coords{1}));
    EXPECT_TRUE(is_proper(zero, Coords{2}));
    // 2 has height 1 and lies in N
    EXPECT_FALSE(is_proper(half, Coords{2}));
    EXPECT_TRUE(is_proper(half, Coords{1}));
    EXPECT_TRUE(is_proper(half, Coords{0}));
    // 0 attains the infinite height of its own coset
    EXPECT_TRUE(is_proper(zero, Coords{0}));
}

TEST(Purity, IsotypicExamples) {
    const FiniteModule Z4(2, {2});
    const Submodule socle(Z4, {Coords{2}});
    const auto r = check_isotypic(socle, w);
    EXPECT_FALSE(r.holds);
    EXPECT_EQ(r.sigma, std::optional<unsigned>(1));
    EXPECT_FALSE(is_lambda_balanced(socle, w));
    EXPECT_FALSE(balanced_criterion(socle, w));
    EXPECT_TRUE(is_lambda_isotypic(socle, N(1)));

    for (std::uint64_t p : {2, 3}) {
        const FiniteModule G(p, {3, 1});
        const Submodule M(G, {Coords{static_cast<std::int64_t>(p), 1}});
        EXPECT_TRUE(is_lambda_isotypic(M, N(2)));
        EXPECT_FALSE(is_lambda_isotypic(M, N(3)));
        EXPECT_EQ(check_isotypic(M, w).sigma, std::optional<unsigned>(2));
    }
}

TEST(Purity, CriterionNeedsLimit) {
    const FiniteModule Z4(2, {2});
    const Submodule socle(Z4, {Coords{2}});
    try {
        (void)balanced_criterion(socle, N(5));
        FAIL() << "expected NotLimitOrdinal";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_limit_ordinal);
        EXPECT_NE(std::string(e.what()).find("got 5"), std::string::npos);
    }
    EXPECT_NO_THROW((void)balanced_criterion(socle, Ordinal::parse("w*2")));
}

TEST(Purity, SummandsAreBalanced) {
    const FiniteModule G(3, {3, 2, 1});
    for (std::size_t i = 0; i < G.rank(); ++i) {
        const Submodule S(G, {G.unit(i)});
        EXPECT_TRUE(is_lambda_balanced(S, w));
        EXPECT_TRUE(balanced_criterion(S, w));
    }
    EXPECT_TRUE(is_lambda_balanced(Submodule(G, {}), w));
    EXPECT_TRUE(is_lambda_balanced(Submodule::whole(G), w));
}

TEST(Purity, SequenceAccounting) {
    const FiniteModule G(2, {3, 1});
    const ShortExactSequence seq(Submodule(G, {Coords{2, 1}}));
    EXPECT_EQ(seq.kernel().log_order() + seq.cokernel().log_order(), G.log_order());
    for (const auto& c : enumerate_elements(seq.cokernel(), 64))
        EXPECT_EQ(seq.project(seq.lift_coset(c)), seq.cokernel().normalize(c));
    for (const auto& x : seq.kernel().generators())
        EXPECT_TRUE(seq.cokernel().is_zero(seq.project(x)));
}

// Every subgroup of every small forest module, against brute force.
TEST(Purity, PredicatesMatchOracle) {
    for (std::uint64_t p : {2, 3})
        for (const auto& parent : oracle::all_forests(p == 2 ? 5 : 4)) {
            const FiniteModule R = realize(oracle::to_forest(p, parent));
            const oracle::DigitModule D(p, parent);
            const oracle::Lattice L(D);
            const unsigned len = L.length();
            for (const auto& S : enumerate_subgroups(R, 1 << 12)) {
                const auto s = oracle::to_set(L, S);
                const ShortExactSequence seq(S);
                for (unsigned c = 0; c <= len + 1; ++c) {
                    const bool iso = L.isotypic(s, c);
                    EXPECT_EQ(check_isotypic(S, N(c)).holds, iso);
                    // finite length: p^s(G/N) = (p^s G + N)/N always
                    EXPECT_TRUE(check_nice(seq, N(c)).holds);
                    EXPECT_EQ(check_balanced(seq, N(c)).holds, iso);
                }
                const bool bal = L.isotypic(s, len + 1);
                EXPECT_EQ(check_balanced(seq, w).holds, bal);
                EXPECT_EQ(check_balanced_criterion(seq, w).holds, bal);
                EXPECT_EQ(L.criterion(s, len + 1), bal);
            }
        }
}

TEST(Purity, WitnessesFail) {
    for (const auto& parent : oracle::all_forests(4)) {
        const FiniteModule R = realize(oracle::to_forest(2, parent));
        for (const auto& S : enumerate_subgroups(R, 1 << 12)) {
            const auto r = check_isotypic(S, w);
            if (r.holds)
                continue;
            // the witness lies in p^sigma G and N but not in p^sigma N
            const unsigned s = *r.sigma;
            EXPECT_TRUE(p_sigma(R, s).contains(*r.witness));
            EXPECT_TRUE(S.contains(*r.witness));
            EXPECT_FALSE(p_sigma(S, N(s)).contains(*r.witness));
            EXPECT_NE(r.describe().find("fails at sigma="), std::string::npos);
        }
    }
}
