#include "support/ordinals.hpp"

#include "walker/ordinal.hpp"

#include <gtest/gtest.h>

using walker::Comparison;
using walker::Errc;
using walker::Error;
using walker::Ordinal;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

} // namespace

TEST(Ordinal, CompareExamples) {
    EXPECT_EQ(cmp(Ordinal::omega(), Ordinal::natural(5)), Comparison::greater);
    EXPECT_EQ(cmp(O("w*2+1"), O("w*2+1")), Comparison::equal);
    EXPECT_EQ(cmp(O("w^2"), O("w*9+7")), Comparison::greater);
    EXPECT_EQ(cmp(O("3"), O("w")), Comparison::less);
}

TEST(Ordinal, AddExamples) {
    EXPECT_EQ(add(O("1"), O("w")), O("w"));
    EXPECT_EQ(add(O("w"), O("1")).to_string(), "w + 1");
    EXPECT_EQ(add(O("w*2+3"), O("w")), O("w*3"));
    EXPECT_EQ(add(O("w^2 + w"), O("w^2*2")), O("w^2*3"));
}

TEST(Ordinal, LeftSubExamples) {
    EXPECT_EQ(left_sub(O("w"), O("w*2")), O("w"));
    EXPECT_EQ(left_sub(O("3"), O("w")), O("w"));
    EXPECT_EQ(left_sub(O("w+1"), O("w+4")), O("3"));
    EXPECT_EQ(left_sub(O("w^2+w"), O("w^2+w")), O("0"));
}

TEST(Ordinal, LeftSubUnderflow) {
    try {
        (void)left_sub(O("w+1"), O("w"));
        FAIL() << "expected Underflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::underflow);
    }
}

TEST(Ordinal, SuccessorAndKinds) {
    EXPECT_TRUE(O("w").is_limit());
    EXPECT_FALSE(O("w+1").is_limit());
    EXPECT_FALSE(O("0").is_limit());
    EXPECT_FALSE(O("7").is_limit());
    EXPECT_EQ(O("w*2").successor(), O("w*2+1"));
    EXPECT_TRUE(O("0").is_finite());
    EXPECT_TRUE(O("12").is_finite());
    EXPECT_FALSE(O("w").is_finite());
    EXPECT_EQ(O("12").to_natural(), 12u);
    EXPECT_FALSE(O("w+12").to_natural().has_value());
}

TEST(Ordinal, PrinterForms) {
    EXPECT_EQ(Ordinal().to_string(), "0");
    EXPECT_EQ(O("w^2*3 + w + 4").to_string(), "w^2*3 + w + 4");
    EXPECT_EQ(O("  w^2*3+w+4 ").to_string(), "w^2*3 + w + 4");
    EXPECT_EQ(O("w*1").to_string(), "w");
    EXPECT_EQ(O("w^w").to_string(), "w^w");
    EXPECT_EQ(O("w^(w+1)*2").to_string(), "w^(w + 1)*2");
    EXPECT_EQ(O("w^1").to_string(), "w");
    EXPECT_EQ(O("2+w").to_string(), "w");
}

TEST(Ordinal, ParseErrorsCarryPosition) {
    for (const char* bad : {"", "w^", "w*", "w*0", "3x", "w+", "(w)", "w^(w", "-1"}) {
        try {
            (void)O(bad);
            FAIL() << "accepted '" << bad << "'";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::parse_error) << bad;
            EXPECT_NE(std::string(e.what()).find("position"), std::string::npos) << bad;
        }
    }
}

TEST(Ordinal, RoundTripRandom) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Ordinal a = oracle::random_ordinal(rng);
        EXPECT_EQ(Ordinal::parse(a.to_string()), a);
        EXPECT_EQ(Ordinal::parse(a.to_string()).to_string(), a.to_string());
    }
}

TEST(Ordinal, AgreesWithPolynomialModel) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 3000; ++i) {
        const auto a = oracle::random_poly(rng);
        const auto b = oracle::random_poly(rng);
        const Ordinal oa = oracle::to_ordinal(a), ob = oracle::to_ordinal(b);
        EXPECT_EQ(oa + ob, oracle::to_ordinal(oracle::poly_add(a, b)));
        const int c = oracle::poly_cmp(a, b);
        EXPECT_EQ(oa < ob, c < 0);
        EXPECT_EQ(oa == ob, c == 0);
    }
}

TEST(Ordinal, FiniteAgreesWithIntegers) {
    for (std::uint64_t a = 0; a < 30; ++a)
        for (std::uint64_t b = 0; b < 30; ++b) {
            EXPECT_EQ(Ordinal::natural(a) + Ordinal::natural(b), Ordinal::natural(a + b));
            EXPECT_EQ(Ordinal::natural(a) < Ordinal::natural(b), a < b);
            if (a <= b) {
                EXPECT_EQ(left_sub(Ordinal::natural(a), Ordinal::natural(b)),
                          Ordinal::natural(b - a));
            }
        }
}

TEST(Ordinal, AlgebraicLaws) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const Ordinal a = oracle::random_ordinal(rng);
        const Ordinal b = oracle::random_ordinal(rng);
        const Ordinal c = oracle::random_ordinal(rng);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(left_sub(a, a + b), b);
        EXPECT_TRUE(a <= a + b);
        EXPECT_TRUE(b <= a + b);
        if (a < b && b < c) {
            EXPECT_TRUE(a < c);
        }
        EXPECT_EQ(a < b, !(b <= a));
        EXPECT_EQ(a.successor().is_successor(), true);
        EXPECT_TRUE(a < a.successor());
    }
}
