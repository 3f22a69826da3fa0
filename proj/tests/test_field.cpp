#include <gtest/gtest.h>

#include <random>
#include <set>

#include "evo/field.hpp"
#include "support.hpp"

namespace evo {
namespace {

TEST(FieldDescriptor, ParsesAndPrints) {
    EXPECT_EQ(FieldDescriptor::parse("gf:7").to_string(), "gf:7");
    EXPECT_EQ(FieldDescriptor::parse("q").to_string(), "q");
    EXPECT_TRUE(FieldDescriptor::parse("gf:2").is_finite());
    EXPECT_EQ(FieldDescriptor::parse("Q").order(), 0u);
    EXPECT_THROW(FieldDescriptor::parse("gf:4"), InvalidArgument);
    EXPECT_THROW(FieldDescriptor::parse("gf:"), InvalidArgument);
    EXPECT_THROW(FieldDescriptor::parse("gf:3x"), InvalidArgument);
    EXPECT_THROW(FieldDescriptor::parse("r"), InvalidArgument);
    EXPECT_THROW(PrimeField(FieldDescriptor::rationals()), UnsupportedField);
}

TEST(PrimeField, Arithmetic) {
    PrimeField f(7);
    EXPECT_EQ(f.add(f.from_int(5), f.from_int(4)), f.from_int(2));
    EXPECT_EQ(f.from_int(-1), f.from_int(6));
    EXPECT_EQ(f.mul(f.from_int(3), f.inv(f.from_int(3))), f.one());
    EXPECT_EQ(f.parse("1/2"), f.from_int(4));
    EXPECT_THROW(f.inv(f.zero()), InvalidArgument);
    EXPECT_THROW(f.parse("x"), InvalidArgument);
}

TEST(PrimeField, FermatOnEveryElement) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        PrimeField f(p);
        for (const auto& x : elements(f)) EXPECT_EQ(f.pow(x, p), x) << "p=" << p;
    }
}

template <Field F>
void check_axioms(const F& f, std::mt19937_64& rng, const std::function<typename F::Element()>& draw) {
    for (int t = 0; t < 300; ++t) {
        const auto a = draw(), b = draw(), c = draw();
        EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        EXPECT_EQ(f.add(a, b), f.add(b, a));
        EXPECT_EQ(f.mul(a, b), f.mul(b, a));
        EXPECT_TRUE(f.is_zero(f.add(a, f.neg(a))));
        EXPECT_EQ(f.sub(a, b), f.add(a, f.neg(b)));
        if (!f.is_zero(a)) EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
        EXPECT_EQ(f.parse(f.to_string(a)), a);
    }
    (void)rng;
}

TEST(FieldAxioms, PrimeFields) {
    std::mt19937_64 rng(11);
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 101u}) {
        PrimeField f(p);
        check_axioms<PrimeField>(f, rng, [&] { return test::random_element(f, rng); });
    }
}

TEST(FieldAxioms, Rationals) {
    std::mt19937_64 rng(12);
    RationalField q;
    std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
    check_axioms<RationalField>(q, rng, [&] {
        mpq_class x(num(rng), den(rng));
        x.canonicalize();
        return x;
    });
    EXPECT_EQ(q.to_string(q.parse("6/4")), "3/2");
    EXPECT_THROW(q.parse("1/0"), InvalidArgument);
    EXPECT_THROW(q.elements(), UnsupportedField);
}

// Oracle: x is a square iff some y has y*y == x, tried exhaustively.
TEST(SquareClasses, TileTheMultiplicativeGroup) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        PrimeField f(p);
        const auto reps = square_classes(f);
        EXPECT_EQ(reps.size(), p == 2 ? 1u : 2u);
        EXPECT_EQ(reps.front(), f.one());
        std::set<std::uint32_t> squares;
        for (std::uint32_t y = 1; y < p; ++y) squares.insert(y * y % p);
        for (std::uint32_t x = 1; x < p; ++x) {
            int hits = 0;
            for (const auto& r : reps)
                for (auto s : squares)
                    if (f.mul(r, f.from_int(s)) == f.from_int(x)) ++hits;
            EXPECT_EQ(hits, 1) << "x=" << x << " p=" << p;
        }
    }
}

TEST(SquareRoot, MatchesExhaustiveSearch) {
    for (std::uint32_t p : {3u, 5u, 7u, 13u}) {
        PrimeField f(p);
        for (std::uint32_t x = 1; x < p; ++x) {
            std::optional<std::uint32_t> root;
            for (std::uint32_t y = 0; y < p && !root; ++y)
                if (y * y % p == x) root = y;
            const auto r = sqrt_if_square(f, f.from_int(x));
            ASSERT_EQ(r.has_value(), root.has_value()) << x << " mod " << p;
            if (r) EXPECT_EQ(r->value, *root);
        }
    }
    RationalField q;
    EXPECT_EQ(*sqrt_if_square(q, mpq_class(9, 4)), mpq_class(3, 2));
    EXPECT_FALSE(sqrt_if_square(q, mpq_class(-1)));
    EXPECT_FALSE(sqrt_if_square(q, mpq_class(2)));
}

TEST(SquareClasses, MinusOneIsASquareExactlyWhenPIsOneModFour) {
    for (std::uint32_t p : {3u, 5u, 7u, 13u, 17u, 19u}) {
        PrimeField f(p);
        EXPECT_EQ(sqrt_if_square(f, f.from_int(-1)).has_value(), p % 4 == 1) << p;
    }
}

}  // namespace
}  // namespace evo
