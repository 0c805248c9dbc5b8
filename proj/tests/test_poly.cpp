#include <random>

#include <gtest/gtest.h>

#include "reltan/parse.hpp"

using namespace reltan;

namespace {

using QQ = RationalField;
using Fp = PrimeField;

RingPtr<QQ> qq_ring(std::vector<std::string> names, MonomialOrder o = MonomialOrder::grevlex()) {
    return make_ring<QQ>(std::move(names), QQ{}, std::move(o));
}

template <class F, class Rng>
Polynomial<F> random_poly(const RingPtr<F>& ring, Rng& rng, int terms, int maxdeg) {
    std::uniform_int_distribution<int> e(0, maxdeg);
    std::uniform_int_distribution<long> c(-9, 9);
    std::vector<Term<F>> out;
    for (int i = 0; i < terms; ++i) {
        Monomial m;
        for (std::size_t v = 0; v < ring->nvars(); ++v) m.exp[v] = static_cast<std::uint16_t>(e(rng) % (maxdeg + 1));
        m.refresh();
        long num = c(rng);
        long den = 1 + (std::abs(c(rng)) % 4);
        out.push_back({m, ring->field().from_rational(mpq_class(num, den))});
    }
    return Polynomial<F>::from_terms(ring, std::move(out));
}

}  // namespace

TEST(Parse, CayleyCubicHasFiveTerms) {
    auto R = qq_ring({"x1", "x2", "x3"});
    auto p = parse_polynomial("16*x1*x2*x3+4*(x1^2+x2^2+x3^2)-1", R);
    EXPECT_EQ(p.size(), 5u);
}

TEST(Parse, ZeroAndCancellation) {
    auto R = qq_ring({"x", "y"});
    EXPECT_TRUE(parse_polynomial("0", R).is_zero());
    auto p = parse_polynomial("(x+1)^2-x^2-2*x", R);
    EXPECT_TRUE(p.is_one());
    EXPECT_EQ(render(parse_polynomial("x - x", R)), "0");
}

TEST(Parse, RationalLiteralsAndDivision) {
    auto R = qq_ring({"x"});
    auto p = parse_polynomial("3/4*x - x/4 + 1/2", R);
    EXPECT_EQ(render(p), "1/2*x + 1/2");
}

TEST(Parse, Errors) {
    auto R = qq_ring({"x", "y"});
    EXPECT_THROW(parse_polynomial("x + z", R), InputError);
    EXPECT_THROW(parse_polynomial("x + * y", R), ParseError);
    EXPECT_THROW(parse_polynomial("(x + y", R), ParseError);
    EXPECT_THROW(parse_polynomial("", R), ParseError);
    auto R7 = make_ring<Fp>({"x"}, Fp(7));
    EXPECT_THROW(parse_polynomial("x/7", R7), NonInvertibleCoefficient);
    EXPECT_THROW(parse_polynomial("x/(2*x)", R7), ParseError);
}

TEST(Arith, PrimeFieldProduct) {
    auto R7 = make_ring<Fp>({"x"}, Fp(7));
    auto p = parse_polynomial("3*x", R7) * parse_polynomial("5*x", R7);
    EXPECT_EQ(render(p), "x^2");
}

TEST(Arith, RingMismatchIsRejected) {
    auto A = qq_ring({"x", "y"});
    auto B = qq_ring({"x", "z"});
    EXPECT_THROW(parse_polynomial("x", A) + parse_polynomial("x", B), RingMismatch);
    // structurally equal rings interoperate
    auto C = qq_ring({"x", "y"});
    EXPECT_NO_THROW(parse_polynomial("x", A) * parse_polynomial("y", C));
}

TEST(Evaluate, Examples) {
    auto R = qq_ring({"u1", "u2", "u3"});
    auto p = parse_polynomial("u1*u3+u2", R);
    EXPECT_EQ(evaluate(p, {1, -6, 6}), 0);
    auto X = qq_ring({"x1", "x2", "x3"});
    auto cay = parse_polynomial("16*x1*x2*x3+4*(x1^2+x2^2+x3^2)-1", X);
    EXPECT_EQ(evaluate(cay, {mpq_class(1, 2), mpq_class(1, 2), mpq_class(-1, 2)}), 0);
    auto Y = qq_ring({"x", "y"});
    EXPECT_EQ(evaluate(parse_polynomial("x^2+y^2", Y), {3, 4}), 25);
    EXPECT_THROW(evaluate(parse_polynomial("x^2+y^2", Y), {3}), InputError);
}

TEST(Substitute, IntoAnotherRing) {
    auto X = qq_ring({"x", "y"});
    auto T = qq_ring({"t"});
    auto p = parse_polynomial("x^2 - y", X);
    auto img = substitute(p, {parse_polynomial("t", T), parse_polynomial("t^2", T)}, T);
    EXPECT_TRUE(img.is_zero());
    auto q = substitute(parse_polynomial("x*y + 1", X), {parse_polynomial("t+1", T), parse_polynomial("t-1", T)}, T);
    EXPECT_EQ(render(q), "t^2");
}

TEST(Derivative, CayleyGradient) {
    auto X = qq_ring({"x1", "x2", "x3"});
    auto cay = parse_polynomial("16*x1*x2*x3+4*(x1^2+x2^2+x3^2)-1", X);
    EXPECT_EQ(derivative(cay, 0), parse_polynomial("8*(2*x2*x3+x1)", X));
    EXPECT_EQ(derivative(cay, 2), parse_polynomial("8*(2*x1*x2+x3)", X));
}

TEST(Monomial, OverflowIsChecked) {
    Monomial a = Monomial::variable(0, kMaxExponent);
    EXPECT_THROW(a * Monomial::variable(0, 1), ExponentOverflow);
    EXPECT_THROW(Monomial::variable(0, kMaxExponent + 1), ExponentOverflow);
}

TEST(Property, RenderParseRoundTrip) {
    std::mt19937 rng(7);
    for (auto order : {MonomialOrder::grevlex(), MonomialOrder::lex(), MonomialOrder::block(2),
                       MonomialOrder::weighted({1, 2, 3, 1})}) {
        auto R = qq_ring({"a", "b", "c", "d"}, order);
        auto P = make_ring<Fp>({"a", "b", "c", "d"}, Fp(101), order);
        for (int i = 0; i < 60; ++i) {
            auto p = random_poly(R, rng, 1 + i % 9, 4);
            EXPECT_EQ(parse_polynomial(render(p), R), p) << render(p);
            auto q = random_poly(P, rng, 1 + i % 9, 4);
            EXPECT_EQ(parse_polynomial(render(q), P), q) << render(q);
        }
    }
}

TEST(Property, RingAxioms) {
    std::mt19937 rng(11);
    auto R = qq_ring({"x", "y", "z"});
    for (int i = 0; i < 40; ++i) {
        auto a = random_poly(R, rng, 4, 3), b = random_poly(R, rng, 3, 3), c = random_poly(R, rng, 5, 2);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).is_zero());
        EXPECT_EQ(a * Polynomial<QQ>::one(R), a);
    }
}

TEST(Property, OrderAxioms) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> e(0, 3);
    for (auto order : {MonomialOrder::grevlex(), MonomialOrder::lex(), MonomialOrder::block(2),
                       MonomialOrder::weighted({2, 1, 3})}) {
        for (int i = 0; i < 300; ++i) {
            Monomial a, b, c;
            for (int v = 0; v < 3; ++v) {
                a.exp[v] = static_cast<std::uint16_t>(e(rng));
                b.exp[v] = static_cast<std::uint16_t>(e(rng));
                c.exp[v] = static_cast<std::uint16_t>(e(rng));
            }
            a.refresh();
            b.refresh();
            c.refresh();
            const int ab = order.compare(a, b, 3);
            EXPECT_EQ(ab, -order.compare(b, a, 3));
            EXPECT_EQ(ab == 0, a == b);
            // multiplicative
            EXPECT_EQ(ab > 0, order.compare(a * c, b * c, 3) > 0);
            // 1 is the smallest monomial
            EXPECT_GE(order.compare(a, Monomial{}, 3), 0);
            if (ab > 0 && order.compare(b, c, 3) > 0) {
                EXPECT_GT(order.compare(a, c, 3), 0);
            }
        }
    }
}

TEST(Property, PrimeFieldAgreesWithRationalReduction) {
    std::mt19937 rng(3);
    auto R = qq_ring({"x", "y"});
    auto P = make_ring<Fp>({"x", "y"}, Fp(32003));
    for (int i = 0; i < 40; ++i) {
        auto a = random_poly(R, rng, 4, 3), b = random_poly(R, rng, 4, 3);
        EXPECT_EQ(reduce_mod(a * b, P), reduce_mod(a, P) * reduce_mod(b, P));
        EXPECT_EQ(reduce_mod(a - b, P), reduce_mod(a, P) - reduce_mod(b, P));
    }
}
