#include <random>

#include <gtest/gtest.h>

#include "reltan/ideal.hpp"

using namespace reltan;

namespace {

using QQ = RationalField;
using Fp = PrimeField;

template <class F>
Ideal<F> ideal(const RingPtr<F>& R, std::vector<std::string> gens) {
    return Ideal<F>::parse(R, gens);
}

template <class F>
std::vector<std::string> rendered(const PolyVec<F>& v) {
    std::vector<std::string> out;
    for (const auto& p : v) out.push_back(render(p));
    return out;
}

// All monomials of total degree d in n variables.
std::vector<Monomial> monomials_of_degree(std::size_t n, std::uint32_t d) {
    std::vector<Monomial> out;
    Monomial m;
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t v, std::uint32_t left) {
        if (v + 1 == n) {
            m.exp[v] = static_cast<std::uint16_t>(left);
            Monomial c = m;
            c.refresh();
            out.push_back(c);
            return;
        }
        for (std::uint32_t e = 0; e <= left; ++e) {
            m.exp[v] = static_cast<std::uint16_t>(e);
            rec(v + 1, left - e);
        }
    };
    rec(0, d);
    return out;
}

// Membership of a homogeneous f in a homogeneous ideal by linear algebra on the
// degree-deg f slice: f is in I iff it lies in the span of all m*g of that degree.
bool macaulay_member(const Polynomial<Fp>& f, const PolyVec<Fp>& gens) {
    const auto& ring = f.ring();
    const Fp& k = ring->field();
    if (f.is_zero()) return true;
    const std::uint32_t d = f.lm().degree;
    const auto cols = monomials_of_degree(ring->nvars(), d);
    std::unordered_map<Monomial, std::size_t, MonomialHash> index;
    for (std::size_t i = 0; i < cols.size(); ++i) index[cols[i]] = i;
    std::vector<std::vector<std::uint32_t>> rows;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        const auto gd = g.lm().degree;
        if (gd > d) continue;
        for (const auto& m : monomials_of_degree(ring->nvars(), d - gd)) {
            std::vector<std::uint32_t> row(cols.size(), 0);
            for (const auto& t : g.terms()) row[index.at(t.m * m)] = t.c;
            rows.push_back(row);
        }
    }
    auto rank_of = [&](std::vector<std::vector<std::uint32_t>> M) {
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols.size() && r < M.size(); ++c) {
            std::size_t piv = r;
            while (piv < M.size() && M[piv][c] == 0) ++piv;
            if (piv == M.size()) continue;
            std::swap(M[piv], M[r]);
            const auto inv = k.inv(M[r][c]);
            for (std::size_t i = 0; i < M.size(); ++i) {
                if (i == r || M[i][c] == 0) continue;
                const auto s = k.mul(M[i][c], inv);
                for (std::size_t j = 0; j < cols.size(); ++j) M[i][j] = k.sub(M[i][j], k.mul(s, M[r][j]));
            }
            ++r;
        }
        return r;
    };
    const std::size_t base = rank_of(rows);
    std::vector<std::uint32_t> frow(cols.size(), 0);
    for (const auto& t : f.terms()) frow[index.at(t.m)] = t.c;
    rows.push_back(frow);
    return rank_of(rows) == base;
}

template <class Rng>
Polynomial<Fp> random_form(const RingPtr<Fp>& R, Rng& rng, std::uint32_t d, double density = 0.6) {
    std::vector<Term<Fp>> terms;
    std::bernoulli_distribution keep(density);
    for (const auto& m : monomials_of_degree(R->nvars(), d))
        if (keep(rng)) terms.push_back({m, R->field().random(rng)});
    return Polynomial<Fp>::from_terms(R, std::move(terms));
}

}  // namespace

TEST(NormalForm, Examples) {
    auto R = make_ring<QQ>({"x", "y"}, QQ{});
    auto nf = normal_form(parse_polynomial("x^2", R), {parse_polynomial("x", R)});
    EXPECT_TRUE(nf.is_zero());
    auto nf2 = normal_form(parse_polynomial("x^2*y+1", R), {parse_polynomial("x*y-1", R)});
    EXPECT_EQ(render(nf2), "x + 1");
    auto p = parse_polynomial("x^3 - y", R);
    EXPECT_EQ(normal_form(p, {}), p);
}

TEST(Buchberger, Examples) {
    auto L = make_ring<QQ>({"x", "y", "z"}, QQ{}, MonomialOrder::lex());
    auto gb = ideal(L, {"x-y", "y-z"}).groebner();
    EXPECT_EQ(rendered(gb), (std::vector<std::string>{"y - z", "x - z"}));
    EXPECT_TRUE(ideal(L, {"1"}).is_unit());
    auto tw = ideal(L, {"x^2-y", "x^3-z"});
    EXPECT_TRUE(tw.contains(parse_polynomial("y^3-z^2", L)));
    bool present = false;
    for (const auto& g : tw.groebner()) present |= g == parse_polynomial("y^3-z^2", L);
    EXPECT_TRUE(present);
}

TEST(Buchberger, ResourceCapsThrow) {
    auto R = make_ring<Fp>({"a", "b", "c", "d"}, Fp{});
    PolyVec<Fp> gens;
    for (auto s : {"a^3+b^3+c^3+d^3", "a*b*c+b*c*d+a*c*d", "a^2*b-c^2*d+a*d^2", "b^3-a*c*d"})
        gens.push_back(parse_polynomial(s, R));
    GroebnerLimits lim;
    lim.max_pairs = 3;
    EXPECT_THROW(buchberger(R, gens, lim), ResourceExhausted);
    lim = {};
    lim.max_degree = 4;
    EXPECT_THROW(buchberger(R, gens, lim), ResourceExhausted);
    LimitScope scope(GroebnerLimits{2, 0, 0});
    EXPECT_THROW(Ideal<Fp>(R, gens).groebner(), ResourceExhausted);
}

TEST(Eliminate, Parametrized) {
    auto R = make_ring<QQ>({"t", "x", "y"}, QQ{});
    auto E = eliminate(ideal(R, {"x-t", "y-t^2"}), {0});
    ASSERT_EQ(E.groebner().size(), 1u);
    EXPECT_EQ(render(E.groebner()[0]), "x^2 - y");
    EXPECT_EQ(E.ring()->names(), (std::vector<std::string>{"x", "y"}));
}

TEST(Quotient, Examples) {
    auto R = make_ring<QQ>({"x", "y"}, QQ{});
    EXPECT_TRUE(same_ideal(ideal_quotient(ideal(R, {"x^2"}), ideal(R, {"x"})), ideal(R, {"x"})));
    EXPECT_TRUE(same_ideal(ideal_quotient(ideal(R, {"x*y"}), ideal(R, {"y"})), ideal(R, {"x"})));
}

TEST(Saturate, Examples) {
    auto R = make_ring<QQ>({"x", "y", "z"}, QQ{});
    auto x = parse_polynomial("x", R);
    EXPECT_TRUE(same_ideal(saturate_element(ideal(R, {"x^2*y"}), x), ideal(R, {"y"})));
    EXPECT_TRUE(same_ideal(saturate_element(ideal(R, {"x*y", "x*z"}), x), ideal(R, {"y", "z"})));
    EXPECT_TRUE(same_ideal(saturate_ideal(ideal(R, {"x^2*y", "x^2*z"}), ideal(R, {"y", "z"})), ideal(R, {"x^2"})));
    // inhomogeneous input goes through the extra variable
    EXPECT_TRUE(same_ideal(saturate_element(ideal(R, {"x*y - x", "x*z"}), x), ideal(R, {"y - 1", "z"})));
}

TEST(Saturate, VariableShortcutMatchesRabinowitsch) {
    std::mt19937 rng(17);
    auto R = make_ring<Fp>({"a", "b", "c", "d"}, Fp{});
    for (int trial = 0; trial < 6; ++trial) {
        auto a = Polynomial<Fp>::variable(R, 0);
        // ideals with an a-primary junk piece
        PolyVec<Fp> gens{random_form(R, rng, 2) * a, random_form(R, rng, 2) * a * a, random_form(R, rng, 3)};
        Ideal<Fp> I(R, gens);
        auto fast = saturate_element(I, a);
        // route through the extra variable by saturating with a + 0 * (inhomogeneous-free) disguise
        auto T = make_ring<Fp>({"t_", "a", "b", "c", "d"}, Fp{}, MonomialOrder::block(1));
        PolyVec<Fp> tg;
        for (const auto& g : gens) tg.push_back(remap(g, T, {1, 2, 3, 4}));
        tg.push_back(Polynomial<Fp>::variable(T, 0) * Polynomial<Fp>::variable(T, 1) - Polynomial<Fp>::one(T));
        auto slow = eliminate(Ideal<Fp>(T, tg), {0}, R);
        EXPECT_TRUE(same_ideal(fast, slow));
    }
}

TEST(Intersect, Basic) {
    auto R = make_ring<QQ>({"x", "y"}, QQ{});
    auto I = intersect(ideal(R, {"x"}), ideal(R, {"y"}));
    EXPECT_TRUE(same_ideal(I, ideal(R, {"x*y"})));
}

TEST(Radical, Containment) {
    auto R = make_ring<QQ>({"x", "y"}, QQ{});
    EXPECT_TRUE(radical_contains(ideal(R, {"x^3", "y^2"}), ideal(R, {"x", "y"})));
    EXPECT_FALSE(radical_contains(ideal(R, {"x^3"}), ideal(R, {"y"})));
    EXPECT_TRUE(radical_equal(ideal(R, {"x^2", "x*y"}), ideal(R, {"x"})));
    EXPECT_FALSE(radical_equal(ideal(R, {"x^2", "y"}), ideal(R, {"x"})));
    EXPECT_TRUE(radical_equal(ideal(R, {"x^2"}), ideal(R, {"x"})));
}

TEST(Hilbert, Examples) {
    std::vector<std::string> names;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) names.push_back("x" + std::to_string(i) + std::to_string(j));
    auto R = make_ring<QQ>(names, QQ{});
    auto det = ideal(R, {"x11*x22*x33 - x11*x23*x32 - x12*x21*x33 + x12*x23*x31 + x13*x21*x32 - x13*x22*x31"});
    auto dd = hilbert_dim_degree(det);
    EXPECT_EQ(dd.dim, 7);
    EXPECT_EQ(dd.degree, 3);
    auto P3 = make_ring<QQ>({"x0", "x1", "x2", "x3"}, QQ{});
    auto h = hilbert_dim_degree(ideal(P3, {"x0 + 2*x1 - x3"}));
    EXPECT_EQ(h.dim, 2);
    EXPECT_EQ(h.degree, 1);
    auto tw = hilbert_dim_degree(ideal(P3, {"x0*x2-x1^2", "x0*x3-x1*x2", "x1*x3-x2^2"}));
    EXPECT_EQ(tw.dim, 1);
    EXPECT_EQ(tw.degree, 3);
    auto empty = hilbert_dim_degree(ideal(P3, {"x0", "x1", "x2", "x3^2"}));
    EXPECT_TRUE(empty.empty());
    auto affine = hilbert_dim_degree(ideal(P3, {"x0^2 + x1^2 - 1", "x2", "x3 - 1"}));
    EXPECT_FALSE(affine.homogeneous);
    EXPECT_EQ(affine.dim, 1);
    EXPECT_EQ(affine.degree, 2);
}

TEST(Property, MembershipAgreesWithLinearAlgebra) {
    std::mt19937 rng(23);
    auto R = make_ring<Fp>({"a", "b", "c", "d"}, Fp(32003));
    for (int trial = 0; trial < 12; ++trial) {
        PolyVec<Fp> gens{random_form(R, rng, 2), random_form(R, rng, 2), random_form(R, rng, 3, 0.3)};
        Ideal<Fp> I(R, gens);
        for (int k = 0; k < 4; ++k) {
            // members by construction and random forms
            auto f = random_form(R, rng, 1) * gens[0] * random_form(R, rng, 1) + random_form(R, rng, 2) * gens[1];
            EXPECT_TRUE(I.contains(f));
            EXPECT_TRUE(macaulay_member(f, gens));
            auto g = random_form(R, rng, 3 + k % 2, 0.4);
            EXPECT_EQ(I.contains(g), macaulay_member(g, gens));
            auto h = random_form(R, rng, 4, 0.2) + random_form(R, rng, 1) * gens[2];
            EXPECT_EQ(I.contains(h), macaulay_member(h, gens));
        }
    }
}

TEST(Property, EliminationIsIdempotent) {
    std::mt19937 rng(29);
    auto R = make_ring<Fp>({"a", "b", "c", "d"}, Fp{});
    for (int trial = 0; trial < 5; ++trial) {
        Ideal<Fp> I(R, {random_form(R, rng, 2), random_form(R, rng, 2), random_form(R, rng, 1)});
        auto once = eliminate(I, {0});
        auto twice = eliminate(Ideal<Fp>(once.ring(), once.generators()), {});
        EXPECT_TRUE(same_ideal(once, twice));
        // eliminating a variable that no generator uses changes nothing
        auto S = make_ring<Fp>({"s", "b", "c", "d"}, Fp{});
        PolyVec<Fp> moved;
        for (const auto& g : once.generators()) moved.push_back(move_by_name(g, S));
        auto again = eliminate(Ideal<Fp>(S, moved), {0});
        EXPECT_EQ(rendered(again.groebner()), rendered(once.groebner()));
    }
}

TEST(Property, SaturationIsStable) {
    std::mt19937 rng(31);
    auto R = make_ring<Fp>({"a", "b", "c", "d"}, Fp{});
    for (int trial = 0; trial < 5; ++trial) {
        auto f = random_form(R, rng, 1);
        Ideal<Fp> I(R, {random_form(R, rng, 2) * f, random_form(R, rng, 2), random_form(R, rng, 3) * f * f});
        auto S = saturate_element(I, f);
        EXPECT_TRUE(same_ideal(saturate_element(S, f), S));
        Ideal<Fp> J(R, {f, random_form(R, rng, 1)});
        auto SJ = saturate_ideal(I, J);
        EXPECT_TRUE(same_ideal(saturate_ideal(SJ, J), SJ));
    }
}

TEST(Property, HypersurfaceDimensionAndDegree) {
    std::mt19937 rng(37);
    auto R = make_ring<Fp>({"a", "b", "c", "d", "e"}, Fp{});
    for (std::uint32_t d = 1; d <= 5; ++d) {
        auto f = random_form(R, rng, d, 0.5);
        if (f.is_zero()) continue;
        auto dd = hilbert_dim_degree(Ideal<Fp>(R, {f}));
        EXPECT_EQ(dd.dim, 3);
        EXPECT_EQ(dd.degree, d);
    }
}

TEST(Property, TwoPrimesGiveSameHeadTerms) {
    auto Q = make_ring<QQ>({"x", "y", "z", "w"}, QQ{});
    std::vector<std::string> gens{"x^2 - y*w + 3*z^2", "x*y*z - w^3 + 2*x*w^2", "y^2 - 5*x*z + w^2"};
    auto head = [&](std::uint32_t p) {
        auto P = make_ring<Fp>(Q->names(), Fp(p));
        std::vector<std::string> out;
        for (const auto& g : Ideal<Fp>::parse(P, gens).groebner()) out.push_back(render_monomial(g.lm(), *P));
        return out;
    };
    std::vector<std::string> q;
    for (const auto& g : Ideal<QQ>::parse(Q, gens).groebner()) q.push_back(render_monomial(g.lm(), *Q));
    EXPECT_EQ(head(32003), head(1000003));
    EXPECT_EQ(head(32003), q);
}
