#include <random>

#include <gtest/gtest.h>

#include "reltan/geometry.hpp"

using namespace reltan;

namespace {

using QQ = RationalField;
using Fp = PrimeField;

template <class F>
RingPtr<F> ring(std::vector<std::string> names, F k = F{}) {
    return make_ring<F>(std::move(names), k);
}

std::vector<std::string> matrix_names(int rows, int cols) {
    std::vector<std::string> n;
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= cols; ++j) n.push_back("x" + std::to_string(i) + std::to_string(j));
    return n;
}

template <class F>
PolyMatrix<F> generic_matrix(const RingPtr<F>& R, int rows, int cols) {
    PolyMatrix<F> M(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M[i].push_back(Polynomial<F>::variable(R, i * cols + j));
    return M;
}

const char* kDet3 = "x11*x22*x33-x11*x23*x32-x12*x21*x33+x12*x23*x31+x13*x21*x32-x13*x22*x31";

}  // namespace

TEST(Jacobian, CayleyGradient) {
    auto R = ring<QQ>({"x1", "x2", "x3"});
    auto J = jacobian_matrix<QQ>({parse_polynomial("16*x1*x2*x3+4*(x1^2+x2^2+x3^2)-1", R)});
    ASSERT_EQ(J.size(), 1u);
    EXPECT_EQ(J[0][0], parse_polynomial("8*(2*x2*x3+x1)", R));
    EXPECT_EQ(J[0][1], parse_polynomial("8*(2*x1*x3+x2)", R));
    EXPECT_EQ(J[0][2], parse_polynomial("8*(2*x1*x2+x3)", R));
}

TEST(Jacobian, ConstantsAndCircle) {
    auto R = ring<QQ>({"x", "y"});
    auto J = jacobian_matrix<QQ>({parse_polynomial("7", R), parse_polynomial("x^2+y^2", R)});
    EXPECT_TRUE(J[0][0].is_zero() && J[0][1].is_zero());
    EXPECT_EQ(J[1][0], parse_polynomial("2*x", R));
    EXPECT_EQ(J[1][1], parse_polynomial("2*y", R));
}

TEST(Minors, EntriesTwoByThreeAndDeterminant) {
    auto R = ring<QQ>(matrix_names(2, 3));
    auto M = generic_matrix(R, 2, 3);
    EXPECT_EQ(all_minors(M, 1, R).size(), 6u);
    auto m2 = all_minors(M, 2, R);
    ASSERT_EQ(m2.size(), 3u);
    // columns {1,2}, {1,3}, {2,3}
    EXPECT_EQ(m2[0], parse_polynomial("x11*x22-x12*x21", R));
    EXPECT_EQ(m2[1], parse_polynomial("x11*x23-x13*x21", R));
    EXPECT_EQ(m2[2], parse_polynomial("x12*x23-x13*x22", R));
    EXPECT_TRUE(minors_ideal(M, 3, R).is_zero_ideal());
    auto DD = hilbert_dim_degree(minors_ideal(M, 2, R));
    EXPECT_EQ(DD.dim, 3);  // Segre P1 x P2
    EXPECT_EQ(DD.degree, 3);

    auto S = ring<QQ>(matrix_names(3, 3));
    auto det = all_minors(generic_matrix(S, 3, 3), 3, S);
    ASSERT_EQ(det.size(), 1u);
    EXPECT_EQ(det[0], parse_polynomial(kDet3, S));
}

TEST(Minors, LaplaceAgreesWithPermutationExpansion) {
    std::mt19937 rng(4);
    auto R = ring<QQ>({"a", "b", "c"});
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        PolyMatrix<QQ> M(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                M[i].push_back(Polynomial<QQ>::variable(R, (i + j) % 3).scaled(coef(rng)) +
                               Polynomial<QQ>::constant(R, coef(rng)));
        std::vector<int> perm{0, 1, 2, 3};
        Polynomial<QQ> brute(R);
        do {
            int inv = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) inv += perm[a] > perm[b];
            Polynomial<QQ> t = Polynomial<QQ>::one(R);
            for (int i = 0; i < 4; ++i) t = t * M[i][perm[i]];
            brute = inv % 2 ? brute - t : brute + t;
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_EQ(determinant(M, R), brute);
    }
}

TEST(SingularLocus, CayleyNodes) {
    auto R = ring<QQ>({"x1", "x2", "x3"});
    Ideal<QQ> X(R, {parse_polynomial("16*x1*x2*x3+4*(x1^2+x2^2+x3^2)-1", R)});
    Ideal<QQ> S = singular_locus_ideal(X, 1);
    auto dd = hilbert_dim_degree(S);
    EXPECT_EQ(dd.krull_dim, 0);
    EXPECT_EQ(distinct_points(S, 1), 4u);
    const std::vector<std::vector<mpq_class>> nodes{{mpq_class(-1, 2), mpq_class(1, 2), mpq_class(1, 2)},
                                                    {mpq_class(1, 2), mpq_class(-1, 2), mpq_class(1, 2)},
                                                    {mpq_class(1, 2), mpq_class(1, 2), mpq_class(-1, 2)},
                                                    {mpq_class(-1, 2), mpq_class(-1, 2), mpq_class(-1, 2)}};
    for (const auto& p : nodes)
        for (const auto& g : S.groebner()) EXPECT_EQ(evaluate(g, p), 0);
}

TEST(SingularLocus, SmoothQuadricAndHyperplane) {
    auto R = ring<QQ>({"x1", "x2", "x3"});
    EXPECT_TRUE(singular_locus_ideal(Ideal<QQ>::parse(R, {"x1-x2*x3"}), 1).is_unit());
    EXPECT_TRUE(singular_locus_ideal(Ideal<QQ>::parse(R, {"x1+2*x2-x3"}), 1).is_unit());
}

TEST(Slice, QuadricByLine) {
    auto R = ring<Fp>({"x0", "x1", "x2", "x3"});
    Ideal<Fp> Q = Ideal<Fp>::parse(R, {"x0*x3-x1*x2"});
    std::vector<std::size_t> all{0, 1, 2, 3};
    EXPECT_EQ(slice_and_count(Q, {{all, 2, true}}, 5), 2u);
    EXPECT_EQ(slice_and_count(Ideal<Fp>::unit(R), {{all, 2, true}}, 5), 0u);
    // too few conditions leaves a curve
    EXPECT_THROW(slice_and_count(Q, {{all, 1, true}}, 5), NotZeroDimensional);
}

TEST(Slice, RationalCoefficients) {
    auto R = ring<QQ>({"x0", "x1", "x2", "x3"});
    Ideal<QQ> C = Ideal<QQ>::parse(R, {"x0*x2-x1^2", "x1*x3-x2^2", "x0*x3-x1*x2"});
    EXPECT_EQ(slice_and_count(C, {{{0, 1, 2, 3}, 1, true}}, 2), 3u);
}

TEST(Slice, AffineBlocks) {
    auto R = ring<QQ>({"x", "y"});
    Ideal<QQ> circle = Ideal<QQ>::parse(R, {"x^2+y^2-1"});
    EXPECT_EQ(slice_and_count(circle, {{{0, 1}, 1, false}}, 3), 2u);
}

TEST(Radical, Containment) {
    auto R = ring<QQ>({"x", "y"});
    auto I = [&](std::vector<std::string> g) { return Ideal<QQ>::parse(R, g); };
    EXPECT_TRUE(radical_contains(I({"x^2"}), I({"x"})));
    EXPECT_FALSE(radical_contains(I({"x"}), I({"y"})));
    EXPECT_TRUE(radical_contains(Ideal<QQ>::unit(R), I({"x", "y+1"})));
    EXPECT_TRUE(radical_contains(I({"x*y", "x^3"}), I({"x*y", "x^3"})));
}

TEST(VarietyPair, ChecksContainmentAndDimensions) {
    auto R = ring<QQ>({"x0", "x1", "x2", "x3"});
    Ideal<QQ> X = Ideal<QQ>::parse(R, {"x1*x0-x2*x3"});
    Ideal<QQ> Z = Ideal<QQ>::parse(R, {"x1", "x2"});
    VarietyPair<QQ> P(X, Z, true);
    EXPECT_EQ(P.ambient_dim(), 3u);
    EXPECT_EQ(P.dim_x(), 2);
    EXPECT_EQ(P.dim_z(), 1);
    EXPECT_EQ(P.codim(), 1u);
    EXPECT_TRUE(P.z_avoids_singular_locus());
    EXPECT_THROW(VarietyPair<QQ>(X, Ideal<QQ>::parse(R, {"x1", "x3-x0"}), true), HypothesisFailure);
    EXPECT_THROW(VarietyPair<QQ>(X, Ideal<QQ>::parse(R, {"x1+1", "x2"}), true), InputError);
}

TEST(QuadraticForm, Validation) {
    QQ k;
    EXPECT_THROW(QuadraticForm<QQ>::from_matrix(k, {{1, 2}, {3, 1}}), InputError);
    EXPECT_THROW(QuadraticForm<QQ>::from_matrix(k, {{1, 1}, {1, 1}}), InputError);
    auto q = QuadraticForm<QQ>::from_matrix(k, {{0, 1}, {1, 0}});
    EXPECT_FALSE(q.is_identity());
    auto R = ring<QQ>({"a", "b"});
    EXPECT_EQ(q.evaluate({Polynomial<QQ>::variable(R, 0), Polynomial<QQ>::variable(R, 1)}),
              parse_polynomial("2*a*b", R));
}

TEST(ZeroDim, MinimalPolynomialAndDistinctPoints) {
    auto R = ring<QQ>({"x", "y"});
    // x^2 = 0 doubled point, y^2 = 1 two points: 4 with multiplicity, 2 distinct
    Ideal<QQ> I = Ideal<QQ>::parse(R, {"x^2", "y^2-1"});
    EXPECT_EQ(quotient_dimension(I), 4u);
    EXPECT_EQ(distinct_points(I, 9), 2u);
    ZeroDimQuotient<QQ> Q(I);
    auto m = Q.minimal_polynomial(parse_polynomial("y", R));
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[0], -1);
    EXPECT_EQ(m[1], 0);
    EXPECT_EQ(m[2], 1);
}

TEST(ZeroDim, RationalPointOverPrimeField) {
    auto R = ring<Fp>({"x", "y"}, Fp(101));
    Ideal<Fp> I = Ideal<Fp>::parse(R, {"x^2-4", "y-x-1"});
    auto p = rational_point(I, 3);
    ASSERT_TRUE(p.has_value());
    EXPECT_TRUE(((*p)[0] == 2 && (*p)[1] == 3) || ((*p)[0] == 99 && (*p)[1] == 100));
}

TEST(Property, HypersurfaceLineSliceCountsDegree) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t N = 2 + trial % 4;
        const unsigned d = 1 + static_cast<unsigned>(trial % 4);
        std::vector<std::string> names;
        for (std::size_t i = 0; i <= N; ++i) names.push_back("x" + std::to_string(i));
        auto R = ring<Fp>(names);
        // random form of degree d: product of random linear forms plus a random multiple
        std::vector<std::size_t> vars(N + 1);
        for (std::size_t i = 0; i <= N; ++i) vars[i] = i;
        Polynomial<Fp> f = Polynomial<Fp>::one(R);
        for (unsigned e = 0; e < d; ++e) f = f * random_linear_form(R, vars, rng);
        Polynomial<Fp> g = Polynomial<Fp>::one(R);
        for (unsigned e = 0; e < d; ++e) g = g * random_linear_form(R, vars, rng);
        Ideal<Fp> H(R, {f + g});
        const std::size_t a = slice_and_count(H, {{vars, N - 1, true}}, 100 + trial);
        const std::size_t b = slice_and_count(H, {{vars, N - 1, true}}, 900 + trial);
        EXPECT_EQ(a, d);
        EXPECT_EQ(a, b);
    }
}

TEST(Property, SmoothCompleteIntersectionHasEmptySingularLocus) {
    std::mt19937_64 rng(8);
    auto R = ring<Fp>({"x0", "x1", "x2", "x3"});
    std::vector<std::size_t> vars{0, 1, 2, 3};
    for (int trial = 0; trial < 4; ++trial) {
        auto q1 = random_linear_form(R, vars, rng) * random_linear_form(R, vars, rng) +
                  random_linear_form(R, vars, rng) * random_linear_form(R, vars, rng) +
                  random_linear_form(R, vars, rng) * random_linear_form(R, vars, rng);
        auto q2 = random_linear_form(R, vars, rng) * random_linear_form(R, vars, rng) +
                  random_linear_form(R, vars, rng) * random_linear_form(R, vars, rng) +
                  random_linear_form(R, vars, rng) * random_linear_form(R, vars, rng);
        Ideal<Fp> X(R, {q1, q2});
        EXPECT_TRUE(hilbert_dim_degree(singular_locus_ideal(X, 2)).empty());
    }
}

TEST(Property, RadicalContainmentReflexiveAndUnit) {
    auto R = ring<QQ>({"x", "y", "z"});
    for (auto gens : std::vector<std::vector<std::string>>{{"x*y-z"}, {"x^2", "y*z"}, {"x-y", "y^3-z"}}) {
        Ideal<QQ> I = Ideal<QQ>::parse(R, gens);
        EXPECT_TRUE(radical_contains(I, I));
        EXPECT_TRUE(radical_contains(Ideal<QQ>::unit(R), I));
    }
}

TEST(VarietyPair, AffinePairsReadHomogeneousIdealsAffinely) {
    auto R = ring<QQ>({"x1", "x2", "x3"});
    VarietyPair<QQ> line(Ideal<QQ>::parse(R, {"x1-x2*x3"}), Ideal<QQ>::parse(R, {"x1", "x2"}), false);
    EXPECT_EQ(line.dim_x(), 2);
    EXPECT_EQ(line.dim_z(), 1);
    EXPECT_EQ(line.deg_z(), 1);
    // the origin is a point of the affine cone, not the empty set
    const auto cone = Ideal<QQ>::parse(R, {"x1^2+x2^2-x3^2"});
    VarietyPair<QQ> vertex(cone, Ideal<QQ>::parse(R, {"x1", "x2", "x3"}), false);
    EXPECT_EQ(vertex.dim_z(), 0);
    EXPECT_EQ(vertex.deg_z(), 1);
    EXPECT_TRUE(vertex.z_inside_singular_locus());
    // a ruling meets the vertex affinely; projectively it avoids it
    VarietyPair<QQ> ruling(cone, Ideal<QQ>::parse(R, {"x1-x3", "x2"}), false);
    EXPECT_FALSE(ruling.z_avoids_singular_locus());
    VarietyPair<QQ> projective(cone, Ideal<QQ>::parse(R, {"x1-x3", "x2"}), true);
    EXPECT_TRUE(projective.z_avoids_singular_locus());
    EXPECT_EQ(projective.dim_z(), 0);
}

TEST(DimDegree, AffineReading) {
    auto R = ring<QQ>({"x", "y"});
    const auto origin = affine_dim_degree(Ideal<QQ>::parse(R, {"x^2", "y"}));
    EXPECT_FALSE(origin.empty());
    EXPECT_EQ(origin.dim, 0);
    EXPECT_EQ(origin.degree, 2);
    EXPECT_TRUE(hilbert_dim_degree(Ideal<QQ>::parse(R, {"x^2", "y"})).empty());
    EXPECT_TRUE(affine_dim_degree(Ideal<QQ>::parse(R, {"x", "x-1"})).empty());
    const auto curve = affine_dim_degree(Ideal<QQ>::parse(R, {"x*y-1"}));
    EXPECT_EQ(curve.dim, 1);
    EXPECT_EQ(curve.degree, 2);
}
