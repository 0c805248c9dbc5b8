#include <gtest/gtest.h>

#include <random>

#include "reltan/duality.hpp"
#include "reltan/formulas.hpp"

using namespace reltan;

namespace {

using QQ = RationalField;
using Fp = PrimeField;
using P = Polynomial<Fp>;

DeterminantalSpec spec(long M, long N, long r, DeterminantalFlavor f = DeterminantalFlavor::General) {
    return DeterminantalSpec{M, N, r, f};
}

// Laplace expansion along the first row.
P poly_det(const std::vector<std::vector<P>>& A, const RingPtr<Fp>& R) {
    const std::size_t n = A.size();
    if (n == 1) return A[0][0];
    P out(R);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<P>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<P> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(A[i][c]);
            sub.push_back(row);
        }
        const P term = A[0][j] * poly_det(sub, R);
        out = (j % 2 == 0) ? out + term : out - term;
    }
    return out;
}

PolyVec<Fp> minors(const std::vector<std::vector<P>>& A, std::size_t k, const RingPtr<Fp>& R) {
    PolyVec<Fp> out;
    for (const auto& I : lex_subsets(A.size(), k))
        for (const auto& J : lex_subsets(A[0].size(), k)) {
            std::vector<std::vector<P>> sub;
            for (auto i : I) {
                std::vector<P> row;
                for (auto j : J) row.push_back(A[i][j]);
                sub.push_back(row);
            }
            P m = poly_det(sub, R);
            if (!m.is_zero()) out.push_back(m);
        }
    return out;
}

// Generic or symmetric matrix of variables and its (r+1)-minors ideal.
Ideal<Fp> determinantal_ideal(long M, long N, long r, bool symmetric) {
    std::vector<std::string> names;
    for (long i = 0; i <= M; ++i)
        for (long j = symmetric ? i : 0; j <= N; ++j) names.push_back("a" + std::to_string(i) + std::to_string(j));
    auto R = make_ring<Fp>(names, Fp{});
    std::vector<std::vector<P>> A(static_cast<std::size_t>(M + 1), std::vector<P>(static_cast<std::size_t>(N + 1), P(R)));
    std::size_t v = 0;
    for (long i = 0; i <= M; ++i)
        for (long j = symmetric ? i : 0; j <= N; ++j) {
            A[i][j] = P::variable(R, v++);
            if (symmetric) A[j][i] = A[i][j];
        }
    return Ideal<Fp>(R, minors(A, static_cast<std::size_t>(r + 1), R));
}

template <class F>
Matrix<F> random_matrix(const F& k, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    Matrix<F> A(rows, std::vector<typename F::Element>(cols));
    for (auto& row : A)
        for (auto& c : row) c = k.random(rng, 5);
    return A;
}

std::vector<mpz_class> z(std::initializer_list<long> v) {
    std::vector<mpz_class> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST(Determinantal, GeneralExamples) {
    auto a = determinantal_invariants(spec(2, 2, 2));
    EXPECT_EQ(a.codim, 1);
    EXPECT_EQ(a.degree, 3);
    EXPECT_EQ(a.defect, 3);
    auto b = determinantal_invariants(spec(2, 2, 1));
    EXPECT_EQ(b.codim, 4);
    EXPECT_EQ(b.degree, 6);
    // defect of the Segre P2 x P2 is 0: its dual is the determinant hypersurface
    EXPECT_EQ(b.defect, 0);
    // full rank: the whole space, empty dual
    auto c = determinantal_invariants(spec(1, 2, 2));
    EXPECT_EQ(c.codim, 0);
    EXPECT_EQ(c.degree, 1);
    EXPECT_EQ(c.defect, c.ambient_dim);
}

TEST(Determinantal, SymmetricAndSkew) {
    auto v = determinantal_invariants(spec(2, 2, 1, DeterminantalFlavor::Symmetric));
    EXPECT_EQ(v.dim, 2);
    EXPECT_EQ(v.degree, 4);
    auto s = determinantal_invariants(spec(2, 2, 2, DeterminantalFlavor::Symmetric));
    EXPECT_EQ(s.codim, 1);
    EXPECT_EQ(s.degree, 3);
    // the symmetric determinant has the Veronese surface as dual
    EXPECT_EQ(s.defect, 2);
    auto pf = determinantal_invariants(spec(3, 3, 2, DeterminantalFlavor::SkewSymmetric));
    EXPECT_EQ(pf.ambient_dim, 5);
    EXPECT_EQ(pf.codim, 1);
    EXPECT_EQ(pf.degree, 2);
    EXPECT_EQ(pf.defect, 0);
    auto g25 = determinantal_invariants(spec(4, 4, 2, DeterminantalFlavor::SkewSymmetric));
    EXPECT_EQ(g25.dim, 6);
    EXPECT_EQ(g25.degree, 5);
    auto odd = determinantal_invariants(spec(4, 4, 3, DeterminantalFlavor::SkewSymmetric));
    EXPECT_TRUE(odd.odd_skew);
    EXPECT_EQ(odd.effective_r, 2);
    EXPECT_EQ(odd.degree, g25.degree);
}

TEST(Determinantal, RejectsInvalidSpecs) {
    EXPECT_THROW(determinantal_invariants(spec(2, 2, 0)), InputError);
    EXPECT_THROW(determinantal_invariants(spec(2, 2, 4)), InputError);
    EXPECT_THROW(determinantal_invariants(spec(3, 2, 1)), InputError);
    EXPECT_THROW(determinantal_invariants(spec(2, 3, 1, DeterminantalFlavor::Symmetric)), InputError);
    EXPECT_THROW(determinantal_invariants(spec(2, 2, 1, DeterminantalFlavor::SkewSymmetric)), InputError);
}

TEST(Determinantal, AgreesWithMinorsIdeals) {
    struct Case {
        long M, N, r;
        bool sym;
    };
    for (const Case& c : {Case{1, 2, 1, false}, Case{1, 3, 1, false}, Case{2, 2, 1, false}, Case{2, 2, 2, false},
                          Case{2, 3, 1, false}, Case{2, 2, 1, true}, Case{2, 2, 2, true}}) {
        auto inv = determinantal_invariants(
            spec(c.M, c.N, c.r, c.sym ? DeterminantalFlavor::Symmetric : DeterminantalFlavor::General));
        auto dd = hilbert_dim_degree(determinantal_ideal(c.M, c.N, c.r, c.sym));
        EXPECT_EQ(mpz_class(dd.dim), inv.dim) << c.M << c.N << c.r << c.sym;
        EXPECT_EQ(dd.degree, inv.degree) << c.M << c.N << c.r << c.sym;
    }
}

TEST(Determinantal, SkewAgreesWithPfaffians) {
    auto R = make_ring<Fp>({"p12", "p13", "p14", "p15", "p23", "p24", "p25", "p34", "p35", "p45"}, Fp{});
    Ideal<Fp> G = Ideal<Fp>::parse(R, {"p12*p34-p13*p24+p14*p23", "p12*p35-p13*p25+p15*p23",
                                       "p12*p45-p14*p25+p15*p24", "p13*p45-p14*p35+p15*p34",
                                       "p23*p45-p24*p35+p25*p34"});
    auto dd = hilbert_dim_degree(G);
    auto inv = determinantal_invariants(spec(4, 4, 2, DeterminantalFlavor::SkewSymmetric));
    EXPECT_EQ(mpz_class(dd.dim), inv.dim);
    EXPECT_EQ(dd.degree, inv.degree);
}

TEST(Determinantal, DefectMatchesDualityModule) {
    // X_1 of 2x3 matrices: the first nonzero multidegree index is the defect
    auto R = make_ring<Fp>({"x11", "x12", "x13", "x21", "x22", "x23"}, Fp{});
    Ideal<Fp> X = Ideal<Fp>::parse(R, {"x11*x22-x12*x21", "x11*x23-x13*x21", "x12*x23-x13*x22"});
    VarietyPair<Fp> P(X, X, true);
    Conormal<Fp> W(P);
    auto m = relative_multidegrees(W, 3);
    EXPECT_EQ(mpz_class(static_cast<long>(*m.first())), determinantal_invariants(spec(1, 2, 1)).defect);
}

TEST(RelativeDefect, Examples) {
    auto full = determinantal_relative_defect(spec(3, 3, 2), 3, 3);
    EXPECT_FALSE(full.empty);
    EXPECT_EQ(full.def_rel, 3);
    EXPECT_EQ(full.codim_rel, 0);
    EXPECT_TRUE(full.full);
    EXPECT_EQ(full.def_rel, determinantal_invariants(spec(3, 3, 2)).defect);
    EXPECT_TRUE(determinantal_relative_defect(spec(3, 3, 2), 0, 3).empty);
    auto r1 = determinantal_relative_defect(spec(3, 3, 1), 3, 3);
    EXPECT_EQ(r1.def_rel, 0);
    EXPECT_EQ(r1.codim_rel, 0);
    auto part = determinantal_relative_defect(spec(3, 4, 2), 2, 2);
    EXPECT_FALSE(part.full);
    EXPECT_EQ(part.codim_rel, 2 * (6 - 4));
    auto wide = determinantal_relative_defect(spec(2, 4, 1), 4, 2);
    EXPECT_EQ(wide.def_rel, 2);
    EXPECT_EQ(wide.codim_rel, 0);
    EXPECT_THROW(determinantal_relative_defect(spec(2, 2, 1), 3, 1), InputError);
}

TEST(Compound, SmallCases) {
    QQ k;
    Matrix<QQ> A{{1, 2, 0}, {0, 1, 0}, {0, 0, 1}};
    EXPECT_EQ(compound_matrix(k, A, 1), A);
    EXPECT_EQ(compound_matrix(k, A, 3), (Matrix<QQ>{{1}}));
    // rows and columns indexed by {0,1},{0,2},{1,2}
    Matrix<QQ> C2{{1, 0, 0}, {0, 1, 2}, {0, 0, 1}};
    EXPECT_EQ(compound_matrix(k, A, 2), C2);
    EXPECT_EQ(compound_matrix(k, A, 4), (Matrix<QQ>{{0}}));
    Matrix<QQ> B{{1, 2, 3}, {4, 5, 6}};
    EXPECT_EQ(compound_matrix(k, B, 2), (Matrix<QQ>{{-3, -6, -3}}));
    EXPECT_EQ(lex_subsets(4, 2).size(), 6u);
    EXPECT_EQ(lex_subsets(4, 2)[1], (std::vector<std::size_t>{0, 2}));
}

TEST(Compound, CauchyBinet) {
    std::mt19937_64 rng(11);
    QQ q;
    Fp p;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t a = 2 + trial % 3, b = 2 + (trial / 3) % 3, c = 2 + (trial / 9) % 2;
        for (std::size_t r = 1; r <= std::min({a, b, c}); ++r) {
            auto A = random_matrix(q, a, b, rng), B = random_matrix(q, b, c, rng);
            EXPECT_EQ(compound_matrix(q, mat_mul(q, A, B), r),
                      mat_mul(q, compound_matrix(q, A, r), compound_matrix(q, B, r)));
            auto Ap = random_matrix(p, a, b, rng), Bp = random_matrix(p, b, c, rng);
            EXPECT_EQ(compound_matrix(p, mat_mul(p, Ap, Bp), r),
                      mat_mul(p, compound_matrix(p, Ap, r), compound_matrix(p, Bp, r)));
        }
    }
}

TEST(Compound, SymmetryPredicate) {
    QQ k;
    // rank-2 symmetric B: ker B = ker B^T, so C_2(B) is symmetric
    Matrix<QQ> S{{1, 2, 0}, {2, 1, 0}, {0, 0, 0}};
    EXPECT_TRUE(symmetric_compound_test(k, S, 1));
    // rank 2 with distinct row and column spaces
    Matrix<QQ> T{{1, 0, 0}, {0, 1, 0}, {0, 1, 0}};
    EXPECT_FALSE(symmetric_compound_test(k, T, 1));
    // wrong rank
    Matrix<QQ> U{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    EXPECT_FALSE(symmetric_compound_test(k, U, 1));
    // non-symmetric matrix with im B = im B^T
    Matrix<QQ> V{{1, 2, 0}, {3, 4, 0}, {0, 0, 0}};
    EXPECT_TRUE(symmetric_compound_test(k, V, 1));
}

TEST(CiDegree, Examples) {
    EXPECT_EQ(ci_conditional_degree(1, 1, {2}), 2);
    for (long d = 1; d <= 6; ++d) EXPECT_EQ(ci_conditional_degree(1, 1, {d}), d);
    EXPECT_EQ(ci_conditional_degree(1, 0, {3, 3}), 1);
    EXPECT_EQ(ci_conditional_degree(5, 0, {2}), 5);
    // brute force over exponent tuples
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        const long d = static_cast<long>(rng() % 4), d1 = 1 + static_cast<long>(rng() % 4), d2 = 1 + static_cast<long>(rng() % 4);
        mpz_class s = 0;
        for (long i = 0; i <= d; ++i)
            for (long j = 0; i + j <= d; ++j) {
                mpz_class a, b;
                mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(d1 - 1), static_cast<unsigned long>(i));
                mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(d2 - 1), static_cast<unsigned long>(j));
                s += a * b;
            }
        EXPECT_EQ(ci_conditional_degree(3, d, {d1, d2}), 3 * s);
    }
    EXPECT_THROW(ci_conditional_degree(1, 1, {0}), InputError);
}

TEST(Chern, PlaneCurves) {
    EXPECT_EQ(chern_to_multidegrees(1, z({3, 0})), z({6, 3}));
    EXPECT_EQ(chern_to_multidegrees(1, z({2, 2})), z({2, 2}));
    EXPECT_EQ(chern_to_multidegrees(0, z({1})), z({1}));
    EXPECT_THROW(chern_to_multidegrees(1, z({3})), InputError);
}

TEST(Chern, AgreesWithDualityModule) {
    auto R = make_ring<Fp>({"x0", "x1", "x2"}, Fp{});
    struct Case {
        const char* f;
        std::vector<mpz_class> chern;
    };
    for (const Case& c : {Case{"x0^2+3*x1^2-5*x2^2+x0*x1", z({2, 2})},
                          Case{"x0^3+2*x1^3+7*x2^3-x0*x1*x2+4*x0^2*x2", z({3, 0})}}) {
        Ideal<Fp> X = Ideal<Fp>::parse(R, {c.f});
        VarietyPair<Fp> P(X, X, true);
        Conormal<Fp> W(P);
        auto m = relative_multidegrees(W, 7);
        std::vector<mpz_class> got;
        for (auto v : m.values) got.emplace_back(static_cast<unsigned long>(v));
        EXPECT_EQ(got, chern_to_multidegrees(1, c.chern)) << c.f;
    }
}

TEST(Chern, AlphaAndCompleteIntersectionSpecialization) {
    for (long n = 0; n <= 6; ++n)
        for (long k = 0; k <= n; ++k) {
            mpz_class expect = (mpz_class(1) << static_cast<mp_bitcnt_t>(n - k + 1)) - 1;
            EXPECT_EQ(alpha_k(n, 0, k), expect);
        }
    for (long n = 0; n <= 5; ++n) {
        EXPECT_EQ(alpha_k(n, n, 0), 1);
        for (long k = 1; k <= n; ++k) EXPECT_EQ(alpha_k(n, n, k), 0);
    }
    // Chern route equals the multidegree sum for any ci slice
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const long n = 1 + static_cast<long>(rng() % 4);
        std::vector<mpz_class> chern;
        chern.emplace_back(1 + static_cast<long>(rng() % 6));
        for (long i = 1; i <= n; ++i) chern.emplace_back(static_cast<long>(rng() % 13) - 6);
        const auto delta = chern_to_multidegrees(n, chern);
        for (long e = 0; e <= n; ++e)
            EXPECT_EQ(ci_chern_degree(2, n, e, chern), cor62_degree(2, e, 0, delta).value);
    }
    // plane cubic: unsliced gives EDD 9, point slice gives 3
    EXPECT_EQ(ci_chern_degree(1, 1, 0, z({3, 0})), 9);
    EXPECT_EQ(ci_chern_degree(1, 1, 1, z({3, 0})), 3);
}

TEST(Cor62, Examples) {
    // delta of the 3x3 determinant at indices 0..7
    auto det3 = z({0, 0, 0, 6, 12, 12, 6, 3});
    EXPECT_EQ(cor62_degree(1, 1, 3, det3).value, 39);
    EXPECT_EQ(cor62_degree(2, 3, 3, det3).value, 78);
    auto disc = z({0, 3, 4});
    EXPECT_EQ(cor62_degree(2, 2, 1, disc).value, 8);
    auto deg = cor62_degree(1, 5, 1, disc);
    EXPECT_TRUE(deg.degenerate);
    EXPECT_EQ(deg.value, 0);
}

TEST(Kalman, Examples) {
    EXPECT_EQ(kalman_degree({1, 2}, {0, 1}), 4);
    // single factor: sum_a h^a t^{n-a}, coefficient 1 for every delta
    for (long n = 0; n <= 4; ++n)
        for (long d = 0; d <= n; ++d) EXPECT_EQ(kalman_degree({n}, {d}), 1);
    // zero codimension: the data locus is the whole space
    EXPECT_GE(kalman_degree({1, 2}, {0, 0}), 1);
    EXPECT_GE(kalman_degree({2, 2}, {0, 0}), 1);
    EXPECT_THROW(kalman_degree({1, 2}, {2, 0}), InputError);
    EXPECT_THROW(kalman_degree({1, 2}, {0}), InputError);
}

TEST(Kalman, CoefficientsNonnegativeInRange) {
    for (long n1 = 0; n1 <= 2; ++n1)
        for (long n2 = 0; n2 <= 3; ++n2)
            for (long d1 = 0; d1 <= n1; ++d1)
                for (long d2 = 0; d2 <= n2; ++d2) EXPECT_GE(kalman_degree({n1, n2}, {d1, d2}), 0);
    EXPECT_GE(kalman_degree({1, 2}, {1, 2}), 1);
}
