#pragma once

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "reltan/ed.hpp"
#include "reltan/formulas.hpp"

namespace reltan::acceptance {

struct Outcome {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double budget_seconds = 0;
};

namespace detail {

using QQ = RationalField;
using Fp = PrimeField;

inline const char* kCayley = "16*x1*x2*x3+4*(x1^2+x2^2+x3^2)-1";
inline const char* kCayleyProj = "16*x1*x2*x3+4*(x1^2+x2^2+x3^2)*x4-x4^3";
inline const char* kSextic =
    "4*u1^2*u2^4+8*u1^2*u2^2*u3^2-4*u2^4*u3^2+4*u1^2*u3^4-4*u2^2*u3^4+4*u1*u2^3*u3+4*u1*u2*u3^3+u2^2*u3^2";
inline const char* kConeP1 = "4*u1*u2-4*u1*u3-4*u2*u3-4*u1-4*u2+4*u3+3";
inline const char* kConeP2 = "4*u1*u2+4*u1*u3+4*u2*u3+4*u1+4*u2+4*u3+3";
inline const char* kDet3 = "x11*x22*x33-x11*x23*x32-x12*x21*x33+x12*x23*x31+x13*x21*x32-x13*x22*x31";
inline const char* kDisc = "c2^2*c3^2-4*c1*c3^3-4*c2^3*c4+18*c1*c2*c3*c4-27*c1^2*c4^2";
inline const char* kSegre[] = {"x11*x22-x12*x21", "x11*x23-x13*x21", "x12*x23-x13*x22"};

inline std::vector<std::string> matrix_names(int rows, int cols) {
    std::vector<std::string> n;
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= cols; ++j) n.push_back("x" + std::to_string(i) + std::to_string(j));
    return n;
}

// Collects named boolean checks and renders the failing ones.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++count_;
        if (!ok) failed_.push_back(what);
    }
    bool ok() const { return failed_.empty(); }
    std::string summary() const {
        if (failed_.empty()) return std::to_string(count_) + " checks";
        std::string s = "failed: ";
        for (std::size_t i = 0; i < failed_.size(); ++i) s += (i ? "; " : "") + failed_[i];
        return s;
    }

private:
    std::size_t count_ = 0;
    std::vector<std::string> failed_;
};

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
}

template <class F>
MultidegreeVector mdv(const Ideal<F>& X, const Ideal<F>& Z, std::uint64_t seed) {
    VarietyPair<F> P(X, Z, true);
    Conormal<F> W(P);
    return relative_multidegrees(W, seed);
}

inline void cayley_circle(Checks& c) {
    auto R = make_ring<QQ>({"x1", "x2", "x3"}, QQ{});
    Ideal<QQ> X = Ideal<QQ>::parse(R, {kCayley});
    VarietyPair<QQ> P(X, ideal_with(X, {parse_polynomial("x1", R)}), false);
    EDProblem<QQ> E(P);
    Ideal<QQ> DL = E.data_locus();
    c.expect(radical_equal(DL, Ideal<QQ>::parse(E.data_ring(), {kSextic})), "DL radical-equals the sextic");
    c.expect(hilbert_dim_degree(DL).degree == 6, "deg DL = 6");
}

inline void cayley_node_line(Checks& c) {
    auto R = make_ring<QQ>({"x1", "x2", "x3"}, QQ{});
    Ideal<QQ> X = Ideal<QQ>::parse(R, {kCayley});
    VarietyPair<QQ> P(X, Ideal<QQ>::parse(R, {"x1-x2", "2*x3+1"}), false);
    EDProblem<QQ> E(P);
    Ideal<QQ> DL = E.data_locus();
    c.expect(radical_equal(DL, Ideal<QQ>::parse(E.data_ring(), {"u1-u2"})), "DL = <u1-u2>");
    c.expect(!radical_contains(DL, parse_polynomial(kConeP1, E.data_ring())), "first normal cone not in DL");
    c.expect(!radical_contains(DL, parse_polynomial(kConeP2, E.data_ring())), "second normal cone not in DL");
}

inline void quadric_line(Checks& c) {
    auto R = make_ring<QQ>({"x1", "x2", "x3"}, QQ{});
    VarietyPair<QQ> P(Ideal<QQ>::parse(R, {"x1-x2*x3"}), Ideal<QQ>::parse(R, {"x1", "x2"}), false);
    EDProblem<QQ> E(P);
    c.expect(same_ideal(E.ideal(), Ideal<QQ>::parse(E.ring(), {"x2", "x1", "u1*u3+u2", "x3-u3"})),
             "E ideal = <x2,x1,u1u3+u2,x3-u3>");
    Ideal<QQ> DL = E.data_locus();
    std::vector<mpq_class> u{1, -6, 6};
    c.expect(fiber_critical_count(E, u, 3, &DL).distinct == 1, "fiber at (1,-6,6) is 1");

    auto S = make_ring<Fp>({"x0", "x1", "x2", "x3"}, Fp{});
    VarietyPair<Fp> Q(Ideal<Fp>::parse(S, {"x0*x3-x1*x2"}), Ideal<Fp>::parse(S, {"x0", "x1"}), true);
    EDProblem<Fp> EQ(Q);
    Conormal<Fp> W(Q);
    const EDDResult r = conditional_ed_degree(EQ, relative_multidegrees(W, 5), {.seed = 5});
    c.expect(r.sum_delta == 2, "sum_delta = 2");
    c.expect(r.deg_dl == 2, "deg DL = 2");
    c.expect(r.edd == 1, "EDD = 1");
    c.expect(r.consistent, "projective route consistent");
}

inline void sphere_equator(Checks& c) {
    auto R = make_ring<QQ>({"x1", "x2", "x3"}, QQ{});
    Ideal<QQ> X = Ideal<QQ>::parse(R, {"x1^2+x2^2+x3^2-1"});
    VarietyPair<QQ> P(X, ideal_with(X, {parse_polynomial("x3", R)}), false);
    EDProblem<QQ> E(P);
    Ideal<QQ> DL = E.data_locus();
    c.expect(radical_equal(DL, Ideal<QQ>::parse(E.data_ring(), {"u3"})), "DL = <u3>");
    for (std::uint64_t s = 1; s <= 2; ++s) {
        auto u = sample_linear_data_point(DL, s);
        c.expect(u.has_value(), "sampled a point of DL");
        if (!u) continue;
        const FiberCount fc = fiber_critical_count(E, *u, s, &DL);
        c.expect(fc.distinct == 2 && fc.simple(), "two simple critical points");
    }
    bool threw = false;
    try {
        fiber_critical_count(E, std::vector<mpq_class>{0, 0, 0}, 2, &DL);
    } catch (const PositiveDimensionalFiber&) {
        threw = true;
    }
    c.expect(threw, "center gives a positive-dimensional fiber");
}

inline void determinant(Checks& c) {
    for (std::uint32_t p : {32003u, 1000003u}) {
        const Fp k(p);
        auto R = make_ring<Fp>(matrix_names(3, 3), k);
        Ideal<Fp> X = Ideal<Fp>::parse(R, {kDet3});
        const std::string tag = " over F_" + std::to_string(p);
        auto full = mdv(X, X, 3);
        c.expect(full.nonzero_range() == std::vector<std::size_t>{6, 12, 12, 6, 3} && *full.first() == 3,
                 "(6,12,12,6,3) at offset 3" + tag + ", got " + join(full.nonzero_range()));
        auto row = mdv(X, Ideal<Fp>::parse(R, {"x11", "x12", "x13"}), 3);
        c.expect(row.nonzero_range() == std::vector<std::size_t>{1, 2, 1} && *row.first() == 3,
                 "(1,2,1) at offset 3" + tag + ", got " + join(row.nonzero_range()));
        auto part = mdv(X, Ideal<Fp>::parse(R, {"x11", "x12", "x21*x32-x22*x31"}), 3);
        c.expect(part.nonzero_range() == std::vector<std::size_t>{3, 5, 4, 2} && *part.first() == 2,
                 "(3,5,4,2) at offset 2" + tag + ", got " + join(part.nonzero_range()));
    }
}

inline void discriminant(Checks& c) {
    auto R = make_ring<Fp>({"c1", "c2", "c3", "c4"}, Fp{});
    Ideal<Fp> X = Ideal<Fp>::parse(R, {kDisc});
    auto m = mdv(X, X, 1);
    c.expect(m.nonzero_range() == std::vector<std::size_t>{3, 4} && *m.first() == 1, "[W_X] = (3,4) from index 1");
    auto Q = make_ring<QQ>({"c1", "c2", "c3", "c4"}, QQ{});
    Ideal<QQ> XQ = Ideal<QQ>::parse(Q, {kDisc});
    VarietyPair<QQ> P(XQ, Ideal<QQ>::parse(Q, {"c1", "c2"}), true);
    Conormal<QQ> W(P);
    c.expect(radical_equal(relative_dual_ideal(W), Ideal<QQ>::parse(W.dual_ring(), {"y2", "y3", "y4"})),
             "relative dual of V(c1,c2) = <c2,c3,c4>");
    SliceCheck s = generic_slice_check(X, {1, 2}, 3);
    c.expect(s.of_pair.nonzero_range() == std::vector<std::size_t>{8}, "conic-curve slice multidegree 8");
    c.expect(s.multidegree_identity, "slice multidegree identity");
    // the relative dual itself: deg 8 for a generic degree-2 curve
    std::mt19937_64 rng(21);
    Ideal<Fp> Z = ideal_with(X, {random_form(R, 1, rng, 100), random_form(R, 2, rng, 100)});
    VarietyPair<Fp> PY(X, Z, true);
    Conormal<Fp> WY(PY);
    c.expect(hilbert_dim_degree(relative_dual_ideal(WY, 3)).degree == 8, "deg of the sliced relative dual = 8");
}

inline void segre(Checks& c) {
    auto R = make_ring<Fp>(matrix_names(2, 3), Fp{});
    Ideal<Fp> X = Ideal<Fp>::parse(R, {kSegre[0], kSegre[1], kSegre[2]});
    Ideal<Fp> Z = ideal_with(X, {parse_polynomial("x13", R), parse_polynomial("x23", R)});
    VarietyPair<Fp> P(X, Z, true);
    Conormal<Fp> W(P);
    auto m = relative_multidegrees(W, 4);
    c.expect(m.nonzero_range() == std::vector<std::size_t>{3, 3, 2}, "multidegrees (3,3,2)");
    c.expect(kalman_degree({1, 2}, {0, 1}) == 4, "kalman_degree((1,2),(0,1)) = 4");
    EDProblem<Fp> E(P);
    const EDDResult r = conditional_ed_degree(E, m, {.seed = 4, .exact_degree = false, .sample_fiber = false});
    c.expect(!r.diagonal_disjoint, "diagonal_check = false");
    c.expect(!r.ratio_enabled, "ratio route disabled");
    c.expect(r.deg_dl == 4 && r.sum_delta == 8, "deg DL 4 < 8 = sum of multidegrees");
}

// Random generic complete intersection, degrees <= 3, N <= 4, cut by at least
// one random hyperplane. Instances whose Z has no F_p point to sample a fiber
// from are redrawn.
inline void ci_suite(Checks& c, std::uint64_t master) {
    std::mt19937_64 rng(master);
    int done = 0, redrawn = 0;
    while (done < 20) {
        if (redrawn > 200) {
            c.expect(false, "too many redrawn instances");
            return;
        }
        const int N = 2 + static_cast<int>(rng() % 3);
        const int s = N == 2 ? 1 : 1 + static_cast<int>(rng() % 2);
        const int n = N - s;
        const int hyper = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        std::vector<std::string> names;
        for (int i = 0; i <= N; ++i) names.push_back("x" + std::to_string(i));
        auto R = make_ring<Fp>(names, Fp{});
        std::vector<long> degs;
        PolyVec<Fp> gx;
        for (int i = 0; i < s; ++i) {
            const long e = 1 + static_cast<long>(rng() % 3);
            degs.push_back(e);
            gx.push_back(random_form(R, static_cast<unsigned>(e), rng, 100));
        }
        PolyVec<Fp> gz = gx;
        for (int i = 0; i < hyper; ++i) gz.push_back(random_form(R, 1, rng, 100));
        const std::uint64_t seed = master * 1000 + static_cast<std::uint64_t>(done + redrawn);
        VarietyPair<Fp> P(Ideal<Fp>(R, gx), Ideal<Fp>(R, gz), true);
        Conormal<Fp> W(P);
        auto m = relative_multidegrees(W, seed);
        EDProblem<Fp> E(P);
        const EDDResult r = conditional_ed_degree(E, m, {.seed = seed, .exact_degree = false});
        if (!r.fiber_count) {
            ++redrawn;
            continue;
        }
        const mpz_class formula = ci_conditional_degree(P.deg_z(), P.dim_z(), degs);
        const std::string tag = "N=" + std::to_string(N) + " degrees " + join(degs) + " d=" + std::to_string(P.dim_z());
        c.expect(mpz_class(static_cast<unsigned long>(r.slice_product)) == formula,
                 tag + ": EDD*deg(DL) " + std::to_string(r.slice_product) + " vs formula " + formula.get_str());
        c.expect(mpz_class(static_cast<unsigned long>(r.sum_delta)) == formula, tag + ": multidegree sum");
        c.expect(r.edd == 1, tag + ": EDD = 1");
        c.expect(*r.fiber_count == 1, tag + ": fiber count 1");
        ++done;
    }
}

template <class F>
void structural_pair(Checks& c, const std::string& tag, const Ideal<F>& X, const Ideal<F>& Z, bool check_dl) {
    VarietyPair<F> P(X, Z, true);
    Conormal<F> W(P);
    auto m = relative_multidegrees(W, 7);
    c.expect(m.last() && mpz_class(static_cast<unsigned long>(m.values[*m.last()])) == P.deg_z(),
             tag + ": last multidegree = deg Z");
    const auto mu = relative_polar_degrees(m);
    c.expect(!mu.empty() && mpz_class(static_cast<unsigned long>(mu[0])) == P.deg_z(), tag + ": mu_0 = deg Z");
    bool mu_ok = static_cast<int>(mu.size()) == P.dim_z() + 1;
    for (int i = 0; mu_ok && i <= P.dim_z(); ++i)
        mu_ok = mu[static_cast<std::size_t>(i)] == m.values[static_cast<std::size_t>(P.dim_z() - i)];
    c.expect(mu_ok, tag + ": mu_i = delta_{d-i}");
    Ideal<F> rel = relative_dual_ideal(W, 7);
    VarietyPair<F> XX(X, X, true);
    Conormal<F> WX(XX);
    c.expect(radical_contains(rel, relative_dual_ideal(WX, 7)), tag + ": relative dual inside X^v");
    VarietyPair<F> ZZ(Z, Z, true);
    Conormal<F> WZ(ZZ);
    c.expect(radical_contains(rel, relative_dual_ideal(WZ, 7)), tag + ": relative dual inside Z^v");
    if (check_dl) {
        EDProblem<F> E(P);
        Ideal<F> DL = E.data_locus(7);
        c.expect(radical_contains(rename_ring(rel, E.data_ring()), DL), tag + ": X_Z^perp inside DL");
    }
}

inline void structural(Checks& c) {
    auto Q4 = make_ring<QQ>({"x0", "x1", "x2", "x3"}, QQ{});
    structural_pair(c, "quadric/line", Ideal<QQ>::parse(Q4, {"x0*x3-x1*x2"}), Ideal<QQ>::parse(Q4, {"x0", "x1"}), true);
    auto D = make_ring<QQ>({"c1", "c2", "c3", "c4"}, QQ{});
    Ideal<QQ> disc = Ideal<QQ>::parse(D, {kDisc});
    structural_pair(c, "discriminant/line", disc, Ideal<QQ>::parse(D, {"c1", "c2"}), true);
    auto Dp = make_ring<Fp>({"c1", "c2", "c3", "c4"}, Fp{});
    Ideal<Fp> discp = Ideal<Fp>::parse(Dp, {kDisc});
    structural_pair(c, "discriminant/plane", discp, ideal_with(discp, {parse_polynomial("c1+c2-c3+2*c4", Dp)}), true);
    auto C = make_ring<QQ>({"x1", "x2", "x3", "x4"}, QQ{});
    structural_pair(c, "Cayley/node line", Ideal<QQ>::parse(C, {kCayleyProj}),
                    Ideal<QQ>::parse(C, {"x1-x2", "2*x3+x4"}), true);
    auto S = make_ring<Fp>(matrix_names(2, 3), Fp{});
    Ideal<Fp> seg = Ideal<Fp>::parse(S, {kSegre[0], kSegre[1], kSegre[2]});
    structural_pair(c, "Segre/P1xL", seg, ideal_with(seg, {parse_polynomial("x13", S), parse_polynomial("x23", S)}),
                    false);
    auto P3 = make_ring<Fp>({"x0", "x1", "x2"}, Fp{});
    Ideal<Fp> cubic = Ideal<Fp>::parse(P3, {"x0^3+x1^3+x2^3+5*x0*x1*x2"});
    structural_pair(c, "cubic/line section", cubic, ideal_with(cubic, {parse_polynomial("x0+2*x1-x2", P3)}), true);
}

inline void biduality(Checks& c) {
    auto R = make_ring<QQ>({"x0", "x1", "x2", "x3"}, QQ{});
    VarietyPair<QQ> P(Ideal<QQ>::parse(R, {"x1*x0-x2*x3"}), Ideal<QQ>::parse(R, {"x1", "x2"}), true);
    DefectReport r = defect_pair(P);
    c.expect(r.dual_regular == TriState::Yes, "quadric/line dual regular");
    c.expect(r.def_equal, "quadric/line def(X) = def(X,Z)");
    c.expect(r.reflexive == TriState::Yes, "quadric/line reflexive");
    c.expect(r.reciprocal == TriState::Yes, "quadric/line reciprocal");
    auto C = make_ring<QQ>({"x1", "x2", "x3", "x4"}, QQ{});
    VarietyPair<QQ> N(Ideal<QQ>::parse(C, {kCayleyProj}), Ideal<QQ>::parse(C, {"x1-x2", "2*x3+x4"}), true);
    DefectReport s = defect_pair(N);
    c.expect(s.dual_regular == TriState::No, "Cayley node line is not dual regular");
    c.expect(s.def_x == 0, "def(X) = 0");
    c.expect(s.def_xz == 1, "def(X,Z) = 1");
}

inline void formula_units(Checks& c) {
    using DF = DeterminantalFlavor;
    auto g = determinantal_invariants({2, 2, 2, DF::General});
    c.expect(g.codim == 1 && g.degree == 3 && g.defect == 3, "general M=N=2 r=2");
    auto g1 = determinantal_invariants({2, 2, 1, DF::General});
    c.expect(g1.codim == 4 && g1.degree == 6, "general M=N=2 r=1");
    auto v = determinantal_invariants({2, 2, 1, DF::Symmetric});
    c.expect(v.dim == 2 && v.degree == 4, "symmetric N=2 r=1");
    auto pf = determinantal_invariants({4, 4, 2, DF::SkewSymmetric});
    c.expect(pf.dim == 6 && pf.degree == 5, "skew N=4 r=2");
    auto rd = determinantal_relative_defect({3, 3, 2, DF::General}, 3, 3);
    c.expect(!rd.empty && rd.def_rel == 3 && rd.codim_rel == 0 && rd.full, "relative defect r=2 M=N=3");
    c.expect(determinantal_relative_defect({3, 3, 2, DF::General}, 0, 3).empty, "relative dual empty below r-1");
    auto r1 = determinantal_relative_defect({3, 3, 1, DF::General}, 3, 3);
    c.expect(r1.def_rel == 0 && r1.codim_rel == 0, "relative defect r=1");
    bool alpha = true;
    for (long n = 0; n <= 6; ++n)
        for (long k = 0; k <= n; ++k)
            alpha = alpha && alpha_k(n, 0, k) == (mpz_class(1) << static_cast<mp_bitcnt_t>(n - k + 1)) - 1;
    c.expect(alpha, "alpha_k(n,0) = 2^(n-k+1)-1");
    std::mt19937_64 rng(3);
    bool cb = true;
    const QQ q;
    for (int t = 0; t < 10; ++t) {
        Matrix<QQ> A(3, std::vector<mpq_class>(4)), B(4, std::vector<mpq_class>(3));
        for (auto& row : A)
            for (auto& e : row) e = q.random(rng, 7);
        for (auto& row : B)
            for (auto& e : row) e = q.random(rng, 7);
        for (std::size_t r = 1; r <= 3; ++r)
            cb = cb && compound_matrix(q, mat_mul(q, A, B), r) ==
                           mat_mul(q, compound_matrix(q, A, r), compound_matrix(q, B, r));
    }
    c.expect(cb, "Cauchy-Binet");
    auto R = make_ring<Fp>({"x0", "x1", "x2"}, Fp{});
    auto conic = mdv(Ideal<Fp>::parse(R, {"x0^2+3*x1^2-5*x2^2+x0*x1"}), Ideal<Fp>::parse(R, {"x0^2+3*x1^2-5*x2^2+x0*x1"}), 2);
    auto cubic = mdv(Ideal<Fp>::parse(R, {"x0^3+x1^3+x2^3+5*x0*x1*x2"}), Ideal<Fp>::parse(R, {"x0^3+x1^3+x2^3+5*x0*x1*x2"}), 2);
    auto as_z = [](const MultidegreeVector& m) {
        std::vector<mpz_class> v;
        for (auto x : m.values) v.emplace_back(static_cast<unsigned long>(x));
        return v;
    };
    c.expect(as_z(conic) == chern_to_multidegrees(1, {2, 2}), "Chern conversion vs conic dual");
    c.expect(as_z(cubic) == chern_to_multidegrees(1, {3, 0}), "Chern conversion vs cubic dual");
}

}  // namespace detail

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<void(detail::Checks&)> body;
};

inline std::vector<Criterion> criteria(std::uint64_t seed = 1) {
    using namespace detail;
    return {
        {1, "Cayley circle data locus is the sextic", 30, cayley_circle},
        {2, "Cayley node line data locus drops both normal cones", 60, cayley_node_line},
        {3, "quadric/line ED ideal, projective EDD and fiber", 30, quadric_line},
        {4, "sphere/equator data locus and fibers", 30, sphere_equator},
        {5, "3x3 determinant multidegrees over two primes", 900, determinant},
        {6, "discriminant of the binary cubic", 300, discriminant},
        {7, "Segre P1xP2 with Frobenius form", 600, segre},
        {8, "complete intersection degree formula on 20 random pairs", 1200,
         [seed](Checks& c) { ci_suite(c, seed); }},
        {9, "structural invariants on the regression pairs", 600, structural},
        {10, "relative biduality checks", 300, biduality},
        {11, "closed-form formula units", 60, formula_units},
    };
}

inline Outcome run(const Criterion& cr) {
    Outcome o;
    o.id = cr.id;
    o.name = cr.name;
    o.budget_seconds = cr.budget_seconds;
    detail::Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        cr.body(checks);
        o.pass = checks.ok();
        o.detail = checks.summary();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && o.seconds > o.budget_seconds) {
        o.pass = false;
        o.detail += "; over the time budget";
    }
    return o;
}

inline std::string format_line(const Outcome& o) {
    std::ostringstream s;
    s << (o.pass ? "PASS" : "FAIL") << " [" << o.id << "] " << o.name << " (" << std::fixed;
    s.precision(2);
    s << o.seconds << " s / " << o.budget_seconds << " s): " << o.detail;
    return s.str();
}

}  // namespace reltan::acceptance
