#pragma once

#include <gmpxx.h>

#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "reltan/duality.hpp"

namespace reltan {

enum class EDModel { Affine, Projective };

inline const char* to_string(EDModel m) { return m == EDModel::Affine ? "affine" : "projective"; }

namespace detail {

// Solves A z = b for square invertible A over a field.
template <class F>
std::vector<typename F::Element> solve_square(const F& k, std::vector<std::vector<typename F::Element>> A,
                                              std::vector<typename F::Element> b) {
    const std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && k.is_zero(A[p][c])) ++p;
        if (p == n) throw InputError("singular linear system");
        std::swap(A[p], A[c]);
        std::swap(b[p], b[c]);
        const auto inv = k.inv(A[c][c]);
        for (auto& e : A[c]) e = k.mul(e, inv);
        b[c] = k.mul(b[c], inv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || k.is_zero(A[r][c])) continue;
            const auto f = A[r][c];
            for (std::size_t j = 0; j < n; ++j) A[r][j] = k.sub(A[r][j], k.mul(f, A[c][j]));
            b[r] = k.sub(b[r], k.mul(f, b[c]));
        }
    }
    return b;
}

// Pivot columns of a numeric matrix, scanning columns from the last one so
// that free columns come first.
template <class F>
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> pivots_from_right(
    const F& k, std::vector<std::vector<typename F::Element>> A) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> prow, pcol;
    std::vector<bool> used(rows, false);
    for (std::size_t cc = cols; cc-- > 0;) {
        std::size_t p = rows;
        for (std::size_t r = 0; r < rows; ++r)
            if (!used[r] && !k.is_zero(A[r][cc])) {
                p = r;
                break;
            }
        if (p == rows) continue;
        used[p] = true;
        prow.push_back(p);
        pcol.push_back(cc);
        const auto inv = k.inv(A[p][cc]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == p || k.is_zero(A[r][cc])) continue;
            const auto f = k.mul(A[r][cc], inv);
            for (std::size_t j = 0; j < cols; ++j) A[r][j] = k.sub(A[r][j], k.mul(f, A[p][j]));
        }
    }
    return {prow, pcol};
}

}  // namespace detail

// The ED problem of X given Z: critical points x in Z of q(u - x) on X.
// Affine pairs use the (c+1)-minors of (G(u-x); J); projective pairs use the
// (c+2)-minors of (Gu; Gx; J) and also saturate by q(x). Lives in (x, u).
template <class F>
class EDProblem {
public:
    using Element = typename F::Element;

    explicit EDProblem(const VarietyPair<F>& pair, std::string data_stem = "u") : pair_(pair) {
        model_ = pair.projective() ? EDModel::Projective : EDModel::Affine;
        if (pair.z_inside_singular_locus()) throw HypothesisFailure("Z lies in the singular locus of X");
        const auto& R = pair.ring();
        nx_ = R->nvars();
        data_names_ = dual_variable_names(R->names(), data_stem);
        std::vector<std::string> names = R->names();
        for (const auto& n : data_names_) names.push_back(n);
        xu_ = make_ring<F>(names, R->field());
        u_ring_ = make_ring<F>(data_names_, R->field());
        std::vector<std::size_t> map(nx_);
        for (std::size_t i = 0; i < nx_; ++i) map[i] = i;
        for (const auto& g : pair.Z().generators()) z_gens_.push_back(remap(g, xu_, map));
        PolyVec<F> x, u, diff;
        for (std::size_t i = 0; i < nx_; ++i) {
            x.push_back(Polynomial<F>::variable(xu_, i));
            u.push_back(Polynomial<F>::variable(xu_, nx_ + i));
            diff.push_back(u.back() - x.back());
        }
        if (model_ == EDModel::Affine) {
            matrix_.push_back(pair.form().apply(diff));
        } else {
            matrix_.push_back(pair.form().apply(u));
            matrix_.push_back(pair.form().apply(x));
            q_x_ = pair.form().evaluate(x);
            if (radical_contains(pair.Z(), pair.form().evaluate(xs(R))))
                throw HypothesisFailure("Z lies on the isotropic quadric");
        }
        for (const auto& row : pair.jacobian()) {
            std::vector<Polynomial<F>> lifted;
            for (const auto& e : row) lifted.push_back(remap(e, xu_, map));
            matrix_.push_back(std::move(lifted));
        }
        for (const auto& m : pair.jacobian_minors()) sing_minors_.push_back(remap(m, xu_, map));
        avoids_sing_ = pair.z_avoids_singular_locus();
    }

    const VarietyPair<F>& pair() const { return pair_; }
    EDModel model() const { return model_; }
    const RingPtr<F>& ring() const { return xu_; }
    const RingPtr<F>& data_ring() const { return u_ring_; }
    const std::vector<std::string>& data_names() const { return data_names_; }
    std::size_t nx() const { return nx_; }
    bool z_avoids_singular_locus() const { return avoids_sing_; }
    std::vector<std::size_t> x_vars() const { return range(0); }
    std::vector<std::size_t> u_vars() const { return range(nx_); }
    std::size_t minor_size() const { return pair_.codim() + (model_ == EDModel::Affine ? 1 : 2); }

    // Expected dimension of DL: N+1-(n-d) projectively (as a cone), N-(n-d) affinely.
    int expected_data_locus_dim() const {
        const int delta = pair_.dim_x() - pair_.dim_z();
        return static_cast<int>(nx_) - delta;
    }

    PolyVec<F> unsaturated_generators() const {
        PolyVec<F> g = z_gens_;
        for (auto& m : all_minors(matrix_, minor_size(), xu_)) g.push_back(std::move(m));
        return g;
    }

    // The conditional ED correspondence. Random single-element saturations
    // unless `exact`.
    const Ideal<F>& ideal(std::uint64_t seed = 0, bool exact = false) const {
        std::call_once(cache_->once, [&] { cache_->ideal = compute_ideal(seed, exact); });
        return cache_->ideal;
    }

    // DL_{X|Z} as the elimination of x.
    Ideal<F> data_locus(std::uint64_t seed = 0, bool exact = false) const {
        return eliminate(ideal(seed, exact), x_vars(), u_ring_);
    }

    // A single polynomial in k[x, u] whose nonvanishing removes X_sing (and,
    // projectively, Q and the origin).
    std::optional<Polynomial<F>> saturating_element(std::uint64_t seed) const {
        std::mt19937_64 rng(derive_seed(seed, 23));
        std::optional<Polynomial<F>> s;
        if (!avoids_sing_) {
            if (model_ == EDModel::Projective) s = homogeneous_combination(sing_minors_, xu_, rng, x_vars());
            else s = random_combination(sing_minors_, xu_, derive_seed(seed, 29));
        }
        if (model_ == EDModel::Projective) s = s ? *s * q_x_ : q_x_;
        return s;
    }

    // Substitution x <- x, u <- point, into the pair's ring.
    PolyVec<F> specialize(const PolyVec<F>& gens, const std::vector<Element>& point) const {
        const auto& R = pair_.ring();
        PolyVec<F> images = xs(R);
        for (const auto& c : point) images.push_back(Polynomial<F>::constant(R, c));
        PolyVec<F> out;
        for (const auto& g : gens) {
            auto s = substitute(g, images, R);
            if (!s.is_zero()) out.push_back(std::move(s));
        }
        return out;
    }

private:
    static PolyVec<F> xs(const RingPtr<F>& R) {
        PolyVec<F> v;
        for (std::size_t i = 0; i < R->nvars(); ++i) v.push_back(Polynomial<F>::variable(R, i));
        return v;
    }

    std::vector<std::size_t> range(std::size_t from) const {
        std::vector<std::size_t> v(nx_);
        for (std::size_t i = 0; i < nx_; ++i) v[i] = from + i;
        return v;
    }

    Ideal<F> compute_ideal(std::uint64_t seed, bool exact) const {
        Ideal<F> I(xu_, unsaturated_generators());
        if (exact) {
            if (!avoids_sing_) {
                PolyVec<F> sing = z_gens_;
                for (const auto& m : sing_minors_) sing.push_back(m);
                I = saturate_ideal(I, Ideal<F>(xu_, sing));
            }
            if (model_ == EDModel::Projective) I = saturate_element(I, q_x_);
            return I;
        }
        // saturating by a product is saturating by each factor in turn
        if (model_ == EDModel::Projective) I = saturate_element(I, q_x_);
        if (!avoids_sing_) {
            std::mt19937_64 rng(derive_seed(seed, 23));
            if (model_ == EDModel::Projective)
                I = saturate_element(I, homogeneous_combination(sing_minors_, xu_, rng, x_vars()));
            else
                I = saturate_element(I, random_combination(sing_minors_, xu_, derive_seed(seed, 29)));
        }
        return I;
    }

    struct Cache {
        std::once_flag once;
        Ideal<F> ideal;
    };

    const VarietyPair<F>& pair_;
    EDModel model_ = EDModel::Affine;
    std::size_t nx_ = 0;
    std::vector<std::string> data_names_;
    RingPtr<F> xu_, u_ring_;
    PolyVec<F> z_gens_;
    PolyMatrix<F> matrix_;
    PolyVec<F> sing_minors_;
    Polynomial<F> q_x_;
    bool avoids_sing_ = false;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// The graph of Gamma(x, y) = x + y over the relative conormal, in (x, y, u).
// Projective pairs use the saturated conormal plus the 3x3 minors of
// (u; x; y), saturated by q(x) q(y); affine pairs use the affine conormal
// N_{X|Z} plus u = x + y.
template <class F>
class JointCorrespondence {
public:
    explicit JointCorrespondence(const VarietyPair<F>& pair) : pair_(pair) {
        if (pair.z_inside_singular_locus()) throw HypothesisFailure("Z lies in the singular locus of X");
        const auto& R = pair.ring();
        nx_ = R->nvars();
        std::vector<std::string> names = R->names();
        const auto ynames = dual_variable_names(R->names(), "y");
        const auto unames = dual_variable_names(R->names(), "u");
        for (const auto& n : ynames) names.push_back(n);
        for (const auto& n : unames) names.push_back(n);
        ring_ = make_ring<F>(names, R->field());
        u_ring_ = make_ring<F>(unames, R->field());
    }

    const RingPtr<F>& ring() const { return ring_; }
    const RingPtr<F>& data_ring() const { return u_ring_; }

    Ideal<F> ideal(std::uint64_t seed = 0) const {
        const auto& R = pair_.ring();
        PolyVec<F> x, y, u;
        for (std::size_t i = 0; i < nx_; ++i) {
            x.push_back(Polynomial<F>::variable(ring_, i));
            y.push_back(Polynomial<F>::variable(ring_, nx_ + i));
            u.push_back(Polynomial<F>::variable(ring_, 2 * nx_ + i));
        }
        std::vector<std::size_t> map(2 * nx_);
        for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
        if (pair_.projective()) {
            Conormal<F> W(pair_, "y");
            const auto& Wi = W.ideal(seed);
            if (radical_contains(pair_.Z(), pair_.form().evaluate(xs(R))))
                throw HypothesisFailure("Z lies on the isotropic quadric");
            PolyVec<F> yv;
            for (auto v : W.y_vars()) yv.push_back(Polynomial<F>::variable(W.ring(), v));
            if (radical_contains(Wi, pair_.form().evaluate(yv)))
                throw HypothesisFailure("the relative dual lies on the isotropic quadric");
            PolyVec<F> g;
            for (const auto& p : Wi.generators()) g.push_back(remap(p, ring_, map));
            for (auto& m : all_minors(PolyMatrix<F>{u, x, y}, 3, ring_)) g.push_back(std::move(m));
            Ideal<F> I(ring_, std::move(g));
            I = saturate_element(I, pair_.form().evaluate(x));
            return saturate_element(I, pair_.form().evaluate(y));
        }
        // affine conormal: I_Z + (c+1)-minors of (Gy; J), saturated by the singular minors
        std::vector<std::size_t> xmap(nx_);
        for (std::size_t i = 0; i < nx_; ++i) xmap[i] = i;
        PolyVec<F> g;
        for (const auto& p : pair_.Z().generators()) g.push_back(remap(p, ring_, xmap));
        PolyMatrix<F> M;
        M.push_back(pair_.form().apply(y));
        for (const auto& row : pair_.jacobian()) {
            std::vector<Polynomial<F>> lifted;
            for (const auto& e : row) lifted.push_back(remap(e, ring_, xmap));
            M.push_back(std::move(lifted));
        }
        for (auto& m : all_minors(M, pair_.codim() + 1, ring_)) g.push_back(std::move(m));
        for (std::size_t i = 0; i < nx_; ++i) g.push_back(u[i] - x[i] - y[i]);
        Ideal<F> I(ring_, std::move(g));
        if (!pair_.z_avoids_singular_locus()) {
            PolyVec<F> minors;
            for (const auto& m : pair_.jacobian_minors()) minors.push_back(remap(m, ring_, xmap));
            I = saturate_element(I, random_combination(minors, ring_, derive_seed(seed, 31)));
        }
        return I;
    }

    Ideal<F> data_locus(std::uint64_t seed = 0) const {
        std::vector<std::size_t> drop;
        for (std::size_t i = 0; i < 2 * nx_; ++i) drop.push_back(i);
        return eliminate(ideal(seed), drop, u_ring_);
    }

private:
    static PolyVec<F> xs(const RingPtr<F>& R) {
        PolyVec<F> v;
        for (std::size_t i = 0; i < R->nvars(); ++i) v.push_back(Polynomial<F>::variable(R, i));
        return v;
    }

    const VarietyPair<F>& pair_;
    std::size_t nx_ = 0;
    RingPtr<F> ring_, u_ring_;
};

// Critical points of d_{X,u} on Z for one data point u.
struct FiberCount {
    std::size_t length = 0;   // with multiplicity
    std::size_t distinct = 0; // set-theoretic count
    bool simple() const { return length == distinct; }
};

// Counts the fiber of E_{X|Z} over `point`. Projective fibers are counted on
// a random affine chart of P^N. The singular locus and Q are removed by a
// Rabinowitsch variable.
template <class F>
FiberCount fiber_critical_count(const EDProblem<F>& P, const std::vector<typename F::Element>& point,
                                std::uint64_t seed = 0, const Ideal<F>* data_locus = nullptr) {
    if (point.size() != P.nx()) throw InputError("data point has the wrong number of coordinates");
    if (data_locus) {
        for (const auto& g : data_locus->generators())
            if (!P.ring()->field().is_zero(evaluate(g, point)))
                throw NotOnDataLocus("data point is not on the data locus");
    }
    const auto& R = P.pair().ring();
    const PolyVec<F> gens = P.specialize(P.unsaturated_generators(), point);
    std::optional<Polynomial<F>> sat;
    if (auto s = P.saturating_element(seed)) {
        const PolyVec<F> one = P.specialize({*s}, point);
        if (one.empty()) throw HypothesisFailure("saturating element vanishes identically at the data point");
        sat = one[0];
    }
    FiberCount out;
    std::size_t distinct[2];
    for (int r = 0; r < 2; ++r) {
        std::vector<BlockSlice> blocks;
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < R->nvars(); ++i) all.push_back(i);
        if (P.model() == EDModel::Projective) blocks.push_back({all, 0, true});
        const auto s = make_slice(R, blocks, derive_seed(seed, 41 + r), sat.has_value());
        PolyVec<F> g = s.apply(gens);
        if (sat) g.push_back(Polynomial<F>::variable(s.target, *s.sat_var) * s.apply(*sat) - Polynomial<F>::one(s.target));
        Ideal<F> I(s.target, std::move(g));
        if (I.is_unit()) throw NotOnDataLocus("no critical point of the distance function lies on Z");
        const HilbertData h = hilbert_data(I.leading_monomials(), s.target->nvars());
        if (h.krull_dim > 0) throw PositiveDimensionalFiber();
        const std::size_t len = h.degree.get_ui();
        if (r == 0) out.length = len;
        else if (len != out.length)
            throw SeedDisagreement("fiber length differs between charts: " + std::to_string(out.length) + " vs " +
                                   std::to_string(len));
        distinct[r] = distinct_points(I, derive_seed(seed, 43 + r));
    }
    out.distinct = std::max(distinct[0], distinct[1]);
    return out;
}

// Generic linear section of DL by a space of complementary dimension, lifted
// to E_{X|Z}: `total` points are EDD * deg(DL), `distinct_data` are deg(DL).
struct DataLocusSlice {
    std::size_t total = 0;
    std::size_t distinct_data = 0;
};

template <class F>
DataLocusSlice slice_data_locus(const EDProblem<F>& P, std::uint64_t seed = 0) {
    const int dim_dl = P.expected_data_locus_dim();
    const std::size_t codim_dl = P.nx() - static_cast<std::size_t>(dim_dl);
    const auto gens = P.unsaturated_generators();
    DataLocusSlice res[2];
    for (int r = 0; r < 2; ++r) {
        const std::uint64_t sd = derive_seed(seed, 51 + r);
        const auto sat = P.saturating_element(sd);
        std::vector<BlockSlice> blocks;
        if (P.model() == EDModel::Projective) blocks.push_back({P.x_vars(), 0, true});
        blocks.push_back({P.u_vars(), static_cast<std::size_t>(dim_dl), false});
        const auto s = make_slice(P.ring(), blocks, derive_seed(sd, 1), sat.has_value());
        PolyVec<F> g = s.apply(gens);
        if (sat) g.push_back(Polynomial<F>::variable(s.target, *s.sat_var) * s.apply(*sat) - Polynomial<F>::one(s.target));
        Ideal<F> I(s.target, std::move(g));
        if (I.is_unit()) continue;
        const HilbertData h = hilbert_data(I.leading_monomials(), s.target->nvars());
        if (h.krull_dim > 0) throw NotZeroDimensional("data locus slice is not zero-dimensional");
        res[r].total = h.degree.get_ui();
        // the u-parameters come right after the x-chart parameters
        const std::size_t xparams = P.model() == EDModel::Projective ? P.nx() - 1 : 0;
        std::vector<std::size_t> uparams;
        for (std::size_t j = 0; j < codim_dl; ++j) uparams.push_back(xparams + j);
        if (uparams.empty()) res[r].distinct_data = 1;
        else res[r].distinct_data = distinct_points(I, derive_seed(sd, 2), uparams);
    }
    if (res[0].total != res[1].total || res[0].distinct_data != res[1].distinct_data)
        throw SeedDisagreement("data locus slices disagree between seeds");
    return res[0];
}

// Rational parametrization of a variety: components in a parameter ring.
template <class F>
struct Parametrization {
    RingPtr<F> params;
    PolyVec<F> components;
};

// theta(v, w) = (phi(psi(v)), phi(psi(v)) + sum_i w_i beta_i(psi(v))).
template <class F>
struct EDParametrization {
    RingPtr<F> params;  // (v, w)
    PolyVec<F> x, u;
    PolyMatrix<F> normals; // beta_i(psi(v)), one row per normal vector
};

// Normal vectors to the parametrized X: a basis of the kernel of
// J(phi)^T G by cofactors of a maximal nonsingular block, so the entries
// stay polynomial.
template <class F>
PolyMatrix<F> normal_basis(const Parametrization<F>& phi, const QuadraticForm<F>& G, std::uint64_t seed = 0) {
    const auto& T = phi.params;
    const F& k = T->field();
    const std::size_t n = phi.components.size(), m = T->nvars();
    if (G.size() != n) throw InputError("quadratic form size does not match the parametrization");
    const PolyMatrix<F> J = jacobian_matrix(phi.components);  // n x m
    PolyMatrix<F> A(m, std::vector<Polynomial<F>>(n, Polynomial<F>(T)));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (!k.is_zero(G.at(l, i))) A[j][i] = A[j][i] + J[l][j].scaled(G.at(l, i));
    std::mt19937_64 rng(derive_seed(seed, 61));
    std::vector<std::size_t> prow, pcol;
    for (int attempt = 0; attempt < 4 && prow.size() < m; ++attempt) {
        std::vector<typename F::Element> t;
        for (std::size_t v = 0; v < m; ++v) t.push_back(k.random(rng, 10000));
        std::vector<std::vector<typename F::Element>> num(m, std::vector<typename F::Element>(n));
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < n; ++i) num[j][i] = evaluate(A[j][i], t);
        auto [r, c] = detail::pivots_from_right(k, num);
        if (r.size() > prow.size()) {
            prow = r;
            pcol = c;
        }
    }
    if (prow.size() < m) throw HypothesisFailure("parametrization is degenerate: Jacobian rank drops everywhere sampled");
    // order pivots by row so B is the submatrix on rows prow, columns pcol
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pcol[a] < pcol[b]; });
    std::vector<std::size_t> rows, cols;
    for (auto i : order) {
        rows.push_back(prow[i]);
        cols.push_back(pcol[i]);
    }
    auto block = [&](std::optional<std::pair<std::size_t, std::size_t>> replace_col) {
        PolyMatrix<F> B(m, std::vector<Polynomial<F>>(m, Polynomial<F>(T)));
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                const std::size_t col = (replace_col && replace_col->first == b) ? replace_col->second : cols[b];
                B[a][b] = A[rows[a]][col];
            }
        return B;
    };
    const Polynomial<F> detB = determinant(block(std::nullopt), T);
    PolyMatrix<F> out;
    for (std::size_t f = 0; f < n; ++f) {
        if (std::find(cols.begin(), cols.end(), f) != cols.end()) continue;
        std::vector<Polynomial<F>> beta(n, Polynomial<F>(T));
        beta[f] = detB;
        for (std::size_t b = 0; b < m; ++b) beta[cols[b]] = -determinant(block(std::make_pair(b, f)), T);
        // unit leading coefficient on the first nonzero entry
        for (const auto& e : beta)
            if (!e.is_zero()) {
                const auto inv = k.inv(e.lc());
                for (auto& x : beta) x = x.scaled(inv);
                break;
            }
        out.push_back(std::move(beta));
    }
    return out;
}

template <class F>
EDParametrization<F> param_ed_correspondence(const Parametrization<F>& phi, const Parametrization<F>& psi,
                                             const QuadraticForm<F>& G, std::uint64_t seed = 0) {
    if (psi.components.size() != phi.params->nvars())
        throw InputError("psi must have one component per parameter of phi");
    const PolyMatrix<F> beta = normal_basis(phi, G, seed);
    const std::size_t c = beta.size();
    std::vector<std::string> names = psi.params->names();
    for (std::size_t i = 0; i < c; ++i) names.push_back(fresh_name(*psi.params, "w" + std::to_string(i + 1)));
    EDParametrization<F> out;
    out.params = make_ring<F>(names, phi.params->field());
    const std::size_t nv = psi.params->nvars();
    std::vector<std::size_t> vmap(nv);
    for (std::size_t i = 0; i < nv; ++i) vmap[i] = i;
    PolyVec<F> images;
    for (const auto& p : psi.components) images.push_back(remap(p, out.params, vmap));
    for (const auto& p : phi.components) out.x.push_back(substitute(p, images, out.params));
    for (const auto& row : beta) {
        std::vector<Polynomial<F>> r;
        for (const auto& e : row) r.push_back(substitute(e, images, out.params));
        out.normals.push_back(std::move(r));
    }
    out.u = out.x;
    for (std::size_t i = 0; i < c; ++i) {
        const auto w = Polynomial<F>::variable(out.params, nv + i);
        for (std::size_t j = 0; j < out.u.size(); ++j) out.u[j] = out.u[j] + w * out.normals[i][j];
    }
    return out;
}

// Implicit ideal of the image of theta in the ring of an EDProblem.
template <class F>
Ideal<F> implicitize(const EDParametrization<F>& th, const RingPtr<F>& xu) {
    std::vector<std::string> names = th.params->names();
    for (const auto& n : xu->names()) names.push_back(n);
    auto R = make_ring<F>(names, xu->field());
    const std::size_t np = th.params->nvars();
    std::vector<std::size_t> pmap(np);
    for (std::size_t i = 0; i < np; ++i) pmap[i] = i;
    PolyVec<F> g;
    const std::size_t nx = th.x.size();
    for (std::size_t i = 0; i < nx; ++i)
        g.push_back(Polynomial<F>::variable(R, np + i) - remap(th.x[i], R, pmap));
    for (std::size_t i = 0; i < nx; ++i)
        g.push_back(Polynomial<F>::variable(R, np + nx + i) - remap(th.u[i], R, pmap));
    std::vector<std::size_t> drop(pmap);
    return eliminate(Ideal<F>(R, std::move(g)), drop, xu);
}

// A generic data point x* + G^{-1} J(x*)^T w (plus a multiple of x* for
// cones) built from a smooth point x* of X on Z.
template <class F, class Rng>
std::vector<typename F::Element> data_point_from(const EDProblem<F>& P, const std::vector<typename F::Element>& xstar,
                                                 Rng& rng) {
    const auto& pair = P.pair();
    const F& k = pair.ring()->field();
    for (const auto& g : pair.Z().generators())
        if (!k.is_zero(evaluate(g, xstar))) throw InputError("sampled point is not on Z");
    bool smooth = false;
    for (const auto& m : pair.jacobian_minors())
        if (!k.is_zero(evaluate(m, xstar))) smooth = true;
    if (!smooth) throw HypothesisFailure("sampled point is singular on X");
    const auto J = pair.jacobian();
    const std::size_t n = P.nx();
    std::vector<typename F::Element> normal(n, k.zero());
    for (const auto& row : J) {
        const auto w = k.random(rng, 50);
        for (std::size_t i = 0; i < n; ++i) normal[i] = k.add(normal[i], k.mul(w, evaluate(row[i], xstar)));
    }
    const auto z = pair.form().is_identity() ? normal : detail::solve_square(k, pair.form().matrix(), normal);
    std::vector<typename F::Element> u(n);
    const auto lambda = P.model() == EDModel::Projective ? k.random_nonzero(rng, 50) : k.one();
    for (std::size_t i = 0; i < n; ++i) u[i] = k.add(k.mul(lambda, xstar[i]), z[i]);
    return u;
}

// Route (a): random parameter values of a polynomial parametrization of Z.
template <class F>
std::vector<typename F::Element> sample_data_point_param(const EDProblem<F>& P, const Parametrization<F>& z_param,
                                                         std::uint64_t seed) {
    const F& k = P.pair().ring()->field();
    std::mt19937_64 rng(derive_seed(seed, 71));
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<typename F::Element> v;
        for (std::size_t i = 0; i < z_param.params->nvars(); ++i) v.push_back(k.random(rng, 20));
        std::vector<typename F::Element> x;
        for (const auto& c : z_param.components) x.push_back(evaluate(c, v));
        try {
            return data_point_from(P, x, rng);
        } catch (const HypothesisFailure&) {
            continue;
        }
    }
    throw HypothesisFailure("every sampled parameter gave a singular point of X");
}

// Route (c): a random point of a data locus cut out by linear equations.
template <class F>
std::optional<std::vector<typename F::Element>> sample_linear_data_point(const Ideal<F>& DL, std::uint64_t seed) {
    const auto& R = DL.ring();
    const F& k = R->field();
    const std::size_t n = R->nvars();
    std::vector<std::vector<typename F::Element>> rows;
    for (const auto& g : DL.groebner()) {
        if (g.total_degree() > 1) return std::nullopt;
        std::vector<typename F::Element> row(n + 1, k.zero());
        for (const auto& t : g.terms()) {
            std::size_t v = n;
            for (std::size_t i = 0; i < n; ++i)
                if (t.m.exp[i]) v = i;
            row[v] = t.c;
        }
        rows.push_back(std::move(row));
    }
    // reduced basis of linear forms: each leading variable is solved for
    std::mt19937_64 rng(derive_seed(seed, 73));
    std::vector<typename F::Element> u(n, k.zero());
    std::vector<bool> lead(n, false);
    std::vector<std::size_t> leadvar;
    for (const auto& g : DL.groebner()) {
        std::size_t v = n;
        for (std::size_t i = 0; i < n; ++i)
            if (g.lm().exp[i]) v = i;
        if (v == n) return std::nullopt;  // unit ideal
        lead[v] = true;
        leadvar.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!lead[i]) u[i] = k.random(rng, 50);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t v = leadvar[r];
        auto acc = rows[r][n];
        for (std::size_t i = 0; i < n; ++i)
            if (i != v) acc = k.add(acc, k.mul(rows[r][i], u[i]));
        u[v] = k.neg(k.div(acc, rows[r][v]));
    }
    return u;
}

// Route (d): a principal data locus with a variable of degree one. Random
// values for the other coordinates, then solve for that variable.
template <class F>
std::optional<std::vector<typename F::Element>> sample_hypersurface_data_point(const Ideal<F>& DL, std::uint64_t seed) {
    const auto& gb = DL.groebner();
    if (gb.size() != 1 || gb[0].total_degree() < 1) return std::nullopt;
    const auto& g = gb[0];
    const F& k = DL.ring()->field();
    const std::size_t n = DL.ring()->nvars();
    std::mt19937_64 rng(derive_seed(seed, 79));
    for (int attempt = 0; attempt < 8; ++attempt) {
        for (std::size_t v = 0; v < n; ++v) {
            if (g.degree_in({v}) != 1) continue;
            std::vector<typename F::Element> u(n, k.zero());
            for (std::size_t i = 0; i < n; ++i)
                if (i != v) u[i] = k.random(rng, 50);
            const auto b = evaluate(g, u);
            u[v] = k.one();
            const auto a = k.sub(evaluate(g, u), b);
            if (k.is_zero(a)) continue;
            u[v] = k.neg(k.div(b, a));
            return u;
        }
    }
    return std::nullopt;
}

// Route (b): a prime-field point of Z cut down to finitely many points by a
// random linear space, plus a random normal vector.
inline std::optional<std::vector<PrimeField::Element>> sample_data_point_prime(const EDProblem<PrimeField>& P,
                                                                               std::uint64_t seed, int budget = 24) {
    const auto& pair = P.pair();
    const auto& R = pair.ring();
    std::mt19937_64 rng(derive_seed(seed, 79));
    for (int attempt = 0; attempt < budget; ++attempt) {
        std::vector<BlockSlice> blocks;
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < R->nvars(); ++i) all.push_back(i);
        blocks.push_back({all, static_cast<std::size_t>(pair.dim_z()), pair.projective()});
        const auto s = make_slice(R, blocks, derive_seed(seed, 300 + attempt), false);
        Ideal<PrimeField> I(s.target, s.apply(pair.Z().generators()));
        if (I.is_unit()) continue;
        std::optional<std::vector<PrimeField::Element>> pt;
        try {
            pt = rational_point(I, derive_seed(seed, 400 + attempt));
        } catch (const NotZeroDimensional&) {
            continue;
        }
        if (!pt) continue;
        std::vector<PrimeField::Element> x;
        for (const auto& img : s.images) x.push_back(evaluate(img, *pt));
        try {
            return data_point_from(P, x, rng);
        } catch (const HypothesisFailure&) {
            continue;
        }
    }
    return std::nullopt;
}

struct EDDResult {
    std::size_t sum_delta = 0;
    mpz_class deg_dl = 0;
    std::string deg_dl_method;     // "elimination" or "slice"
    std::size_t slice_product = 0; // sliced EDD * deg(DL)
    mpq_class edd = 0;
    bool integral = false;
    bool diagonal_disjoint = false;
    bool ratio_enabled = false;
    std::optional<std::size_t> fiber_count;
    bool fiber_simple = true;
    bool consistent = false;
    std::string note;
};

struct EDDOptions {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool exact_degree = true; // elimination and Hilbert series, else slicing
    bool sample_fiber = true;
};

// EDD(X|Z) = sum_{i<=d} delta_i / deg(DL) for projective pairs whose
// conormal misses the diagonal, confirmed by a fiber count.
template <class F>
EDDResult conditional_ed_degree(const EDProblem<F>& P, const MultidegreeVector& mdv, const EDDOptions& opt = {},
                                const std::optional<Parametrization<F>>& z_param = std::nullopt) {
    if (P.model() != EDModel::Projective) throw InputError("the degree formula needs a projective pair");
    EDDResult r;
    for (int i = 0; i <= mdv.d && static_cast<std::size_t>(i) < mdv.values.size(); ++i) r.sum_delta += mdv.values[i];
    Conormal<F> W(P.pair());
    r.diagonal_disjoint = !meets_diagonal(W, opt.seed);
    r.ratio_enabled = r.diagonal_disjoint;
    const DataLocusSlice sl = slice_data_locus(P, opt.seed);
    r.slice_product = sl.total;
    std::optional<Ideal<F>> DL;
    if (opt.exact_degree) {
        DL = P.data_locus(opt.seed);
        r.deg_dl = hilbert_dim_degree(*DL).degree;
        r.deg_dl_method = "elimination";
    } else {
        r.deg_dl = static_cast<unsigned long>(sl.distinct_data);
        r.deg_dl_method = "slice";
    }
    if (r.deg_dl == 0) throw HypothesisFailure("data locus is empty");
    if (r.ratio_enabled) {
        r.edd = mpq_class(mpz_class(static_cast<unsigned long>(r.sum_delta)), r.deg_dl);
        r.edd.canonicalize();
        r.integral = r.edd.get_den() == 1;
        if (!r.integral) r.note = "sum of multidegrees is not divisible by deg(DL): a hypothesis fails";
    } else {
        r.edd = mpq_class(mpz_class(static_cast<unsigned long>(sl.total)), r.deg_dl);
        r.edd.canonicalize();
        r.integral = r.edd.get_den() == 1;
        r.note = "conormal meets the diagonal: ratio route disabled, EDD from slice and fiber counts";
    }
    if (opt.sample_fiber) {
        std::optional<std::vector<typename F::Element>> u;
        if (z_param) u = sample_data_point_param(P, *z_param, opt.seed);
        if (!u && DL) u = sample_linear_data_point(*DL, opt.seed);
        if (!u && DL) u = sample_hypersurface_data_point(*DL, opt.seed);
        if constexpr (std::is_same_v<F, PrimeField>) {
            if (!u) u = sample_data_point_prime(P, opt.seed);
        }
        if (u) {
            try {
                const FiberCount fc = fiber_critical_count(P, *u, opt.seed, DL ? &*DL : nullptr);
                r.fiber_count = fc.distinct;
                r.fiber_simple = fc.simple();
            } catch (const PositiveDimensionalFiber&) {
                r.note += (r.note.empty() ? "" : "; ") + std::string("sampled fiber is positive-dimensional");
            }
        }
    }
    r.consistent = r.integral && (!r.fiber_count || mpz_class(static_cast<unsigned long>(*r.fiber_count)) == r.edd.get_num());
    if (r.ratio_enabled) r.consistent = r.consistent && r.slice_product == r.sum_delta;
    return r;
}

}  // namespace reltan
