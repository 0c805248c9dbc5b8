#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "reltan/zerodim.hpp"

namespace reltan {

template <class F>
using PolyMatrix = std::vector<std::vector<Polynomial<F>>>;

// splitmix64 step; used to derive independent seeds from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Symmetric invertible matrix defining the identification of a space with its dual.
template <class F>
class QuadraticForm {
public:
    using Element = typename F::Element;

    QuadraticForm() = default;
    static QuadraticForm identity(const F& k, std::size_t n) {
        QuadraticForm q;
        q.m_.assign(n, std::vector<Element>(n, k.zero()));
        for (std::size_t i = 0; i < n; ++i) q.m_[i][i] = k.one();
        q.identity_ = true;
        return q;
    }
    static QuadraticForm from_matrix(const F& k, std::vector<std::vector<Element>> m) {
        const std::size_t n = m.size();
        for (const auto& row : m)
            if (row.size() != n) throw InputError("quadratic form matrix must be square");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!k.equal(m[i][j], m[j][i])) throw InputError("quadratic form matrix must be symmetric");
        // invertibility by elimination on a copy
        auto a = m;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && k.is_zero(a[p][c])) ++p;
            if (p == n) throw InputError("quadratic form matrix must be invertible");
            std::swap(a[p], a[c]);
            const auto inv = k.inv(a[c][c]);
            for (std::size_t r = c + 1; r < n; ++r) {
                const auto s = k.mul(a[r][c], inv);
                for (std::size_t j = c; j < n; ++j) a[r][j] = k.sub(a[r][j], k.mul(s, a[c][j]));
            }
        }
        QuadraticForm q;
        q.m_ = std::move(m);
        q.identity_ = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!k.equal(q.m_[i][j], i == j ? k.one() : k.zero())) q.identity_ = false;
        return q;
    }

    std::size_t size() const { return m_.size(); }
    bool is_identity() const { return identity_; }
    const Element& at(std::size_t i, std::size_t j) const { return m_[i][j]; }
    const std::vector<std::vector<Element>>& matrix() const { return m_; }

    // Row vector v*G for polynomial entries.
    PolyVec<F> apply(const PolyVec<F>& v) const {
        if (identity_) return v;
        PolyVec<F> out;
        for (std::size_t j = 0; j < m_.size(); ++j) {
            Polynomial<F> acc(v[0].ring());
            for (std::size_t i = 0; i < m_.size(); ++i)
                if (!v[i].field().is_zero(m_[i][j])) acc = acc + v[i].scaled(m_[i][j]);
            out.push_back(acc);
        }
        return out;
    }

    // q(v) = v^T G v.
    Polynomial<F> evaluate(const PolyVec<F>& v) const {
        const PolyVec<F> g = apply(v);
        Polynomial<F> acc(v[0].ring());
        for (std::size_t i = 0; i < v.size(); ++i) acc = acc + v[i] * g[i];
        return acc;
    }

private:
    std::vector<std::vector<Element>> m_;
    bool identity_ = true;
};

// Partial derivatives of each generator with respect to the listed variables.
template <class F>
PolyMatrix<F> jacobian_matrix(const PolyVec<F>& gens, const std::vector<std::size_t>& vars) {
    PolyMatrix<F> J;
    for (const auto& g : gens) {
        std::vector<Polynomial<F>> row;
        for (auto v : vars) row.push_back(derivative(g, v));
        J.push_back(std::move(row));
    }
    return J;
}

template <class F>
PolyMatrix<F> jacobian_matrix(const PolyVec<F>& gens) {
    if (gens.empty()) return {};
    std::vector<std::size_t> vars(gens[0].ring()->nvars());
    for (std::size_t i = 0; i < vars.size(); ++i) vars[i] = i;
    return jacobian_matrix(gens, vars);
}

namespace detail {

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace detail

// All k x k minors in lexicographic order of (row subset, column subset).
// Laplace expansion along successive rows, sharing the smaller minors.
template <class F>
PolyVec<F> all_minors(const PolyMatrix<F>& M, std::size_t k, const RingPtr<F>& ring) {
    PolyVec<F> out;
    const std::size_t rows = M.size();
    const std::size_t cols = rows ? M[0].size() : 0;
    if (k == 0) return {Polynomial<F>::one(ring)};
    if (k > rows || k > cols) return out;
    std::vector<std::vector<std::size_t>> row_sets, col_sets;
    detail::subsets(rows, k, row_sets);
    detail::subsets(cols, k, col_sets);
    for (const auto& R : row_sets) {
        // level i: determinant of rows R[0..i) against each column subset of size i
        std::map<std::vector<std::size_t>, Polynomial<F>> level;
        level[{}] = Polynomial<F>::one(ring);
        for (std::size_t i = 0; i < k; ++i) {
            std::map<std::vector<std::size_t>, Polynomial<F>> next;
            for (const auto& [S, d] : level) {
                if (d.is_zero()) continue;
                for (std::size_t c = 0; c < cols; ++c) {
                    if (std::binary_search(S.begin(), S.end(), c)) continue;
                    const auto& entry = M[R[i]][c];
                    if (entry.is_zero()) continue;
                    std::vector<std::size_t> T = S;
                    T.insert(std::upper_bound(T.begin(), T.end(), c), c);
                    // sign: position of c among T counted from the end of the expansion row
                    std::size_t pos = static_cast<std::size_t>(std::lower_bound(T.begin(), T.end(), c) - T.begin());
                    const bool negative = ((i - pos) % 2) == 1;
                    Polynomial<F> term = entry * d;
                    auto it = next.find(T);
                    if (it == next.end()) next.emplace(T, negative ? -term : term);
                    else it->second = negative ? it->second - term : it->second + term;
                }
            }
            level = std::move(next);
        }
        for (const auto& C : col_sets) {
            auto it = level.find(C);
            if (it != level.end() && !it->second.is_zero()) out.push_back(it->second);
        }
    }
    return out;
}

// Ideal of k x k minors; the zero ideal when k exceeds the matrix size.
template <class F>
Ideal<F> minors_ideal(const PolyMatrix<F>& M, std::size_t k, const RingPtr<F>& ring) {
    return Ideal<F>(ring, all_minors(M, k, ring));
}

template <class F>
Polynomial<F> determinant(const PolyMatrix<F>& M, const RingPtr<F>& ring) {
    auto m = all_minors(M, M.size(), ring);
    return m.empty() ? Polynomial<F>(ring) : m.front();
}

// I_X + c x c minors of the Jacobian; no saturation.
template <class F>
Ideal<F> singular_locus_ideal(const Ideal<F>& IX, std::size_t codim) {
    PolyVec<F> gens = IX.generators();
    for (auto& m : all_minors(jacobian_matrix(IX.generators()), codim, IX.ring())) gens.push_back(std::move(m));
    return Ideal<F>(IX.ring(), std::move(gens));
}

// One block of coordinates cut by `codim` generic linear conditions. Projective
// blocks are then dehomogenized on a random affine chart.
struct BlockSlice {
    std::vector<std::size_t> vars;
    std::size_t codim = 0;
    bool projective = true;
};

// Substitution that parametrizes each block by a random linear subspace.
// Source variables outside every block are carried over unchanged.
template <class F>
struct LinearSlice {
    RingPtr<F> target;
    PolyVec<F> images;
    bool empty = false;                 // some projective block was cut to nothing
    std::optional<std::size_t> sat_var; // index of the extra variable, if requested

    Polynomial<F> apply(const Polynomial<F>& p) const { return substitute(p, images, target); }
    PolyVec<F> apply(const PolyVec<F>& v) const {
        PolyVec<F> out;
        for (const auto& p : v) out.push_back(apply(p));
        return out;
    }
    PolyMatrix<F> apply(const PolyMatrix<F>& M) const {
        PolyMatrix<F> out;
        for (const auto& row : M) out.push_back(apply(row));
        return out;
    }
};

template <class F, class Rng>
typename F::Element slice_coefficient(const F& k, Rng& rng) {
    return k.random(rng, 10000);
}

template <class F>
LinearSlice<F> make_slice(const RingPtr<F>& source, const std::vector<BlockSlice>& blocks, std::uint64_t seed,
                          bool saturation_variable) {
    const F& k = source->field();
    std::mt19937_64 rng(seed);
    LinearSlice<F> s;
    std::vector<bool> covered(source->nvars(), false);
    std::vector<std::string> names;
    struct Plan {
        std::size_t first_param, nparams;
    };
    std::vector<Plan> plans;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& blk = blocks[b];
        for (auto v : blk.vars) covered[v] = true;
        const std::size_t m = blk.vars.size();
        std::size_t params = blk.codim >= m ? 0 : m - blk.codim;
        if (blk.projective) {
            if (params == 0) s.empty = true;
            params = params ? params - 1 : 0;
        }
        plans.push_back({names.size(), params});
        for (std::size_t j = 0; j < params; ++j) names.push_back("s" + std::to_string(b) + "_" + std::to_string(j));
    }
    std::vector<std::size_t> carried;
    const std::size_t first_carried = names.size();
    for (std::size_t v = 0; v < source->nvars(); ++v)
        if (!covered[v]) {
            carried.push_back(v);
            names.push_back(source->name(v));
        }
    if (saturation_variable) {
        s.sat_var = names.size();
        names.push_back("t_sat");
    }
    s.target = make_ring<F>(names, k, MonomialOrder::grevlex());
    s.images.assign(source->nvars(), Polynomial<F>(s.target));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& blk = blocks[b];
        const Plan& pl = plans[b];
        for (auto v : blk.vars) {
            // x_v = sum_j a_vj s_j + a_v0 (the chart / affine offset)
            Polynomial<F> img = Polynomial<F>::constant(s.target, slice_coefficient(k, rng));
            for (std::size_t j = 0; j < pl.nparams; ++j)
                img = img + Polynomial<F>::variable(s.target, pl.first_param + j).scaled(slice_coefficient(k, rng));
            s.images[v] = s.empty ? Polynomial<F>(s.target) : img;
        }
    }
    for (std::size_t i = 0; i < carried.size(); ++i)
        s.images[carried[i]] = Polynomial<F>::variable(s.target, first_carried + i);
    return s;
}

// Random linear combination of the generators, used as a single saturating
// element on slices.
template <class F>
Polynomial<F> random_combination(const PolyVec<F>& gens, const RingPtr<F>& ring, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Polynomial<F> acc(ring);
    for (const auto& g : gens) acc = acc + g.scaled(ring->field().random_nonzero(rng, 10000));
    return acc;
}

// Homogeneous form of degree e with every monomial present and coefficients
// drawn from [-bound, bound] minus zero.
template <class F, class Rng>
Polynomial<F> random_form(const RingPtr<F>& R, unsigned e, Rng& rng, long bound = 100) {
    std::vector<Monomial> mons;
    std::function<void(std::size_t, unsigned, Monomial)> rec = [&](std::size_t v, unsigned left, Monomial m) {
        if (v + 1 == R->nvars()) {
            m.exp[v] = static_cast<std::uint16_t>(left);
            m.refresh();
            mons.push_back(m);
            return;
        }
        for (unsigned a = 0; a <= left; ++a) {
            Monomial mm = m;
            mm.exp[v] = static_cast<std::uint16_t>(a);
            rec(v + 1, left - a, mm);
        }
    };
    rec(0, e, Monomial{});
    std::vector<Term<F>> terms;
    for (const auto& m : mons) terms.push_back({m, R->field().random_nonzero(rng, bound)});
    return Polynomial<F>::from_terms(R, std::move(terms));
}

// Random combination of homogeneous polynomials padded to a common degree
// by powers of a random linear form in `vars` (all variables when empty).
template <class F, class Rng>
Polynomial<F> homogeneous_combination(const PolyVec<F>& polys, const RingPtr<F>& R, Rng& rng,
                                      std::vector<std::size_t> vars = {}) {
    if (vars.empty())
        for (std::size_t i = 0; i < R->nvars(); ++i) vars.push_back(i);
    int top = 0;
    for (const auto& p : polys) top = std::max(top, p.total_degree());
    const auto l = random_linear_form(R, vars, rng);
    Polynomial<F> acc(R);
    for (const auto& p : polys) {
        if (p.is_zero()) continue;
        acc = acc + (p * pow(l, static_cast<unsigned>(top - p.total_degree()))).scaled(R->field().random_nonzero(rng, 10000));
    }
    return acc;
}

// Points, with multiplicity, of the sliced system outside V(sat). Uses the
// extra variable t: k[s,t]/(I + <t*sat - 1>) is the localization at sat.
template <class F>
std::size_t count_on_slice(const LinearSlice<F>& s, const PolyVec<F>& sliced_gens,
                           const std::optional<Polynomial<F>>& sliced_sat) {
    if (s.empty) return 0;
    PolyVec<F> gens = sliced_gens;
    if (sliced_sat) {
        if (!s.sat_var) throw Error("internal: slice built without a saturation variable");
        gens.push_back(Polynomial<F>::variable(s.target, *s.sat_var) * *sliced_sat - Polynomial<F>::one(s.target));
    }
    Ideal<F> I(s.target, std::move(gens));
    if (I.is_unit()) return 0;
    const HilbertData h = hilbert_data(I.leading_monomials(), s.target->nvars());
    if (h.krull_dim > 0) throw NotZeroDimensional("slice is not zero-dimensional");
    return h.degree.get_ui();
}

// Slices an ideal, counts the points of the zero-dimensional quotient, and
// repeats with an independent seed; disagreement is reported as an error.
template <class F>
std::size_t slice_and_count(const Ideal<F>& I, const std::vector<BlockSlice>& blocks, std::uint64_t seed) {
    std::size_t counts[2];
    for (int r = 0; r < 2; ++r) {
        const auto s = make_slice(I.ring(), blocks, derive_seed(seed, 1000 + r), false);
        counts[r] = count_on_slice<F>(s, s.apply(I.generators()), std::nullopt);
    }
    if (counts[0] != counts[1])
        throw SeedDisagreement("slice counts disagree between seeds: " + std::to_string(counts[0]) + " vs " +
                               std::to_string(counts[1]));
    return counts[0];
}

// Ambient space, X and Z with Z inside X, and the quadratic form.
template <class F>
class VarietyPair {
public:
    VarietyPair(Ideal<F> X, Ideal<F> Z, bool projective, std::optional<QuadraticForm<F>> form = std::nullopt)
        : X_(std::move(X)), Z_(std::move(Z)), projective_(projective) {
        require_same_ring(Polynomial<F>(X_.ring()), Polynomial<F>(Z_.ring()));
        const std::size_t n = X_.ring()->nvars();
        form_ = form ? *form : QuadraticForm<F>::identity(X_.ring()->field(), n);
        if (form_.size() != n) throw InputError("quadratic form size does not match the ambient space");
        if (projective_ && (!X_.is_homogeneous() || !Z_.is_homogeneous()))
            throw InputError("projective pairs need homogeneous generators");
        if (X_.is_zero_ideal()) throw InputError("X must be a proper subvariety");
        if (!radical_contains(Z_, X_)) throw HypothesisFailure("Z is not contained in X");
        const DimDegree dx = dim_degree(X_);
        const DimDegree dz = dim_degree(Z_);
        if (dx.empty()) throw HypothesisFailure("X is empty");
        if (dz.empty()) throw HypothesisFailure("Z is empty");
        dim_x_ = dx.dim;
        dim_z_ = dz.dim;
        deg_z_ = dz.degree;
        deg_x_ = dx.degree;
        codim_ = static_cast<std::size_t>(static_cast<int>(ambient_dim()) - dim_x_);
    }

    const RingPtr<F>& ring() const { return X_.ring(); }
    const Ideal<F>& X() const { return X_; }
    const Ideal<F>& Z() const { return Z_; }
    bool projective() const { return projective_; }
    const QuadraticForm<F>& form() const { return form_; }

    // N: dimension of the ambient (projective or affine) space.
    std::size_t ambient_dim() const { return projective_ ? ring()->nvars() - 1 : ring()->nvars(); }
    int dim_x() const { return dim_x_; }
    int dim_z() const { return dim_z_; }
    std::size_t codim() const { return codim_; }
    const mpz_class& deg_z() const { return deg_z_; }
    const mpz_class& deg_x() const { return deg_x_; }

    // Dimension and degree in the pair's model.
    DimDegree dim_degree(const Ideal<F>& I) const { return projective_ ? hilbert_dim_degree(I) : affine_dim_degree(I); }

    PolyMatrix<F> jacobian() const { return jacobian_matrix(X_.generators()); }

    const Ideal<F>& singular_ideal() const {
        std::call_once(sing_->once, [&] { sing_->ideal = singular_locus_ideal(X_, codim_); });
        return sing_->ideal;
    }

    // Generators of the Jacobian minors alone (these cut X_sing inside X).
    PolyVec<F> jacobian_minors() const { return all_minors(jacobian(), codim_, ring()); }

    // Whether Z avoids X_sing (projectively: only the origin in common).
    bool z_avoids_singular_locus() const {
        std::call_once(avoid_->once, [&] {
            Ideal<F> meet = ideal_sum(Z_, singular_ideal());
            avoid_->value = dim_degree(meet).empty();
        });
        return avoid_->value;
    }

    bool z_inside_singular_locus() const { return radical_contains(Z_, singular_ideal()); }

private:
    struct SingCache {
        std::once_flag once;
        Ideal<F> ideal;
    };
    struct FlagCache {
        std::once_flag once;
        bool value = false;
    };

    Ideal<F> X_, Z_;
    bool projective_;
    QuadraticForm<F> form_;
    int dim_x_ = 0, dim_z_ = 0;
    std::size_t codim_ = 0;
    mpz_class deg_z_, deg_x_;
    std::shared_ptr<SingCache> sing_ = std::make_shared<SingCache>();
    std::shared_ptr<FlagCache> avoid_ = std::make_shared<FlagCache>();
};

}  // namespace reltan
