#pragma once

#include <atomic>
#include <cctype>
#include <exception>
#include <optional>
#include <thread>

#include "reltan/geometry.hpp"

namespace reltan {

// Dual coordinate names: the stem followed by whatever follows the leading
// letters of each name (x11 -> y11, c3 -> y3). Clashes get primes appended.
inline std::vector<std::string> dual_variable_names(const std::vector<std::string>& names, const std::string& stem) {
    std::vector<std::string> out;
    auto taken = [&](const std::string& s) {
        return std::find(names.begin(), names.end(), s) != names.end() ||
               std::find(out.begin(), out.end(), s) != out.end();
    };
    for (const auto& n : names) {
        std::size_t i = 0;
        while (i < n.size() && std::isalpha(static_cast<unsigned char>(n[i]))) ++i;
        std::string cand = i < n.size() ? stem + n.substr(i) : stem + "_" + n;
        while (taken(cand)) cand += "'";
        out.push_back(cand);
    }
    return out;
}

// delta_j for j = 0..N-1-n+d. Offsets are the first and last nonzero index.
struct MultidegreeVector {
    std::size_t N = 0;
    int n = 0, d = 0;
    std::vector<std::size_t> values;

    std::optional<std::size_t> first() const {
        for (std::size_t j = 0; j < values.size(); ++j)
            if (values[j]) return j;
        return std::nullopt;
    }
    std::optional<std::size_t> last() const {
        for (std::size_t j = values.size(); j-- > 0;)
            if (values[j]) return j;
        return std::nullopt;
    }
    std::vector<std::size_t> nonzero_range() const {
        if (!first()) return {};
        return {values.begin() + static_cast<std::ptrdiff_t>(*first()),
                values.begin() + static_cast<std::ptrdiff_t>(*last()) + 1};
    }
    std::size_t sum_up_to(std::size_t upto) const {
        std::size_t s = 0;
        for (std::size_t j = 0; j <= upto && j < values.size(); ++j) s += values[j];
        return s;
    }
    // dim of the relative dual read off the first nonzero multidegree.
    std::optional<int> dual_dimension() const {
        if (!first()) return std::nullopt;
        return static_cast<int>(N) - 1 - static_cast<int>(*first()) - n + d;
    }
};

// Relative polar degrees mu_i = delta_{d-i}, i = 0..d.
inline std::vector<std::size_t> relative_polar_degrees(const MultidegreeVector& m) {
    std::vector<std::size_t> mu;
    for (int i = 0; i <= m.d; ++i) {
        const std::size_t j = static_cast<std::size_t>(m.d - i);
        if (j >= m.values.size()) throw InputError("polar index out of range");
        mu.push_back(m.values[j]);
    }
    return mu;
}

// Runs f(0..count-1) on up to `jobs` threads, forwarding the caller's Groebner
// limits and rethrowing the first failure.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& f) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    const GroebnerLimits limits = current_limits();
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, count); ++t)
        pool.emplace_back([&] {
            LimitScope scope(limits);
            for (;;) {
                const std::size_t i = next++;
                if (i >= count) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// The relative conormal variety of a projective pair, as the incidence of
// points x of Z with vectors y such that yG is normal to X at x. Lives in the
// ring (x, y).
template <class F>
class Conormal {
public:
    explicit Conormal(const VarietyPair<F>& pair, std::string dual_stem = "y")
        : pair_(pair) {
        if (!pair.projective()) throw InputError("conormal varieties need a projective pair");
        if (pair.z_inside_singular_locus()) throw EmptyRelativeDual();
        const auto& R = pair.ring();
        nx_ = R->nvars();
        dual_names_ = dual_variable_names(R->names(), dual_stem);
        std::vector<std::string> names = R->names();
        for (const auto& n : dual_names_) names.push_back(n);
        xy_ = make_ring<F>(names, R->field());
        y_ring_ = make_ring<F>(dual_names_, R->field());
        std::vector<std::size_t> map(nx_);
        for (std::size_t i = 0; i < nx_; ++i) map[i] = i;
        for (const auto& g : pair.Z().generators()) z_gens_.push_back(remap(g, xy_, map));
        PolyVec<F> y;
        for (std::size_t i = 0; i < nx_; ++i) y.push_back(Polynomial<F>::variable(xy_, nx_ + i));
        matrix_.push_back(pair.form().apply(y));
        for (const auto& row : pair.jacobian()) {
            std::vector<Polynomial<F>> lifted;
            for (const auto& e : row) lifted.push_back(remap(e, xy_, map));
            matrix_.push_back(std::move(lifted));
        }
        for (const auto& m : pair.jacobian_minors()) sing_minors_.push_back(remap(m, xy_, map));
        avoids_sing_ = pair.z_avoids_singular_locus();
    }

    const VarietyPair<F>& pair() const { return pair_; }
    const RingPtr<F>& ring() const { return xy_; }
    const RingPtr<F>& dual_ring() const { return y_ring_; }
    const std::vector<std::string>& dual_names() const { return dual_names_; }
    std::size_t nx() const { return nx_; }
    std::size_t minor_size() const { return pair_.codim() + 1; }
    bool z_avoids_singular_locus() const { return avoids_sing_; }
    std::vector<std::size_t> x_vars() const { return range(0); }
    std::vector<std::size_t> y_vars() const { return range(nx_); }

    // I_Z + (c+1)-minors of (yG; J(f)), before any saturation.
    PolyVec<F> unsaturated_generators() const {
        PolyVec<F> g = z_gens_;
        for (auto& m : all_minors(matrix_, minor_size(), xy_)) g.push_back(std::move(m));
        return g;
    }

    // Points of W meeting a generic x-space of codim j and y-space of codim k.
    std::size_t slice_count(std::size_t j, std::size_t k, std::uint64_t seed) const {
        std::vector<BlockSlice> blocks{{x_vars(), j, true}, {y_vars(), k, true}};
        const auto s = make_slice(xy_, blocks, seed, !avoids_sing_);
        if (s.empty) return 0;
        PolyVec<F> gens = s.apply(z_gens_);
        for (auto& m : all_minors(s.apply(matrix_), minor_size(), s.target)) gens.push_back(std::move(m));
        std::optional<Polynomial<F>> sat;
        if (!avoids_sing_) sat = random_combination(s.apply(sing_minors_), s.target, derive_seed(seed, 7));
        return count_on_slice(s, gens, sat);
    }

    // Saturated ideal of W. Saturations by the singular locus and by the two
    // irrelevant ideals use random combinations of the generators unless
    // `exact`, in which case the generator-wise intersections are formed.
    const Ideal<F>& ideal(std::uint64_t seed = 0, bool exact = false) const {
        std::call_once(cache_->once, [&] { cache_->ideal = compute_ideal(seed, exact); });
        return cache_->ideal;
    }

    // y <- H in the unsaturated system, then saturation by the singular locus in x.
    Ideal<F> contact_locus(const std::vector<typename F::Element>& H, std::uint64_t seed = 0) const {
        const auto& R = pair_.ring();
        if (H.size() != nx_) throw InputError("dual point has the wrong number of coordinates");
        PolyVec<F> images;
        for (std::size_t i = 0; i < nx_; ++i) images.push_back(Polynomial<F>::variable(R, i));
        for (std::size_t i = 0; i < nx_; ++i) images.push_back(Polynomial<F>::constant(R, H[i]));
        PolyVec<F> gens;
        for (const auto& g : unsaturated_generators()) gens.push_back(substitute(g, images, R));
        Ideal<F> I(R, std::move(gens));
        if (avoids_sing_) return I;
        std::mt19937_64 rng(derive_seed(seed, 11));
        PolyVec<F> minors;
        for (const auto& m : sing_minors_) minors.push_back(substitute(m, images, R));
        return saturate_element(I, homogeneous_combination(minors, R, rng));
    }

private:
    std::vector<std::size_t> range(std::size_t from) const {
        std::vector<std::size_t> v(nx_);
        for (std::size_t i = 0; i < nx_; ++i) v[i] = from + i;
        return v;
    }

    Ideal<F> compute_ideal(std::uint64_t seed, bool exact) const {
        Ideal<F> I(xy_, unsaturated_generators());
        std::mt19937_64 rng(derive_seed(seed, 3));
        if (exact) {
            if (!avoids_sing_) {
                PolyVec<F> sing = z_gens_;
                for (const auto& m : sing_minors_) sing.push_back(m);
                I = saturate_ideal(I, Ideal<F>(xy_, sing));
            }
            PolyVec<F> xs, ys;
            for (auto v : x_vars()) xs.push_back(Polynomial<F>::variable(xy_, v));
            for (auto v : y_vars()) ys.push_back(Polynomial<F>::variable(xy_, v));
            if (avoids_sing_) I = saturate_ideal(I, Ideal<F>(xy_, xs));
            return saturate_ideal(I, Ideal<F>(xy_, ys));
        }
        // the singular minors vanish at x = 0, so they also remove the x-irrelevant locus
        if (!avoids_sing_) I = saturate_element(I, homogeneous_combination(sing_minors_, xy_, rng, x_vars()));
        else I = saturate_element(I, random_linear_form(xy_, x_vars(), rng));
        return saturate_element(I, random_linear_form(xy_, y_vars(), rng));
    }

    struct Cache {
        std::once_flag once;
        Ideal<F> ideal;
    };

    const VarietyPair<F>& pair_;
    std::size_t nx_ = 0;
    std::vector<std::string> dual_names_;
    RingPtr<F> xy_, y_ring_;
    PolyVec<F> z_gens_;
    PolyMatrix<F> matrix_;
    PolyVec<F> sing_minors_;
    bool avoids_sing_ = false;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Each delta_j from two independently seeded slices.
template <class F>
MultidegreeVector relative_multidegrees(const Conormal<F>& W, std::uint64_t seed, std::size_t jobs = 1) {
    const auto& P = W.pair();
    MultidegreeVector m;
    m.N = P.ambient_dim();
    m.n = P.dim_x();
    m.d = P.dim_z();
    const int top = static_cast<int>(m.N) - 1 - m.n + m.d;
    m.values.assign(static_cast<std::size_t>(top + 1), 0);
    // the x-slice must meet Z, so delta_j = 0 for j > d
    const std::size_t jmax = static_cast<std::size_t>(std::min(m.d, top));
    parallel_for(jmax + 1, jobs, [&](std::size_t j) {
        const std::size_t k = static_cast<std::size_t>(top) - j;
        const std::size_t a = W.slice_count(j, k, derive_seed(seed, 2 * j));
        const std::size_t b = W.slice_count(j, k, derive_seed(seed, 2 * j + 1));
        if (a != b)
            throw SeedDisagreement("delta_" + std::to_string(j) + " differs between seeds: " + std::to_string(a) +
                                   " vs " + std::to_string(b));
        m.values[j] = a;
    });
    return m;
}

// The relative dual X_Z^perp in the dual coordinates.
template <class F>
Ideal<F> relative_dual_ideal(const Conormal<F>& W, std::uint64_t seed = 0, bool exact = false) {
    return eliminate(W.ideal(seed, exact), W.x_vars(), W.dual_ring());
}

// Moves an ideal of the dual ring into a ring with the primal names.
template <class F>
Ideal<F> rename_ring(const Ideal<F>& I, const RingPtr<F>& target) {
    PolyVec<F> g;
    std::vector<std::size_t> map(I.ring()->nvars());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
    for (const auto& p : I.generators()) g.push_back(remap(p, target, map));
    return Ideal<F>(target, std::move(g));
}

// Whether the conormal meets the diagonal x ~ y of P^N x P^N.
template <class F>
bool meets_diagonal(const Conormal<F>& W, std::uint64_t seed = 0) {
    const auto& P = W.pair();
    const auto& R = P.ring();
    std::mt19937_64 rng(derive_seed(seed, 5));
    if (W.z_avoids_singular_locus()) {
        // W is closed over Z, so a diagonal point is x in Z with xG normal at x
        PolyVec<F> xs;
        for (std::size_t i = 0; i < R->nvars(); ++i) xs.push_back(Polynomial<F>::variable(R, i));
        PolyMatrix<F> M;
        M.push_back(P.form().apply(xs));
        for (const auto& row : P.jacobian()) M.push_back(row);
        Ideal<F> D = ideal_with(P.Z(), all_minors(M, P.codim() + 1, R));
        return !hilbert_dim_degree(D).empty();
    }
    const auto& X = W.ring();
    PolyMatrix<F> M(2);
    for (std::size_t i = 0; i < W.nx(); ++i) {
        M[0].push_back(Polynomial<F>::variable(X, i));
        M[1].push_back(Polynomial<F>::variable(X, W.nx() + i));
    }
    PolyVec<F> extra = all_minors(M, 2, X);
    extra.push_back(random_linear_form(X, W.x_vars(), rng) - Polynomial<F>::one(X));
    extra.push_back(random_linear_form(X, W.y_vars(), rng) - Polynomial<F>::one(X));
    return !ideal_with(W.ideal(seed), extra).is_unit();
}

enum class TriState { Yes, No, Inconclusive };

inline const char* to_string(TriState t) {
    switch (t) {
        case TriState::Yes: return "true";
        case TriState::No: return "false";
        default: return "inconclusive";
    }
}

// Defects, dual regularity and the relative biduality properties of a pair.
struct DefectReport {
    int N = 0, n = 0, d = 0;
    int dim_dual_x = -1, dim_dual_xz = -1;
    int def_x = 0, def_xz = 0;
    int codim_xz_in_dual = 0;
    int codim_z_in_x = 0;
    TriState dual_regular = TriState::Inconclusive;
    TriState reflexive = TriState::Inconclusive;
    TriState reciprocal = TriState::Inconclusive;
    bool def_equal = false;
    // Only meaningful when dual_regular is Yes.
    bool equivalence_holds = false;
    bool codim_identity_holds = false;
    std::optional<int> contact_dimension;
    std::string note;
};

// Everything needed about the pair (X^perp, X_Z^perp) placed in the dual ring.
template <class F>
struct DualData {
    Ideal<F> dual_x, dual_xz;
    DimDegree dd_x, dd_xz;
};

template <class F>
DualData<F> compute_duals(const VarietyPair<F>& pair, const Conormal<F>& W, std::uint64_t seed) {
    DualData<F> out;
    out.dual_xz = relative_dual_ideal(W, seed);
    if (same_ideal(pair.X(), pair.Z())) {
        out.dual_x = out.dual_xz;
    } else {
        VarietyPair<F> XX(pair.X(), pair.X(), true, pair.form());
        Conormal<F> WX(XX, "y");
        out.dual_x = relative_dual_ideal(WX, seed);
    }
    out.dd_x = hilbert_dim_degree(out.dual_x);
    out.dd_xz = hilbert_dim_degree(out.dual_xz);
    return out;
}

template <class F>
DefectReport defect_pair(const VarietyPair<F>& pair, std::uint64_t seed = 0) {
    Conormal<F> W(pair, "y");
    const DualData<F> D = compute_duals(pair, W, seed);
    DefectReport r;
    r.N = static_cast<int>(pair.ambient_dim());
    r.n = pair.dim_x();
    r.d = pair.dim_z();
    r.dim_dual_x = D.dd_x.dim;
    r.dim_dual_xz = D.dd_xz.dim;
    r.codim_z_in_x = r.n - r.d;
    r.def_x = r.N - 1 - r.dim_dual_x;
    r.def_xz = r.N - 1 - r.codim_z_in_x - r.dim_dual_xz;
    r.codim_xz_in_dual = r.dim_dual_x - r.dim_dual_xz;
    r.def_equal = r.def_x == r.def_xz;
    r.codim_identity_holds = r.codim_xz_in_dual == r.codim_z_in_x + r.def_xz - r.def_x;

    // The dual pair lives in the y ring; its own dual coordinates are renamed
    // back to the primal names afterwards.
    try {
        VarietyPair<F> dual(D.dual_x, D.dual_xz, true, pair.form());
        if (dual.z_inside_singular_locus()) {
            // no pair (x, H) with H smooth on the dual exists
            r.dual_regular = TriState::No;
            r.reflexive = TriState::No;
            r.reciprocal = TriState::No;
            r.note = "relative dual lies in the singular locus of the dual variety";
            return r;
        }
        r.dual_regular = TriState::Yes;
        Conormal<F> V(dual, "x");
        // swap (y, x') back to (x, y)
        const Ideal<F>& Vi = V.ideal(seed);
        std::vector<std::size_t> swap(2 * W.nx());
        for (std::size_t i = 0; i < W.nx(); ++i) {
            swap[i] = W.nx() + i;
            swap[W.nx() + i] = i;
        }
        PolyVec<F> g;
        for (const auto& p : Vi.generators()) g.push_back(remap(p, W.ring(), swap));
        Ideal<F> swapped(W.ring(), std::move(g));
        r.reflexive = radical_equal(swapped, W.ideal(seed)) ? TriState::Yes : TriState::No;
        Ideal<F> double_dual = rename_ring(relative_dual_ideal(V, seed), pair.ring());
        r.reciprocal = radical_equal(double_dual, pair.Z()) ? TriState::Yes : TriState::No;
        r.equivalence_holds = (r.def_equal == (r.reflexive == TriState::Yes)) &&
                              (r.def_equal == (r.reciprocal == TriState::Yes));
    } catch (const ResourceExhausted& e) {
        r.dual_regular = TriState::Inconclusive;
        r.note = std::string("dual pair not computable: ") + e.what();
    }
    return r;
}

// Result of comparing the multidegrees of X with those of Z = X cap Y.
struct SliceCheck {
    MultidegreeVector of_x, of_pair;
    mpz_class deg_y;
    int c = 0, def_x = 0;
    bool multidegree_identity = false;
    bool codim_identity = false;
    std::optional<int> codim_xz_in_dual;
};

// Z = X cap Y for Y a random complete intersection of the given degrees.
template <class F>
SliceCheck generic_slice_check(const Ideal<F>& X, const std::vector<unsigned>& degrees, std::uint64_t seed,
                               std::size_t jobs = 1) {
    const auto& R = X.ring();
    std::mt19937_64 rng(derive_seed(seed, 17));
    PolyVec<F> ys;
    SliceCheck out;
    out.deg_y = 1;
    for (unsigned e : degrees) {
        ys.push_back(random_form(R, e, rng, 100));
        out.deg_y *= e;
    }
    out.c = static_cast<int>(degrees.size());
    VarietyPair<F> XX(X, X, true);
    VarietyPair<F> XZ(X, ideal_with(X, ys), true);
    Conormal<F> WX(XX), WZ(XZ);
    out.of_x = relative_multidegrees(WX, derive_seed(seed, 1), jobs);
    out.of_pair = relative_multidegrees(WZ, derive_seed(seed, 2), jobs);
    out.def_x = static_cast<int>(out.of_x.N) - 1 - *out.of_x.dual_dimension();
    bool ok = true;
    for (int i = std::max(out.def_x, out.c); i <= out.of_x.n; ++i) {
        const mpz_class lhs = static_cast<unsigned long>(out.of_pair.values.at(static_cast<std::size_t>(i - out.c)));
        const mpz_class rhs = out.deg_y * static_cast<unsigned long>(out.of_x.values.at(static_cast<std::size_t>(i)));
        if (lhs != rhs) ok = false;
    }
    out.multidegree_identity = ok;
    if (auto dz = out.of_pair.dual_dimension()) {
        out.codim_xz_in_dual = *out.of_x.dual_dimension() - *dz;
        out.codim_identity = *out.codim_xz_in_dual == std::max(0, out.c - out.def_x);
    }
    return out;
}

}  // namespace reltan
