#pragma once

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>
#include <vector>

#include "reltan/polynomial.hpp"

namespace reltan {

// Caps on a single Groebner computation. Zero means unlimited. Hitting a cap
// throws ResourceExhausted; the engine never returns a truncated basis.
struct GroebnerLimits {
    std::size_t max_pairs = 0;
    std::uint32_t max_degree = 0;
    double max_seconds = 0;
};

namespace detail {
inline GroebnerLimits& ambient_limits() {
    thread_local GroebnerLimits limits;
    return limits;
}
}  // namespace detail

// Installs limits for every Groebner computation started on this thread
// while the scope is alive.
class LimitScope {
public:
    explicit LimitScope(const GroebnerLimits& l) : saved_(detail::ambient_limits()) { detail::ambient_limits() = l; }
    ~LimitScope() { detail::ambient_limits() = saved_; }
    LimitScope(const LimitScope&) = delete;
    LimitScope& operator=(const LimitScope&) = delete;

private:
    GroebnerLimits saved_;
};

inline const GroebnerLimits& current_limits() { return detail::ambient_limits(); }

namespace detail {

// Geometric bucket accumulator. Each bucket holds terms in ascending order so the
// current leading term sits at back().
template <class F>
class GeoBucket {
public:
    explicit GeoBucket(const Ring<F>& ring) : ring_(ring), k_(ring.field()) {}

    // Adds c*m*p[from:], where p is in descending order.
    void add_scaled(const Polynomial<F>& p, std::size_t from, const typename F::Element& c, const Monomial& m) {
        const auto& t = p.terms();
        if (from >= t.size()) return;
        std::vector<Term<F>> v;
        v.reserve(t.size() - from);
        for (std::size_t i = t.size(); i-- > from;) v.push_back({t[i].m * m, k_.mul(t[i].c, c)});
        insert(std::move(v));
    }

    void add_polynomial(const Polynomial<F>& p) {
        const auto& t = p.terms();
        std::vector<Term<F>> v(t.rbegin(), t.rend());
        insert(std::move(v));
    }

    // Removes and returns the combined leading term; false when empty.
    bool pop_lead(Term<F>& out) {
        for (;;) {
            int best = -1;
            for (std::size_t i = 0; i < buckets_.size(); ++i) {
                if (buckets_[i].empty()) continue;
                if (best < 0 || ring_.compare(buckets_[i].back().m, buckets_[best].back().m) > 0)
                    best = static_cast<int>(i);
            }
            if (best < 0) return false;
            Monomial m = buckets_[best].back().m;
            auto c = k_.zero();
            for (auto& b : buckets_) {
                if (!b.empty() && b.back().m == m) {
                    c = k_.add(c, b.back().c);
                    b.pop_back();
                }
            }
            if (!k_.is_zero(c)) {
                out.m = m;
                out.c = std::move(c);
                return true;
            }
        }
    }

private:
    static std::size_t capacity(std::size_t level) { return std::size_t{8} << (2 * level); }

    std::vector<Term<F>> merge(std::vector<Term<F>>& a, std::vector<Term<F>>& b) {
        std::vector<Term<F>> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            const int c = ring_.compare(a[i].m, b[j].m);
            if (c < 0) {
                out.push_back(std::move(a[i++]));
            } else if (c > 0) {
                out.push_back(std::move(b[j++]));
            } else {
                auto s = k_.add(a[i].c, b[j].c);
                if (!k_.is_zero(s)) out.push_back({a[i].m, std::move(s)});
                ++i;
                ++j;
            }
        }
        for (; i < a.size(); ++i) out.push_back(std::move(a[i]));
        for (; j < b.size(); ++j) out.push_back(std::move(b[j]));
        return out;
    }

    void insert(std::vector<Term<F>> v) {
        std::size_t level = 0;
        while (capacity(level) < v.size()) ++level;
        for (;;) {
            if (buckets_.size() <= level) buckets_.resize(level + 1);
            if (buckets_[level].empty()) {
                buckets_[level] = std::move(v);
                return;
            }
            v = merge(buckets_[level], v);
            buckets_[level].clear();
            if (v.size() <= capacity(level)) {
                buckets_[level] = std::move(v);
                return;
            }
            ++level;
        }
    }

    const Ring<F>& ring_;
    const F& k_;
    std::vector<std::vector<Term<F>>> buckets_;
};

// Monic reducers with their leading monomials kept contiguous for the divisor scan.
template <class F>
class ReducerSet {
public:
    void add(const Polynomial<F>* p) {
        polys_.push_back(p);
        leads_.push_back(p->lm());
    }
    std::size_t size() const { return polys_.size(); }

    // Shortest reducer whose leading monomial divides m, or nullptr.
    const Polynomial<F>* find(const Monomial& m) const {
        const Polynomial<F>* best = nullptr;
        for (std::size_t i = 0; i < leads_.size(); ++i) {
            if (divides(leads_[i], m) && (!best || polys_[i]->size() < best->size())) {
                best = polys_[i];
                if (best->size() <= 2) break;
            }
        }
        return best;
    }

    // Full reduction of the bucket contents; returns the remainder.
    Polynomial<F> reduce(GeoBucket<F>& bucket, const RingPtr<F>& ring) const {
        const F& k = ring->field();
        std::vector<Term<F>> rem;
        Term<F> t;
        while (bucket.pop_lead(t)) {
            if (const Polynomial<F>* g = find(t.m)) {
                bucket.add_scaled(*g, 1, k.neg(t.c), quotient(t.m, g->lm()));
            } else {
                rem.push_back(std::move(t));
            }
        }
        return Polynomial<F>::from_sorted_terms(ring, std::move(rem));
    }

private:
    std::vector<const Polynomial<F>*> polys_;
    std::vector<Monomial> leads_;
};

}  // namespace detail

// Full remainder of p on division by `basis` (any generating set; zero
// elements are ignored). An empty basis returns p.
template <class F>
Polynomial<F> normal_form(const Polynomial<F>& p, const PolyVec<F>& basis) {
    PolyVec<F> monic;
    monic.reserve(basis.size());
    for (const auto& g : basis) {
        require_same_ring(p, g);
        if (!g.is_zero()) monic.push_back(g.monic());
    }
    if (monic.empty() || p.is_zero()) return p;
    detail::ReducerSet<F> set;
    for (const auto& g : monic) set.add(&g);
    detail::GeoBucket<F> bucket(*p.ring());
    bucket.add_polynomial(p);
    return set.reduce(bucket, p.ring());
}

struct GroebnerStats {
    std::size_t pairs_considered = 0;
    std::size_t zero_reductions = 0;
    std::size_t basis_size = 0;
};

namespace detail {

template <class F>
class Buchberger {
public:
    Buchberger(const RingPtr<F>& ring, const GroebnerLimits& limits)
        : ring_(ring), limits_(limits), start_(std::chrono::steady_clock::now()) {}

    PolyVec<F> run(const PolyVec<F>& input, GroebnerStats* stats) {
        PolyVec<F> gens;
        for (const auto& f : input) {
            if (f.ring() != ring_ && !f.ring()->same_as(*ring_)) throw RingMismatch("generators live in different rings");
            if (!f.is_zero()) gens.push_back(f);
        }
        std::sort(gens.begin(), gens.end(),
                  [&](const Polynomial<F>& a, const Polynomial<F>& b) { return ring_->compare(a.lm(), b.lm()) < 0; });
        for (const auto& f : gens) {
            Polynomial<F> h = reduce_full(f);
            if (h.is_zero()) continue;
            if (h.is_constant()) return {Polynomial<F>::one(ring_)};
            insert(h.monic(), static_cast<std::uint32_t>(f.total_degree()));
        }
        while (!pairs_.empty()) {
            check_limits();
            const std::size_t k = select();
            const Pair p = pairs_[k];
            pairs_[k] = pairs_.back();
            pairs_.pop_back();
            ++stats_.pairs_considered;
            Polynomial<F> h = reduce_spoly(p);
            if (h.is_zero()) {
                ++stats_.zero_reductions;
                continue;
            }
            if (h.is_constant()) {
                finish(stats);
                return {Polynomial<F>::one(ring_)};
            }
            insert(h.monic(), std::max<std::uint32_t>(p.sugar, static_cast<std::uint32_t>(h.total_degree())));
        }
        PolyVec<F> result = reduced_basis();
        stats_.basis_size = result.size();
        finish(stats);
        return result;
    }

private:
    struct Pair {
        std::size_t i, j;
        Monomial lcm;
        std::uint32_t sugar;
    };

    void finish(GroebnerStats* stats) const {
        if (stats) *stats = stats_;
    }

    void check_limits() const {
        if (limits_.max_pairs && stats_.pairs_considered >= limits_.max_pairs)
            throw ResourceExhausted("Groebner pair limit of " + std::to_string(limits_.max_pairs) + " reached");
        if (limits_.max_seconds > 0) {
            const double el =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (el > limits_.max_seconds)
                throw ResourceExhausted("Groebner wall-clock limit of " + std::to_string(limits_.max_seconds) +
                                        " s reached");
        }
    }

    // Normal selection: smallest lcm degree, then sugar, then term order.
    std::size_t select() const {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pairs_.size(); ++k) {
            const Pair& a = pairs_[k];
            const Pair& b = pairs_[best];
            if (a.lcm.degree != b.lcm.degree) {
                if (a.lcm.degree < b.lcm.degree) best = k;
                continue;
            }
            if (a.sugar != b.sugar) {
                if (a.sugar < b.sugar) best = k;
                continue;
            }
            if (ring_->compare(a.lcm, b.lcm) < 0) best = k;
        }
        if (limits_.max_degree && pairs_[best].lcm.degree > limits_.max_degree)
            throw ResourceExhausted("Groebner degree limit of " + std::to_string(limits_.max_degree) + " reached");
        return best;
    }

    Polynomial<F> reduce_full(const Polynomial<F>& f) const {
        GeoBucket<F> bucket(*ring_);
        bucket.add_polynomial(f);
        return reducers_.reduce(bucket, ring_);
    }

    Polynomial<F> reduce_spoly(const Pair& p) const {
        const F& k = ring_->field();
        const Polynomial<F>& a = basis_[p.i];
        const Polynomial<F>& b = basis_[p.j];
        GeoBucket<F> bucket(*ring_);
        bucket.add_scaled(a, 1, k.one(), quotient(p.lcm, a.lm()));
        bucket.add_scaled(b, 1, k.neg(k.one()), quotient(p.lcm, b.lm()));
        return reducers_.reduce(bucket, ring_);
    }

    std::uint32_t pair_sugar(std::size_t i, std::size_t j, const Monomial& l) const {
        const std::uint32_t si = sugar_[i] + l.degree - basis_[i].lm().degree;
        const std::uint32_t sj = sugar_[j] + l.degree - basis_[j].lm().degree;
        return std::max(si, sj);
    }

    // Gebauer-Moeller update for a new element.
    void insert(Polynomial<F> h, std::uint32_t sugar) {
        const std::size_t hi = basis_.size();
        basis_.push_back(std::move(h));
        sugar_.push_back(sugar);
        redundant_.push_back(false);
        const Monomial hm = basis_[hi].lm();

        std::vector<Pair> cand;
        for (std::size_t g = 0; g < hi; ++g) {
            if (redundant_[g]) continue;
            Monomial l = lcm(basis_[g].lm(), hm);
            cand.push_back({g, hi, l, pair_sugar(g, hi, l)});
        }
        std::vector<bool> coprimes(cand.size());
        for (std::size_t k = 0; k < cand.size(); ++k) coprimes[k] = coprime(basis_[cand[k].i].lm(), hm);

        // chain criterion among the new pairs
        std::vector<Pair> kept;
        std::vector<bool> kept_coprime;
        for (std::size_t k = 0; k < cand.size(); ++k) {
            bool keep = coprimes[k];
            if (!keep) {
                keep = true;
                for (std::size_t q = k + 1; q < cand.size() && keep; ++q)
                    if (divides(cand[q].lcm, cand[k].lcm)) keep = false;
                for (std::size_t q = 0; q < kept.size() && keep; ++q)
                    if (divides(kept[q].lcm, cand[k].lcm)) keep = false;
            }
            if (keep) {
                kept.push_back(cand[k]);
                kept_coprime.push_back(coprimes[k]);
            }
        }

        // old pairs made superfluous by h
        std::vector<Pair> survivors;
        survivors.reserve(pairs_.size() + kept.size());
        for (const Pair& p : pairs_) {
            if (divides(hm, p.lcm)) {
                const Monomial li = lcm(basis_[p.i].lm(), hm);
                const Monomial lj = lcm(basis_[p.j].lm(), hm);
                if (li != p.lcm && lj != p.lcm) continue;
            }
            survivors.push_back(p);
        }
        // product criterion
        for (std::size_t k = 0; k < kept.size(); ++k)
            if (!kept_coprime[k]) survivors.push_back(kept[k]);
        pairs_ = std::move(survivors);

        for (std::size_t g = 0; g < hi; ++g)
            if (!redundant_[g] && divides(hm, basis_[g].lm())) redundant_[g] = true;

        // reducers point into basis_, which may have reallocated
        rebuild_reducers();
    }

    void rebuild_reducers() {
        reducers_ = ReducerSet<F>();
        for (std::size_t g = 0; g < basis_.size(); ++g)
            if (!redundant_[g]) reducers_.add(&basis_[g]);
    }

    PolyVec<F> reduced_basis() const {
        std::vector<std::size_t> keep;
        for (std::size_t g = 0; g < basis_.size(); ++g)
            if (!redundant_[g]) keep.push_back(g);
        std::vector<const Polynomial<F>*> minimal;
        for (auto g : keep) minimal.push_back(&basis_[g]);
        PolyVec<F> out;
        out.reserve(minimal.size());
        for (std::size_t a = 0; a < minimal.size(); ++a) {
            ReducerSet<F> others;
            for (std::size_t b = 0; b < minimal.size(); ++b)
                if (b != a) others.add(minimal[b]);
            GeoBucket<F> bucket(*ring_);
            bucket.add_scaled(*minimal[a], 1, ring_->field().one(), Monomial{});
            Polynomial<F> tail = others.reduce(bucket, ring_);
            std::vector<Term<F>> terms;
            terms.reserve(tail.size() + 1);
            terms.push_back(minimal[a]->terms().front());
            for (const auto& t : tail.terms()) terms.push_back(t);
            out.push_back(Polynomial<F>::from_sorted_terms(ring_, std::move(terms)));
        }
        std::sort(out.begin(), out.end(),
                  [&](const Polynomial<F>& a, const Polynomial<F>& b) { return ring_->compare(a.lm(), b.lm()) < 0; });
        return out;
    }

    RingPtr<F> ring_;
    GroebnerLimits limits_;
    std::chrono::steady_clock::time_point start_;
    PolyVec<F> basis_;
    std::vector<std::uint32_t> sugar_;
    std::vector<bool> redundant_;
    std::vector<Pair> pairs_;
    ReducerSet<F> reducers_;
    GroebnerStats stats_;
};

}  // namespace detail

// Reduced Groebner basis, sorted by ascending leading monomial. The zero ideal
// gives an empty basis and the unit ideal gives {1}.
template <class F>
PolyVec<F> buchberger(const RingPtr<F>& ring, const PolyVec<F>& gens, const GroebnerLimits& limits,
                      GroebnerStats* stats = nullptr) {
    detail::Buchberger<F> engine(ring, limits);
    return engine.run(gens, stats);
}

template <class F>
PolyVec<F> buchberger(const RingPtr<F>& ring, const PolyVec<F>& gens) {
    return buchberger(ring, gens, current_limits());
}

template <class F>
bool is_unit_basis(const PolyVec<F>& gb) {
    return gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero();
}

}  // namespace reltan
