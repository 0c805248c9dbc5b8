#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "reltan/groebner.hpp"
#include "reltan/hilbert.hpp"
#include "reltan/parse.hpp"

namespace reltan {

// Generators together with a lazily computed, write-once reduced Groebner basis
// in the ring's own order. Copies share the cache.
template <class F>
class Ideal {
public:
    Ideal() = default;
    Ideal(RingPtr<F> ring, PolyVec<F> gens) : ring_(std::move(ring)), cache_(std::make_shared<Cache>()) {
        for (auto& g : gens) {
            if (g.ring() != ring_ && !g.ring()->same_as(*ring_)) throw RingMismatch("generator outside the ideal's ring");
            if (!g.is_zero()) gens_.push_back(std::move(g));
        }
    }

    // For results that are already a reduced Groebner basis in this ring.
    static Ideal from_groebner(RingPtr<F> ring, PolyVec<F> gb) {
        Ideal I(ring, gb);
        std::call_once(I.cache_->once, [&] { I.cache_->gb = std::move(gb); });
        return I;
    }

    static Ideal unit(const RingPtr<F>& ring) { return from_groebner(ring, {Polynomial<F>::one(ring)}); }
    static Ideal zero(const RingPtr<F>& ring) { return from_groebner(ring, {}); }

    static Ideal parse(const RingPtr<F>& ring, const std::vector<std::string>& gens) {
        PolyVec<F> g;
        for (const auto& s : gens) g.push_back(parse_polynomial(s, ring));
        return Ideal(ring, std::move(g));
    }

    const RingPtr<F>& ring() const { return ring_; }
    const PolyVec<F>& generators() const { return gens_; }

    // Returned by value so that iterating over the basis of a temporary is safe.
    PolyVec<F> groebner() const { return basis(); }

    Polynomial<F> reduce(const Polynomial<F>& f) const { return normal_form(f, basis()); }
    bool contains(const Polynomial<F>& f) const { return reduce(f).is_zero(); }
    bool contains(const Ideal& J) const {
        for (const auto& g : J.generators())
            if (!contains(g)) return false;
        return true;
    }
    bool is_unit() const { return is_unit_basis(basis()); }
    bool is_zero_ideal() const { return gens_.empty(); }
    bool is_homogeneous() const {
        for (const auto& g : gens_)
            if (!g.is_homogeneous()) return false;
        return true;
    }

    std::vector<Monomial> leading_monomials() const {
        std::vector<Monomial> out;
        for (const auto& g : basis()) out.push_back(g.lm());
        return out;
    }

private:
    const PolyVec<F>& basis() const {
        std::call_once(cache_->once, [&] { cache_->gb = buchberger(ring_, gens_); });
        return cache_->gb;
    }

    struct Cache {
        std::once_flag once;
        PolyVec<F> gb;
    };

    RingPtr<F> ring_;
    PolyVec<F> gens_;
    std::shared_ptr<Cache> cache_;
};

// Ideal equality through reduced bases (same ring).
template <class F>
bool same_ideal(const Ideal<F>& a, const Ideal<F>& b) {
    return a.contains(b) && b.contains(a);
}

template <class F>
Ideal<F> ideal_sum(const Ideal<F>& a, const Ideal<F>& b) {
    PolyVec<F> g = a.generators();
    for (const auto& p : b.generators()) g.push_back(p);
    return Ideal<F>(a.ring(), std::move(g));
}

template <class F>
Ideal<F> ideal_with(const Ideal<F>& a, const PolyVec<F>& extra) {
    PolyVec<F> g = a.generators();
    for (const auto& p : extra) g.push_back(p);
    return Ideal<F>(a.ring(), std::move(g));
}

template <class F>
PolyVec<F> reorder_all(const PolyVec<F>& v, const RingPtr<F>& target) {
    PolyVec<F> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(reorder(p, target));
    return out;
}

// Name not used by the ring, built from `stem`.
template <class F>
std::string fresh_name(const Ring<F>& ring, const std::string& stem) {
    std::string n = stem;
    for (int k = 1; ring.index_of(n); ++k) n = stem + std::to_string(k);
    return n;
}

namespace detail {

// Ring with one new variable placed first, ordered so that it is eliminated.
template <class F>
RingPtr<F> prepend_variable(const RingPtr<F>& ring, const std::string& stem, bool eliminate) {
    std::vector<std::string> names{fresh_name(*ring, stem)};
    for (const auto& n : ring->names()) names.push_back(n);
    return make_ring<F>(names, ring->field(), eliminate ? MonomialOrder::block(1) : MonomialOrder::grevlex());
}

template <class F>
Polynomial<F> shift_into(const Polynomial<F>& p, const RingPtr<F>& target, std::size_t offset) {
    std::vector<std::size_t> map(p.ring()->nvars());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = i + offset;
    return remap(p, target, map);
}

// Elements of a block-order basis free of the first `k` variables, moved down.
template <class F>
PolyVec<F> drop_leading_block(const PolyVec<F>& gb, std::size_t k, const RingPtr<F>& target) {
    PolyVec<F> out;
    for (const auto& g : gb) {
        bool free = true;
        for (std::size_t v = 0; v < k && free; ++v)
            if (g.uses_variable(v)) free = false;
        if (!free) continue;
        std::vector<Term<F>> terms;
        for (const auto& t : g.terms()) {
            Monomial m;
            for (std::size_t v = k; v < kMaxVars; ++v) m.exp[v - k] = t.m.exp[v];
            m.refresh();
            terms.push_back({m, t.c});
        }
        out.push_back(Polynomial<F>::from_terms(target, std::move(terms)));
    }
    return out;
}

}  // namespace detail

// I intersected with k[remaining variables], computed with a block elimination
// order. The result lives in `target`, which must contain every surviving
// variable name.
template <class F>
Ideal<F> eliminate(const Ideal<F>& I, const std::vector<std::size_t>& drop, const RingPtr<F>& target) {
    const auto& ring = *I.ring();
    std::vector<bool> dropped(ring.nvars(), false);
    for (auto v : drop) {
        if (v >= ring.nvars()) throw InputError("elimination variable out of range");
        dropped[v] = true;
    }
    std::vector<std::string> names;
    std::vector<std::size_t> map(ring.nvars());
    for (std::size_t v = 0; v < ring.nvars(); ++v)
        if (dropped[v]) {
            map[v] = names.size();
            names.push_back(ring.name(v));
        }
    const std::size_t k = names.size();
    for (std::size_t v = 0; v < ring.nvars(); ++v)
        if (!dropped[v]) {
            map[v] = names.size();
            names.push_back(ring.name(v));
        }
    auto block_ring = make_ring<F>(names, ring.field(), MonomialOrder::block(k));
    PolyVec<F> gens;
    for (const auto& g : I.generators()) gens.push_back(remap(g, block_ring, map));
    const PolyVec<F> gb = buchberger(block_ring, gens);
    std::vector<std::string> kept(names.begin() + static_cast<std::ptrdiff_t>(k), names.end());
    if (target->names() == kept && target->order() == MonomialOrder::grevlex())
        return Ideal<F>::from_groebner(target, detail::drop_leading_block(gb, k, target));
    auto kept_ring = make_ring<F>(kept, ring.field(), MonomialOrder::grevlex());
    PolyVec<F> low = detail::drop_leading_block(gb, k, kept_ring);
    PolyVec<F> moved;
    for (const auto& g : low) moved.push_back(move_by_name(g, target));
    return Ideal<F>(target, std::move(moved));
}

template <class F>
Ideal<F> eliminate(const Ideal<F>& I, const std::vector<std::size_t>& drop) {
    const auto& ring = *I.ring();
    std::vector<std::string> kept;
    for (std::size_t v = 0; v < ring.nvars(); ++v)
        if (std::find(drop.begin(), drop.end(), v) == drop.end()) kept.push_back(ring.name(v));
    return eliminate(I, drop, make_ring<F>(kept, ring.field()));
}

// I intersect J via the t*I + (1-t)*J elimination.
template <class F>
Ideal<F> intersect(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(Polynomial<F>(I.ring()), Polynomial<F>(J.ring()));
    if (I.is_zero_ideal() || J.is_zero_ideal()) return Ideal<F>::zero(I.ring());
    if (I.is_unit()) return J;
    if (J.is_unit()) return I;
    auto T = detail::prepend_variable(I.ring(), "t_", true);
    const auto t = Polynomial<F>::variable(T, 0);
    const auto one_minus_t = Polynomial<F>::one(T) - t;
    PolyVec<F> gens;
    for (const auto& g : I.generators()) gens.push_back(t * detail::shift_into(g, T, 1));
    for (const auto& g : J.generators()) gens.push_back(one_minus_t * detail::shift_into(g, T, 1));
    const PolyVec<F> gb = buchberger(T, gens);
    auto base = make_ring<F>(I.ring()->names(), I.ring()->field(), MonomialOrder::grevlex());
    PolyVec<F> low = detail::drop_leading_block(gb, 1, base);
    if (I.ring()->order() == MonomialOrder::grevlex()) return Ideal<F>::from_groebner(I.ring(), reorder_all(low, I.ring()));
    return Ideal<F>(I.ring(), reorder_all(low, I.ring()));
}

// Exact quotient q = a / b, or nullopt when b does not divide a.
template <class F>
std::optional<Polynomial<F>> divide_exact(const Polynomial<F>& a, const Polynomial<F>& b) {
    require_same_ring(a, b);
    if (b.is_zero()) throw InputError("division by the zero polynomial");
    const auto& ring = a.ring();
    const F& k = ring->field();
    Polynomial<F> rem = a;
    std::vector<Term<F>> q;
    const auto inv = k.inv(b.lc());
    while (!rem.is_zero()) {
        if (!divides(b.lm(), rem.lm())) return std::nullopt;
        const Monomial m = quotient(rem.lm(), b.lm());
        const auto c = k.mul(rem.lc(), inv);
        q.push_back({m, c});
        rem = rem - b.mul_term(c, m);
    }
    return Polynomial<F>::from_terms(ring, std::move(q));
}

// I : <g> = (I intersect <g>) / g.
template <class F>
Ideal<F> quotient_element(const Ideal<F>& I, const Polynomial<F>& g) {
    if (g.is_zero()) return Ideal<F>::unit(I.ring());
    if (I.contains(g)) return Ideal<F>::unit(I.ring());
    Ideal<F> inter = intersect(I, Ideal<F>(I.ring(), {g}));
    PolyVec<F> out;
    for (const auto& h : inter.generators()) {
        auto q = divide_exact(h, g);
        if (!q) throw Error("internal: intersection element not divisible by the divisor");
        out.push_back(*q);
    }
    return Ideal<F>(I.ring(), std::move(out));
}

// I : J as the intersection of I : g over generators g of J.
template <class F>
Ideal<F> ideal_quotient(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(Polynomial<F>(I.ring()), Polynomial<F>(J.ring()));
    std::optional<Ideal<F>> acc;
    for (const auto& g : J.generators()) {
        Ideal<F> q = quotient_element(I, g);
        if (q.is_unit()) continue;
        acc = acc ? intersect(*acc, q) : q;
    }
    return acc ? *acc : Ideal<F>::unit(I.ring());
}

namespace detail {

template <class F>
std::optional<std::size_t> as_single_variable(const Polynomial<F>& f) {
    if (f.size() != 1 || f.lm().degree != 1) return std::nullopt;
    for (std::size_t v = 0; v < f.ring()->nvars(); ++v)
        if (f.lm().exp[v]) return v;
    return std::nullopt;
}

// Homogeneous I : x_v^inf with x_v moved to the end of a grevlex order: every
// basis element is divided by its largest power of x_v.
template <class F>
Ideal<F> saturate_by_variable_homogeneous(const Ideal<F>& I, std::size_t v) {
    const auto& ring = *I.ring();
    std::vector<std::string> names;
    std::vector<std::size_t> map(ring.nvars());
    for (std::size_t i = 0; i < ring.nvars(); ++i)
        if (i != v) {
            map[i] = names.size();
            names.push_back(ring.name(i));
        }
    map[v] = names.size();
    names.push_back(ring.name(v));
    auto R = make_ring<F>(names, ring.field(), MonomialOrder::grevlex());
    PolyVec<F> gens;
    for (const auto& g : I.generators()) gens.push_back(remap(g, R, map));
    const PolyVec<F> gb = buchberger(R, gens);
    const std::size_t last = ring.nvars() - 1;
    std::vector<std::size_t> back(ring.nvars());
    for (std::size_t i = 0; i < ring.nvars(); ++i) back[map[i]] = i;
    PolyVec<F> out;
    for (const auto& g : gb) {
        std::uint16_t e = kMaxExponent;
        for (const auto& t : g.terms()) e = std::min(e, t.m.exp[last]);
        std::vector<Term<F>> terms;
        for (const auto& t : g.terms()) {
            Monomial m;
            for (std::size_t i = 0; i < ring.nvars(); ++i) m.exp[back[i]] = t.m.exp[i];
            m.exp[v] = static_cast<std::uint16_t>(m.exp[v] - e);
            m.refresh();
            terms.push_back({m, t.c});
        }
        out.push_back(Polynomial<F>::from_terms(I.ring(), std::move(terms)));
    }
    return Ideal<F>(I.ring(), std::move(out));
}

}  // namespace detail

// I : f^inf by adjoining t and eliminating it from I + <t f - 1>. Homogeneous
// ideals saturated by a variable take the cheaper reverse-lex route.
template <class F>
Ideal<F> saturate_element(const Ideal<F>& I, const Polynomial<F>& f) {
    if (f.is_zero()) return Ideal<F>::unit(I.ring());
    if (f.is_constant()) return I;
    if (I.is_zero_ideal()) return I;
    if (I.contains(f)) return Ideal<F>::unit(I.ring());
    if (auto v = detail::as_single_variable(f); v && I.is_homogeneous())
        return detail::saturate_by_variable_homogeneous(I, *v);
    auto T = detail::prepend_variable(I.ring(), "t_", true);
    PolyVec<F> gens;
    for (const auto& g : I.generators()) gens.push_back(detail::shift_into(g, T, 1));
    gens.push_back(Polynomial<F>::variable(T, 0) * detail::shift_into(f, T, 1) - Polynomial<F>::one(T));
    const PolyVec<F> gb = buchberger(T, gens);
    auto base = make_ring<F>(I.ring()->names(), I.ring()->field(), MonomialOrder::grevlex());
    PolyVec<F> low = detail::drop_leading_block(gb, 1, base);
    if (I.ring()->order() == MonomialOrder::grevlex()) return Ideal<F>::from_groebner(I.ring(), reorder_all(low, I.ring()));
    return Ideal<F>(I.ring(), reorder_all(low, I.ring()));
}

// I : J^inf = intersection of I : g^inf over generators g of J. When one of the
// pieces is contained in all others the intersection is that piece.
template <class F>
Ideal<F> saturate_ideal(const Ideal<F>& I, const Ideal<F>& J) {
    require_same_ring(Polynomial<F>(I.ring()), Polynomial<F>(J.ring()));
    if (J.is_zero_ideal()) return Ideal<F>::unit(I.ring());
    if (ideal_sum(I, J).is_unit()) return I;
    std::vector<Ideal<F>> pieces;
    for (const auto& g : J.generators()) {
        if (I.contains(g)) continue;
        Ideal<F> s = saturate_element(I, g);
        if (!s.is_unit()) pieces.push_back(s);
    }
    if (pieces.empty()) return Ideal<F>::unit(I.ring());
    for (std::size_t a = 0; a < pieces.size(); ++a) {
        bool smallest = true;
        for (std::size_t b = 0; b < pieces.size() && smallest; ++b)
            if (a != b && !pieces[b].contains(pieces[a])) smallest = false;
        if (smallest) return pieces[a];
    }
    Ideal<F> acc = pieces.front();
    for (std::size_t a = 1; a < pieces.size(); ++a)
        if (!acc.contains(pieces[a])) acc = intersect(acc, pieces[a]);
    return acc;
}

// J contained in the radical of I: 1 in I + <t g - 1> for each generator g of J.
template <class F>
bool radical_contains(const Ideal<F>& I, const Ideal<F>& J) {
    auto T = detail::prepend_variable(I.ring(), "t_", false);
    PolyVec<F> base;
    for (const auto& g : I.generators()) base.push_back(detail::shift_into(g, T, 1));
    for (const auto& g : J.generators()) {
        if (I.contains(g)) continue;
        PolyVec<F> gens = base;
        gens.push_back(Polynomial<F>::variable(T, 0) * detail::shift_into(g, T, 1) - Polynomial<F>::one(T));
        if (!is_unit_basis(buchberger(T, gens))) return false;
    }
    return true;
}

template <class F>
bool radical_contains(const Ideal<F>& I, const Polynomial<F>& g) {
    return radical_contains(I, Ideal<F>(I.ring(), {g}));
}

template <class F>
bool radical_equal(const Ideal<F>& I, const Ideal<F>& J) {
    return radical_contains(I, J) && radical_contains(J, I);
}

// Dimension and degree from the leading-term ideal of a degree-compatible basis.
// For homogeneous input `dim` is projective; otherwise it is the affine dimension
// and the degree is that of the projective closure.
struct DimDegree {
    int dim = -1;
    mpz_class degree = 0;
    bool homogeneous = true;
    int krull_dim = -1;
    // Homogeneous ideals are read in P^{n-1} by hilbert_dim_degree; the
    // affine reading counts V(I) in k^n.
    bool projective = true;
    bool empty() const { return krull_dim < 0 || (projective && krull_dim == 0); }
};

namespace detail {

template <class F>
HilbertData grevlex_hilbert(const Ideal<F>& I) {
    std::vector<Monomial> lts;
    if (I.ring()->order() == MonomialOrder::grevlex()) {
        lts = I.leading_monomials();
    } else {
        auto R = with_order(I.ring(), MonomialOrder::grevlex());
        for (const auto& g : buchberger(R, reorder_all(I.generators(), R))) lts.push_back(g.lm());
    }
    return hilbert_data(lts, I.ring()->nvars());
}

}  // namespace detail

template <class F>
DimDegree hilbert_dim_degree(const Ideal<F>& I) {
    const HilbertData h = detail::grevlex_hilbert(I);
    DimDegree d;
    d.homogeneous = I.is_homogeneous();
    d.projective = d.homogeneous;
    d.krull_dim = h.krull_dim;
    d.degree = h.degree;
    d.dim = d.homogeneous ? h.krull_dim - 1 : h.krull_dim;
    if (d.homogeneous && h.krull_dim == 0) d.degree = 0;
    return d;
}

// Dimension and degree of V(I) in affine space, homogeneous or not.
template <class F>
DimDegree affine_dim_degree(const Ideal<F>& I) {
    const HilbertData h = detail::grevlex_hilbert(I);
    DimDegree d;
    d.homogeneous = I.is_homogeneous();
    d.projective = false;
    d.krull_dim = h.krull_dim;
    d.degree = h.krull_dim < 0 ? mpz_class(0) : h.degree;
    d.dim = h.krull_dim;
    return d;
}

}  // namespace reltan
