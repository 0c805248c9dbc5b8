#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "reltan/ring.hpp"

namespace reltan {

template <class F>
struct Term {
    Monomial m;
    typename F::Element c;
};

// Sparse polynomial: terms strictly descending in the ring's order, no zero
// coefficients. The zero polynomial has no terms.
template <class F>
class Polynomial {
public:
    using Element = typename F::Element;
    using TermT = Term<F>;

    Polynomial() = default;
    explicit Polynomial(RingPtr<F> ring) : ring_(std::move(ring)) {}

    static Polynomial constant(const RingPtr<F>& ring, const Element& c) {
        Polynomial p(ring);
        if (!ring->field().is_zero(c)) p.terms_.push_back({Monomial{}, c});
        return p;
    }
    static Polynomial one(const RingPtr<F>& ring) { return constant(ring, ring->field().one()); }
    static Polynomial variable(const RingPtr<F>& ring, std::size_t i) {
        Polynomial p(ring);
        p.terms_.push_back({Monomial::variable(i), ring->field().one()});
        return p;
    }
    static Polynomial monomial(const RingPtr<F>& ring, const Monomial& m, const Element& c) {
        Polynomial p(ring);
        if (!ring->field().is_zero(c)) p.terms_.push_back({m, c});
        return p;
    }

    // Builds from arbitrary terms: sorts, merges equal monomials, drops zeros.
    static Polynomial from_terms(const RingPtr<F>& ring, std::vector<TermT> terms) {
        Polynomial p(ring);
        const auto& r = *ring;
        std::sort(terms.begin(), terms.end(),
                  [&](const TermT& a, const TermT& b) { return r.compare(a.m, b.m) > 0; });
        const F& k = r.field();
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().m == t.m) {
                p.terms_.back().c = k.add(p.terms_.back().c, t.c);
                if (k.is_zero(p.terms_.back().c)) p.terms_.pop_back();
            } else if (!k.is_zero(t.c)) {
                p.terms_.push_back(std::move(t));
            }
        }
        return p;
    }

    // Trusts the caller that terms are already sorted and nonzero.
    static Polynomial from_sorted_terms(const RingPtr<F>& ring, std::vector<TermT> terms) {
        Polynomial p(ring);
        p.terms_ = std::move(terms);
        return p;
    }

    const RingPtr<F>& ring() const { return ring_; }
    const F& field() const { return ring_->field(); }
    const std::vector<TermT>& terms() const { return terms_; }
    std::vector<TermT>& mutable_terms() { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
    bool is_one() const { return is_constant() && !is_zero() && field().is_one(terms_[0].c); }

    const Monomial& lm() const { return terms_.front().m; }
    const Element& lc() const { return terms_.front().c; }

    int total_degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max<int>(d, static_cast<int>(t.m.degree));
        return d;
    }
    bool is_homogeneous() const {
        for (const auto& t : terms_)
            if (t.m.degree != terms_.front().m.degree) return false;
        return true;
    }
    // Degree in the variables listed in `vars` (all terms), -1 for zero.
    int degree_in(const std::vector<std::size_t>& vars) const {
        int d = -1;
        for (const auto& t : terms_) {
            int s = 0;
            for (auto v : vars) s += t.m.exp[v];
            d = std::max(d, s);
        }
        return d;
    }
    bool is_homogeneous_in(const std::vector<std::size_t>& vars) const {
        int d = -2;
        for (const auto& t : terms_) {
            int s = 0;
            for (auto v : vars) s += t.m.exp[v];
            if (d == -2) d = s;
            else if (d != s) return false;
        }
        return true;
    }
    bool uses_variable(std::size_t i) const {
        for (const auto& t : terms_)
            if (t.m.exp[i] != 0) return true;
        return false;
    }

    Polynomial monic() const {
        if (is_zero() || field().is_one(lc())) return *this;
        Polynomial p = *this;
        const Element inv = field().inv(lc());
        for (auto& t : p.terms_) t.c = field().mul(t.c, inv);
        return p;
    }

    Polynomial scaled(const Element& c) const {
        if (field().is_zero(c)) return Polynomial(ring_);
        Polynomial p = *this;
        for (auto& t : p.terms_) t.c = field().mul(t.c, c);
        return p;
    }

    // c * m * this; term order is preserved by multiplication with a monomial.
    Polynomial mul_term(const Element& c, const Monomial& m) const {
        Polynomial p(ring_);
        if (field().is_zero(c)) return p;
        p.terms_.reserve(terms_.size());
        for (const auto& t : terms_) p.terms_.push_back({t.m * m, field().mul(t.c, c)});
        return p;
    }

    bool operator==(const Polynomial& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].m != o.terms_[i].m || !field().equal(terms_[i].c, o.terms_[i].c)) return false;
        return true;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

private:
    RingPtr<F> ring_;
    std::vector<TermT> terms_;
};

template <class F>
void require_same_ring(const Polynomial<F>& a, const Polynomial<F>& b) {
    if (a.ring() != b.ring() && !a.ring()->same_as(*b.ring()))
        throw RingMismatch("operands live in different rings");
}

namespace detail {

// a + s * b, merged in order. s is +1 or -1 encoded by `negate`.
template <class F>
Polynomial<F> merge_add(const Polynomial<F>& a, const Polynomial<F>& b, bool negate) {
    const auto& ring = *a.ring();
    const F& k = ring.field();
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::vector<Term<F>> out;
    out.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    while (i < ta.size() && j < tb.size()) {
        const int c = ring.compare(ta[i].m, tb[j].m);
        if (c > 0) {
            out.push_back(ta[i++]);
        } else if (c < 0) {
            out.push_back({tb[j].m, negate ? k.neg(tb[j].c) : tb[j].c});
            ++j;
        } else {
            auto s = negate ? k.sub(ta[i].c, tb[j].c) : k.add(ta[i].c, tb[j].c);
            if (!k.is_zero(s)) out.push_back({ta[i].m, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < ta.size(); ++i) out.push_back(ta[i]);
    for (; j < tb.size(); ++j) out.push_back({tb[j].m, negate ? k.neg(tb[j].c) : tb[j].c});
    return Polynomial<F>::from_sorted_terms(a.ring(), std::move(out));
}

}  // namespace detail

template <class F>
Polynomial<F> operator+(const Polynomial<F>& a, const Polynomial<F>& b) {
    require_same_ring(a, b);
    return detail::merge_add(a, b, false);
}

template <class F>
Polynomial<F> operator-(const Polynomial<F>& a, const Polynomial<F>& b) {
    require_same_ring(a, b);
    return detail::merge_add(a, b, true);
}

template <class F>
Polynomial<F> operator-(const Polynomial<F>& a) {
    return a.scaled(a.field().neg(a.field().one()));
}

template <class F>
Polynomial<F> operator*(const Polynomial<F>& a, const Polynomial<F>& b) {
    require_same_ring(a, b);
    if (a.is_zero() || b.is_zero()) return Polynomial<F>(a.ring());
    const Polynomial<F>& small = a.size() <= b.size() ? a : b;
    const Polynomial<F>& large = a.size() <= b.size() ? b : a;
    if (small.size() == 1) return large.mul_term(small.lc(), small.lm());
    // each row is already sorted
    std::vector<Polynomial<F>> rows;
    rows.reserve(small.size());
    for (const auto& t : small.terms()) rows.push_back(large.mul_term(t.c, t.m));
    // pairwise tree merge keeps the total cost near n log n
    while (rows.size() > 1) {
        std::vector<Polynomial<F>> next;
        next.reserve((rows.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < rows.size(); i += 2) next.push_back(detail::merge_add(rows[i], rows[i + 1], false));
        if (rows.size() % 2) next.push_back(std::move(rows.back()));
        rows = std::move(next);
    }
    return std::move(rows.front());
}

template <class F>
Polynomial<F> pow(const Polynomial<F>& p, unsigned e) {
    Polynomial<F> result = Polynomial<F>::one(p.ring());
    Polynomial<F> base = p;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

template <class F>
Polynomial<F> derivative(const Polynomial<F>& p, std::size_t var) {
    const F& k = p.field();
    std::vector<Term<F>> out;
    for (const auto& t : p.terms()) {
        const std::uint32_t e = t.m.exp[var];
        if (e == 0) continue;
        auto c = k.mul(t.c, k.from_int(static_cast<long>(e)));
        if (k.is_zero(c)) continue;  // characteristic divides e
        Monomial m = t.m;
        m.exp[var] = static_cast<std::uint16_t>(e - 1);
        m.refresh();
        out.push_back({m, std::move(c)});
    }
    // d/dx_i preserves order among surviving terms only for some orders; re-sort
    return Polynomial<F>::from_terms(p.ring(), std::move(out));
}

// Replaces variable i with images[i] (all in one target ring).
template <class F>
Polynomial<F> substitute(const Polynomial<F>& p, const std::vector<Polynomial<F>>& images,
                         const RingPtr<F>& target) {
    if (images.size() != p.ring()->nvars())
        throw InputError("substitution needs one image per variable");
    for (const auto& im : images)
        if (im.ring() != target && !im.ring()->same_as(*target))
            throw RingMismatch("substitution images must live in the target ring");
    const std::size_t n = images.size();
    // power cache per variable
    std::vector<std::vector<Polynomial<F>>> powers(n);
    auto power = [&](std::size_t v, std::uint32_t e) -> const Polynomial<F>& {
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(Polynomial<F>::one(target));
        while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
        return cache[e];
    };
    std::vector<Polynomial<F>> pieces;
    pieces.reserve(p.size());
    for (const auto& t : p.terms()) {
        Polynomial<F> term = Polynomial<F>::constant(target, t.c);
        for (std::size_t v = 0; v < n && !term.is_zero(); ++v)
            if (t.m.exp[v]) term = term * power(v, t.m.exp[v]);
        if (!term.is_zero()) pieces.push_back(std::move(term));
    }
    if (pieces.empty()) return Polynomial<F>(target);
    while (pieces.size() > 1) {
        std::vector<Polynomial<F>> next;
        for (std::size_t i = 0; i + 1 < pieces.size(); i += 2) next.push_back(pieces[i] + pieces[i + 1]);
        if (pieces.size() % 2) next.push_back(std::move(pieces.back()));
        pieces = std::move(next);
    }
    return std::move(pieces.front());
}

// Moves a polynomial into a ring with the same field where variable i of the
// source becomes variable index_map[i] of the target.
template <class F>
Polynomial<F> remap(const Polynomial<F>& p, const RingPtr<F>& target, const std::vector<std::size_t>& index_map) {
    std::vector<Term<F>> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
        Monomial m;
        for (std::size_t i = 0; i < index_map.size(); ++i)
            if (t.m.exp[i]) m.exp[index_map[i]] = t.m.exp[i];
        m.refresh();
        out.push_back({m, t.c});
    }
    for (std::size_t i = index_map.size(); i < p.ring()->nvars(); ++i)
        if (p.uses_variable(i)) throw InputError("remap drops a variable that occurs");
    return Polynomial<F>::from_terms(target, std::move(out));
}

// Same variables, possibly different order: re-sort only.
template <class F>
Polynomial<F> reorder(const Polynomial<F>& p, const RingPtr<F>& target) {
    if (target->nvars() != p.ring()->nvars() || target->names() != p.ring()->names())
        throw RingMismatch("reorder requires identical variables");
    return Polynomial<F>::from_terms(target, p.terms());
}

// Moves p into `target` by matching variable names.
template <class F>
Polynomial<F> move_by_name(const Polynomial<F>& p, const RingPtr<F>& target) {
    const auto& src = *p.ring();
    std::vector<std::size_t> map(src.nvars(), kMaxVars);
    std::vector<Term<F>> out;
    for (std::size_t i = 0; i < src.nvars(); ++i) {
        auto j = target->index_of(src.name(i));
        if (j) map[i] = *j;
        else if (p.uses_variable(i))
            throw RingMismatch("variable '" + src.name(i) + "' is missing from the target ring");
    }
    for (const auto& t : p.terms()) {
        Monomial m;
        for (std::size_t i = 0; i < src.nvars(); ++i)
            if (t.m.exp[i]) m.exp[map[i]] = t.m.exp[i];
        m.refresh();
        out.push_back({m, t.c});
    }
    return Polynomial<F>::from_terms(target, std::move(out));
}

template <class F>
typename F::Element evaluate(const Polynomial<F>& p, const std::vector<typename F::Element>& point) {
    const auto& ring = *p.ring();
    if (point.size() != ring.nvars())
        throw InputError("evaluation point has " + std::to_string(point.size()) + " coordinates, ring has " +
                         std::to_string(ring.nvars()) + " variables");
    const F& k = ring.field();
    auto acc = k.zero();
    for (const auto& t : p.terms()) {
        auto v = t.c;
        for (std::size_t i = 0; i < ring.nvars(); ++i)
            for (std::uint32_t e = 0; e < t.m.exp[i]; ++e) v = k.mul(v, point[i]);
        acc = k.add(acc, v);
    }
    return acc;
}

// The only field map needed: rationals reduced modulo a prime.
inline Polynomial<PrimeField> reduce_mod(const Polynomial<RationalField>& p, const RingPtr<PrimeField>& target) {
    std::vector<Term<PrimeField>> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) out.push_back({t.m, target->field().from_rational(t.c)});
    return Polynomial<PrimeField>::from_terms(target, std::move(out));
}

template <class F>
using PolyVec = std::vector<Polynomial<F>>;

}  // namespace reltan
