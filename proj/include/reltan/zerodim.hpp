#pragma once

#include <random>
#include <unordered_map>
#include <vector>

#include "reltan/ideal.hpp"

namespace reltan {

// Dense univariate polynomials over a field, index = exponent.
template <class F>
using Univariate = std::vector<typename F::Element>;

namespace detail {

template <class F>
void utrim(const F& k, Univariate<F>& p) {
    while (!p.empty() && k.is_zero(p.back())) p.pop_back();
}

template <class F>
Univariate<F> umod(const F& k, Univariate<F> a, const Univariate<F>& b) {
    utrim(k, a);
    const auto inv = k.inv(b.back());
    while (a.size() >= b.size()) {
        const auto c = k.mul(a.back(), inv);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = k.sub(a[i + shift], k.mul(c, b[i]));
        utrim(k, a);
    }
    return a;
}

template <class F>
Univariate<F> ugcd(const F& k, Univariate<F> a, Univariate<F> b) {
    utrim(k, a);
    utrim(k, b);
    while (!b.empty()) {
        Univariate<F> r = umod(k, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

template <class F>
Univariate<F> uderivative(const F& k, const Univariate<F>& a) {
    Univariate<F> d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(k.mul(a[i], k.from_int(static_cast<long>(i))));
    utrim(k, d);
    return d;
}

}  // namespace detail

// Degree of the squarefree part.
template <class F>
std::size_t squarefree_degree(const F& k, const Univariate<F>& p) {
    Univariate<F> a = p;
    detail::utrim(k, a);
    if (a.size() <= 1) return 0;
    Univariate<F> g = detail::ugcd(k, a, detail::uderivative(k, a));
    return (a.size() - 1) - (g.size() - 1);
}

template <class F>
typename F::Element ueval(const F& k, const Univariate<F>& p, const typename F::Element& x) {
    auto acc = k.zero();
    for (std::size_t i = p.size(); i-- > 0;) acc = k.add(k.mul(acc, x), p[i]);
    return acc;
}

// Enumerates the standard monomials of a zero-dimensional basis.
template <class F>
std::vector<Monomial> standard_monomials(const PolyVec<F>& gb, std::size_t nvars) {
    std::vector<Monomial> leads;
    for (const auto& g : gb) leads.push_back(g.lm());
    auto reducible = [&](const Monomial& m) {
        for (const auto& l : leads)
            if (divides(l, m)) return true;
        return false;
    };
    std::vector<Monomial> out;
    if (reducible(Monomial{})) return out;
    // breadth-first over divisibility: every divisor of a standard monomial is standard
    std::vector<Monomial> frontier{Monomial{}};
    std::unordered_map<Monomial, bool, MonomialHash> seen;
    seen[Monomial{}] = true;
    while (!frontier.empty()) {
        std::vector<Monomial> next;
        for (const auto& m : frontier) {
            out.push_back(m);
            for (std::size_t v = 0; v < nvars; ++v) {
                Monomial n = m * Monomial::variable(v);
                if (seen.count(n) || reducible(n)) continue;
                seen[n] = true;
                next.push_back(n);
            }
        }
        frontier = std::move(next);
        if (out.size() > 2000000) throw ResourceExhausted("quotient basis too large");
    }
    return out;
}

// Linear algebra in k[x]/I for a zero-dimensional reduced basis.
template <class F>
class ZeroDimQuotient {
public:
    using Element = typename F::Element;

    ZeroDimQuotient(const Ideal<F>& I) : ring_(I.ring()), gb_(I.groebner()) {
        const HilbertData h = hilbert_data(I.leading_monomials(), ring_->nvars());
        if (h.krull_dim > 0) throw NotZeroDimensional("ideal is not zero-dimensional");
        basis_ = standard_monomials(gb_, ring_->nvars());
        for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
    }

    std::size_t dimension() const { return basis_.size(); }
    const std::vector<Monomial>& basis() const { return basis_; }

    std::vector<Element> coordinates(const Polynomial<F>& p) const {
        const F& k = ring_->field();
        std::vector<Element> v(basis_.size(), k.zero());
        const Polynomial<F> r = normal_form(p, gb_);
        for (const auto& t : r.terms()) v[index_.at(t.m)] = t.c;
        return v;
    }

    // Minimal polynomial of multiplication by f, found as the first linear
    // dependency among 1, f, f^2, ... modulo I.
    Univariate<F> minimal_polynomial(const Polynomial<F>& f) const {
        const F& k = ring_->field();
        const std::size_t n = basis_.size();
        if (n == 0) return {k.one()};
        // rows kept in echelon form together with their expression in powers of f
        std::vector<std::vector<Element>> rows, combos;
        std::vector<std::size_t> pivots;
        Polynomial<F> power = Polynomial<F>::one(ring_);
        for (std::size_t e = 0; e <= n; ++e) {
            std::vector<Element> v = coordinates(power);
            std::vector<Element> combo(e + 1, k.zero());
            combo[e] = k.one();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const auto c = v[pivots[r]];
                if (k.is_zero(c)) continue;
                for (std::size_t j = 0; j < n; ++j) v[j] = k.sub(v[j], k.mul(c, rows[r][j]));
                for (std::size_t j = 0; j < combos[r].size(); ++j) combo[j] = k.sub(combo[j], k.mul(c, combos[r][j]));
            }
            std::size_t piv = n;
            for (std::size_t j = 0; j < n; ++j)
                if (!k.is_zero(v[j])) {
                    piv = j;
                    break;
                }
            if (piv == n) {
                const auto inv = k.inv(combo.back());
                for (auto& c : combo) c = k.mul(c, inv);
                return combo;
            }
            const auto inv = k.inv(v[piv]);
            for (auto& c : v) c = k.mul(c, inv);
            for (auto& c : combo) c = k.mul(c, inv);
            rows.push_back(std::move(v));
            combos.push_back(std::move(combo));
            pivots.push_back(piv);
            power = normal_form(power * f, gb_);
        }
        throw Error("internal: minimal polynomial search exceeded the quotient dimension");
    }

private:
    RingPtr<F> ring_;
    PolyVec<F> gb_;
    std::vector<Monomial> basis_;
    std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

// Number of points with multiplicity of a zero-dimensional ideal (0 if empty).
template <class F>
std::size_t quotient_dimension(const Ideal<F>& I) {
    if (I.is_unit()) return 0;
    const HilbertData h = hilbert_data(I.leading_monomials(), I.ring()->nvars());
    if (h.krull_dim > 0) throw NotZeroDimensional("ideal is not zero-dimensional");
    return h.degree.get_ui();
}

template <class F, class Rng>
Polynomial<F> random_linear_form(const RingPtr<F>& ring, const std::vector<std::size_t>& vars, Rng& rng) {
    Polynomial<F> f(ring);
    for (auto v : vars)
        f = f + Polynomial<F>::variable(ring, v).scaled(ring->field().random_nonzero(rng, 1000));
    return f;
}

// Number of distinct points, read off the squarefree part of the minimal
// polynomial of a random linear form in `vars` (all variables when empty).
// With vars a subset this counts distinct projections.
template <class F>
std::size_t distinct_points(const Ideal<F>& I, std::uint64_t seed, std::vector<std::size_t> vars = {}) {
    if (I.is_unit()) return 0;
    if (vars.empty())
        for (std::size_t v = 0; v < I.ring()->nvars(); ++v) vars.push_back(v);
    ZeroDimQuotient<F> Q(I);
    std::mt19937_64 rng(seed);
    const auto l = random_linear_form(I.ring(), vars, rng);
    return squarefree_degree(I.ring()->field(), Q.minimal_polynomial(l));
}

// An F_p-rational point of a zero-dimensional ideal, found coordinate by
// coordinate from roots of minimal polynomials, or nullopt.
inline std::optional<std::vector<PrimeField::Element>> rational_point(const Ideal<PrimeField>& I,
                                                                      std::uint64_t seed, int budget = 64) {
    const auto& ring = I.ring();
    const PrimeField& k = ring->field();
    std::mt19937_64 rng(seed);
    std::function<std::optional<std::vector<std::uint32_t>>(const Ideal<PrimeField>&, std::size_t)> search =
        [&](const Ideal<PrimeField>& J, std::size_t v) -> std::optional<std::vector<std::uint32_t>> {
        if (J.is_unit() || budget-- <= 0) return std::nullopt;
        if (v == ring->nvars()) return std::vector<std::uint32_t>();
        ZeroDimQuotient<PrimeField> Q(J);
        const auto xv = Polynomial<PrimeField>::variable(ring, v);
        const auto m = Q.minimal_polynomial(xv);
        std::vector<std::uint32_t> roots;
        for (std::uint32_t a = 0; a < k.prime(); ++a)
            if (k.is_zero(ueval(k, m, a))) {
                roots.push_back(a);
                if (roots.size() + 1 >= m.size()) break;
            }
        std::shuffle(roots.begin(), roots.end(), rng);
        for (auto r : roots) {
            Ideal<PrimeField> next = ideal_with(J, {xv - Polynomial<PrimeField>::constant(ring, r)});
            auto rest = search(next, v + 1);
            if (rest) {
                rest->insert(rest->begin(), r);
                return rest;
            }
        }
        return std::nullopt;
    };
    return search(I, 0);
}

}  // namespace reltan
