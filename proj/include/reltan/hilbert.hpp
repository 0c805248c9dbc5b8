#pragma once

#include <algorithm>
#include <vector>

#include <gmpxx.h>

#include "reltan/monomial.hpp"

namespace reltan {

// Dense univariate integer polynomial in t, index = exponent.
using IntSeries = std::vector<mpz_class>;

namespace detail {

inline void trim(IntSeries& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline IntSeries series_add(const IntSeries& a, const IntSeries& b) {
    IntSeries r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

// p * (1 - t^d)
inline IntSeries times_one_minus(const IntSeries& p, std::size_t d) {
    IntSeries r(p.size() + d);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i] += p[i];
        r[i + d] -= p[i];
    }
    trim(r);
    return r;
}

inline IntSeries shift(const IntSeries& p, std::size_t d) {
    if (p.empty()) return p;
    IntSeries r(p.size() + d);
    for (std::size_t i = 0; i < p.size(); ++i) r[i + d] = p[i];
    return r;
}

inline void minimalize(std::vector<Monomial>& g) {
    std::sort(g.begin(), g.end(), [](const Monomial& a, const Monomial& b) { return a.degree < b.degree; });
    std::vector<Monomial> out;
    for (const auto& m : g) {
        bool redundant = false;
        for (const auto& k : out)
            if (divides(k, m)) {
                redundant = true;
                break;
            }
        if (!redundant) out.push_back(m);
    }
    g = std::move(out);
}

// Numerator N(t) of the Hilbert series N(t)/(1-t)^n of k[x]/<gens>, by pivoting
// on a power of the most frequent shared variable.
inline IntSeries hilbert_numerator_rec(std::vector<Monomial> gens, std::size_t nvars) {
    minimalize(gens);
    if (gens.empty()) return IntSeries{1};
    if (gens.front().degree == 0) return IntSeries{};
    // count occurrences per variable
    std::vector<int> occ(nvars, 0);
    for (const auto& m : gens)
        for (std::size_t v = 0; v < nvars; ++v)
            if (m.exp[v]) ++occ[v];
    std::size_t pivot_var = 0;
    for (std::size_t v = 1; v < nvars; ++v)
        if (occ[v] > occ[pivot_var]) pivot_var = v;
    if (occ[pivot_var] <= 1) {
        // pairwise coprime generators
        IntSeries r{1};
        for (const auto& m : gens) r = times_one_minus(r, m.degree);
        return r;
    }
    // pivot exponent: median over non-pure-power generators containing the variable
    std::vector<std::uint16_t> exps;
    for (const auto& m : gens)
        if (m.exp[pivot_var] && m.exp[pivot_var] != m.degree) exps.push_back(m.exp[pivot_var]);
    if (exps.empty())
        for (const auto& m : gens)
            if (m.exp[pivot_var]) exps.push_back(m.exp[pivot_var]);
    std::sort(exps.begin(), exps.end());
    std::uint16_t e = exps[(exps.size() - 1) / 2];
    const Monomial p = Monomial::variable(pivot_var, e);

    std::vector<Monomial> plus = gens;
    plus.push_back(p);
    std::vector<Monomial> colon;
    colon.reserve(gens.size());
    for (const auto& m : gens) colon.push_back(quotient(m, gcd(m, p)));
    return series_add(hilbert_numerator_rec(std::move(plus), nvars),
                      shift(hilbert_numerator_rec(std::move(colon), nvars), e));
}

}  // namespace detail

inline IntSeries hilbert_numerator(const std::vector<Monomial>& gens, std::size_t nvars) {
    return detail::hilbert_numerator_rec(gens, nvars);
}

// Krull dimension and degree of k[x]/<gens> for a monomial ideal. An empty
// variety (the unit ideal) has dimension -1 and degree 0.
struct HilbertData {
    int krull_dim = -1;
    mpz_class degree = 0;
    IntSeries numerator;
};

inline HilbertData hilbert_data(const std::vector<Monomial>& gens, std::size_t nvars) {
    HilbertData h;
    h.numerator = hilbert_numerator(gens, nvars);
    IntSeries n = h.numerator;
    if (n.empty()) return h;
    std::size_t k = 0;
    for (;;) {
        mpz_class at_one = 0;
        for (const auto& c : n) at_one += c;
        if (at_one != 0) {
            h.degree = at_one;
            break;
        }
        // synthetic division by (1 - t)
        IntSeries q(n.size() - 1);
        mpz_class carry = 0;
        for (std::size_t i = 0; i + 1 < n.size(); ++i) {
            carry += n[i];
            q[i] = carry;
        }
        n = std::move(q);
        ++k;
    }
    h.krull_dim = static_cast<int>(nvars) - static_cast<int>(k);
    return h;
}

}  // namespace reltan
