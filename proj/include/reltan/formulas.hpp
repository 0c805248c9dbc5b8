#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "reltan/errors.hpp"
#include "reltan/polynomial.hpp"

namespace reltan {

// Exact binomial; zero outside 0 <= k <= n.
inline mpz_class binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

enum class DeterminantalFlavor { General, Symmetric, SkewSymmetric };

inline const char* to_string(DeterminantalFlavor f) {
    switch (f) {
        case DeterminantalFlavor::General: return "general";
        case DeterminantalFlavor::Symmetric: return "symmetric";
        case DeterminantalFlavor::SkewSymmetric: return "skew";
    }
    return "?";
}

// Matrices of size (M+1)x(N+1), rank <= r. Symmetric and skew flavors need M = N.
struct DeterminantalSpec {
    long M = 0, N = 0, r = 1;
    DeterminantalFlavor flavor = DeterminantalFlavor::General;
};

struct DeterminantalInvariants {
    mpz_class ambient_dim, dim, codim, degree;
    // def = N_ambient - 1 - dim(dual), with dim(empty) = -1.
    mpz_class defect;
    long effective_r = 0;
    // skew with odd r: the values are those of rank r-1
    bool odd_skew = false;
};

namespace detail {

inline mpq_class ratio(const mpz_class& a, const mpz_class& b) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

inline mpz_class exact_integer(const mpq_class& q, const char* what) {
    if (q.get_den() != 1) throw Error(std::string("internal: non-integral ") + what);
    return q.get_num();
}

inline void validate(const DeterminantalSpec& s) {
    if (s.M < 0 || s.N < s.M) throw InputError("determinantal format needs 0 <= M <= N");
    if (s.flavor != DeterminantalFlavor::General && s.M != s.N)
        throw InputError("symmetric and skew flavors need square matrices (M = N)");
    if (s.r < 1 || s.r > s.M + 1) throw InputError("rank bound must satisfy 1 <= r <= M+1");
}

// codim of the rank <= r locus inside its own ambient space, r >= 0.
inline mpz_class determinantal_codim(const DeterminantalSpec& s, long r) {
    switch (s.flavor) {
        case DeterminantalFlavor::General: return mpz_class((s.M + 1 - r) * (s.N + 1 - r));
        case DeterminantalFlavor::Symmetric: return binomial(s.N - r + 2, 2);
        case DeterminantalFlavor::SkewSymmetric: return binomial(s.N + 1 - r, 2);
    }
    return 0;
}

}  // namespace detail

inline DeterminantalInvariants determinantal_invariants(const DeterminantalSpec& s) {
    detail::validate(s);
    DeterminantalInvariants out;
    long r = s.r;
    const long N = s.N, M = s.M;
    mpq_class deg = 1;
    long dual_r = 0;
    switch (s.flavor) {
        case DeterminantalFlavor::General:
            out.ambient_dim = (M + 1) * (N + 1) - 1;
            for (long i = 0; i <= M - r; ++i) deg *= detail::ratio(binomial(N + 1 + i, r), binomial(r + i, r));
            dual_r = M + 1 - r;
            break;
        case DeterminantalFlavor::Symmetric:
            out.ambient_dim = binomial(N + 2, 2) - 1;
            for (long i = 0; i <= N - r; ++i)
                deg *= detail::ratio(binomial(N + 1 + i, N + 1 - r - i), binomial(2 * i + 1, i));
            dual_r = N + 1 - r;
            break;
        case DeterminantalFlavor::SkewSymmetric:
            out.ambient_dim = binomial(N + 1, 2) - 1;
            if (r % 2 == 1) {
                out.odd_skew = true;
                --r;
            }
            if (r == 0) throw InputError("skew rank bound 1 gives the empty variety A_0");
            for (long i = 0; i <= N - r - 1; ++i)
                deg *= detail::ratio(binomial(N + 1 + i, N - r - i), binomial(2 * i + 1, i));
            deg /= mpq_class(mpz_class(mpz_class(1) << static_cast<mp_bitcnt_t>(N - r)));
            dual_r = N + 1 - r;
            dual_r -= dual_r % 2;
            break;
    }
    out.effective_r = r;
    out.codim = detail::determinantal_codim(s, r);
    out.dim = out.ambient_dim - out.codim;
    out.degree = detail::exact_integer(deg, "determinantal degree");
    out.defect = detail::determinantal_codim(s, dual_r) - 1;
    return out;
}

struct RelativeDefect {
    bool empty = false;
    mpz_class def_rel, codim_rel;
    // relative dual equals the full dual
    bool full = false;
};

// Z = X_r meet P(L1* (x) L2) with dim P(L1) = l1 <= N, dim P(L2) = l2 <= M.
inline RelativeDefect determinantal_relative_defect(const DeterminantalSpec& s, long l1, long l2) {
    detail::validate(s);
    if (s.flavor != DeterminantalFlavor::General) throw InputError("relative defect needs the general flavor");
    if (l1 < 0 || l1 > s.N || l2 < 0 || l2 > s.M) throw InputError("need 0 <= l1 <= N and 0 <= l2 <= M");
    RelativeDefect out;
    if (std::min(l1, l2) < s.r - 1) {
        out.empty = true;
        return out;
    }
    const long excess = std::max(l1 - s.M, 0L);
    out.def_rel = s.r * excess + s.r * s.r - 1;
    out.codim_rel = s.r * (2 * s.M - l1 - l2) + s.r * excess;
    out.full = std::min(l1, l2) >= s.M;
    return out;
}

template <class F>
using Matrix = std::vector<std::vector<typename F::Element>>;

template <class F>
typename F::Element determinant(const F& k, Matrix<F> A) {
    const std::size_t n = A.size();
    auto det = k.one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && k.is_zero(A[p][c])) ++p;
        if (p == n) return k.zero();
        if (p != c) {
            std::swap(A[p], A[c]);
            det = k.neg(det);
        }
        det = k.mul(det, A[c][c]);
        const auto inv = k.inv(A[c][c]);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (k.is_zero(A[i][c])) continue;
            const auto f = k.mul(A[i][c], inv);
            for (std::size_t j = c; j < n; ++j) A[i][j] = k.sub(A[i][j], k.mul(f, A[c][j]));
        }
    }
    return det;
}

// All r-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> lex_subsets(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    if (r > n) return out;
    std::vector<std::size_t> cur(r);
    for (std::size_t i = 0; i < r; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = r;
        while (i > 0 && cur[i - 1] == n - r + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < r; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// r-th compound matrix; the zero 1x1 matrix when r exceeds the row count.
template <class F>
Matrix<F> compound_matrix(const F& k, const Matrix<F>& A, std::size_t r) {
    if (r == 0) throw InputError("compound order must be positive");
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    if (r > rows || r > cols) return Matrix<F>{{k.zero()}};
    const auto I = lex_subsets(rows, r), J = lex_subsets(cols, r);
    Matrix<F> C(I.size(), std::vector<typename F::Element>(J.size(), k.zero()));
    for (std::size_t a = 0; a < I.size(); ++a)
        for (std::size_t b = 0; b < J.size(); ++b) {
            Matrix<F> sub(r, std::vector<typename F::Element>(r));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) sub[i][j] = A[I[a][i]][J[b][j]];
            C[a][b] = determinant(k, std::move(sub));
        }
    return C;
}

template <class F>
bool is_symmetric(const F& k, const Matrix<F>& A) {
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i].size() != A.size()) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (!k.equal(A[i][j], A[j][i])) return false;
    }
    return true;
}

template <class F>
Matrix<F> mat_mul(const F& k, const Matrix<F>& A, const Matrix<F>& B) {
    const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), inner = B.size();
    Matrix<F> C(n, std::vector<typename F::Element>(m, k.zero()));
    for (std::size_t i = 0; i < n; ++i) {
        if (A[i].size() != inner) throw InputError("matrix size mismatch");
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < inner; ++l) C[i][j] = k.add(C[i][j], k.mul(A[i][l], B[l][j]));
    }
    return C;
}

// Membership predicate of the relative dual of X_r along S_r:
// rank B = N+1-r and C_{N+1-r}(B) symmetric, for B of size (N+1)x(N+1).
template <class F>
bool symmetric_compound_test(const F& k, const Matrix<F>& B, std::size_t r) {
    const std::size_t n = B.size();
    if (r > n || r == 0) throw InputError("rank bound out of range");
    const std::size_t p = n - r;
    if (p == 0) return false;
    const Matrix<F> C = compound_matrix(k, B, p);
    bool nonzero = false;
    for (const auto& row : C)
        for (const auto& c : row) nonzero = nonzero || !k.is_zero(c);
    // rank exactly p: some p-minor nonzero and every (p+1)-minor zero
    if (!nonzero) return false;
    if (p + 1 <= n) {
        for (const auto& row : compound_matrix(k, B, p + 1))
            for (const auto& c : row)
                if (!k.is_zero(c)) return false;
    }
    return is_symmetric(k, C);
}

// deg(Z) * sum over i_1+...+i_s <= d of prod (d_k - 1)^{i_k}.
inline mpz_class ci_conditional_degree(const mpz_class& deg_z, long d, const std::vector<long>& degrees) {
    if (d < 0) throw InputError("dimension must be nonnegative");
    for (long e : degrees)
        if (e < 1) throw InputError("hypersurface degrees must be positive");
    // series coefficients of prod 1/(1 - (d_k-1) t) up to t^d
    std::vector<mpz_class> series(static_cast<std::size_t>(d) + 1, 0);
    series[0] = 1;
    for (long e : degrees) {
        const mpz_class q = e - 1;
        for (std::size_t j = 1; j < series.size(); ++j) series[j] += q * series[j - 1];
    }
    mpz_class total = 0;
    for (const auto& c : series) total += c;
    return deg_z * total;
}

// delta_i = sum_{j=i}^n (-1)^{n-j} C(j+1, i+1) deg c_{n-j}, from deg c_0 .. deg c_n.
inline std::vector<mpz_class> chern_to_multidegrees(long n, const std::vector<mpz_class>& chern) {
    if (n < 0 || chern.size() != static_cast<std::size_t>(n) + 1)
        throw InputError("need exactly n+1 Chern degrees");
    if (chern[0] <= 0) throw InputError("deg c_0 = deg X must be positive");
    std::vector<mpz_class> delta(static_cast<std::size_t>(n) + 1, 0);
    for (long i = 0; i <= n; ++i)
        for (long j = i; j <= n; ++j) {
            const mpz_class term = binomial(j + 1, i + 1) * chern[static_cast<std::size_t>(n - j)];
            delta[static_cast<std::size_t>(i)] += ((n - j) % 2 == 0) ? term : mpz_class(-term);
        }
    return delta;
}

inline mpz_class alpha_k(long n, long e, long k) {
    if (k < 0 || k > n - e) return 0;
    mpz_class s = 0;
    for (long i = e; i <= n - k; ++i) s += binomial(n - k + 1, i + 1);
    return s;
}

// deg(Y) * sum_k (-1)^k alpha_k(n,e) deg c_k(X).
inline mpz_class ci_chern_degree(const mpz_class& deg_y, long n, long e, const std::vector<mpz_class>& chern) {
    if (e < 0 || e > n) throw InputError("need 0 <= e <= n");
    if (chern.size() != static_cast<std::size_t>(n) + 1) throw InputError("need exactly n+1 Chern degrees");
    mpz_class s = 0;
    for (long k = 0; k <= n - e; ++k) {
        const mpz_class term = alpha_k(n, e, k) * chern[static_cast<std::size_t>(k)];
        s += (k % 2 == 0) ? term : mpz_class(-term);
    }
    return deg_y * s;
}

struct Cor62Result {
    mpz_class value;
    // c > n: empty sum
    bool degenerate = false;
};

// deg(Y) * sum_{i = max(def, c)}^n delta_i(X), with delta indexed 0..n.
inline Cor62Result cor62_degree(const mpz_class& deg_y, long c, long def, const std::vector<mpz_class>& delta) {
    if (delta.empty()) throw InputError("empty multidegree vector");
    if (c < 0 || def < 0) throw InputError("codimension and defect must be nonnegative");
    const long n = static_cast<long>(delta.size()) - 1;
    Cor62Result out;
    out.degenerate = c > n;
    mpz_class s = 0;
    for (long i = std::max(def, c); i <= n; ++i) s += delta[static_cast<std::size_t>(i)];
    out.value = deg_y * s;
    return out;
}

// Coefficient of h^{|delta|} prod t_i^{n_i - delta_i} in
// prod_i sum_{a=0}^{n_i} (that_i + h)^a t_i^{n_i - a}, that_i = sum_{j != i} t_j.
inline mpz_class kalman_degree(const std::vector<long>& n, const std::vector<long>& delta) {
    const std::size_t k = n.size();
    if (k == 0 || delta.size() != k) throw InputError("dimension and codimension vectors must match");
    if (k + 1 > kMaxVars) throw InputError("too many factors");
    for (std::size_t i = 0; i < k; ++i)
        if (delta[i] < 0 || delta[i] > n[i]) throw InputError("need 0 <= delta_i <= n_i");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("t" + std::to_string(i + 1));
    names.push_back("h");
    using P = Polynomial<RationalField>;
    const auto R = make_ring<RationalField>(names, RationalField{});
    const P h = P::variable(R, k);
    P product = P::one(R);
    for (std::size_t i = 0; i < k; ++i) {
        P hat = h;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) hat = hat + P::variable(R, j);
        const P ti = P::variable(R, i);
        // powers of that_i + h and t_i, combined into the geometric sum
        std::vector<P> up{P::one(R)}, tp{P::one(R)};
        for (long a = 1; a <= n[i]; ++a) {
            up.push_back(up.back() * hat);
            tp.push_back(tp.back() * ti);
        }
        P factor(R);
        for (long a = 0; a <= n[i]; ++a) factor = factor + up[static_cast<std::size_t>(a)] * tp[static_cast<std::size_t>(n[i] - a)];
        product = product * factor;
    }
    std::vector<std::uint32_t> e(k + 1, 0);
    long total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        e[i] = static_cast<std::uint32_t>(n[i] - delta[i]);
        total += delta[i];
    }
    e[k] = static_cast<std::uint32_t>(total);
    const Monomial target = Monomial::from_exponents(e);
    for (const auto& t : product.terms())
        if (t.m == target) return detail::exact_integer(t.c, "Kalman coefficient");
    return 0;
}

}  // namespace reltan
