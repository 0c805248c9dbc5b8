#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "reltan/errors.hpp"

namespace reltan {

inline constexpr std::size_t kMaxVars = 32;
inline constexpr std::uint32_t kMaxExponent = (1u << 15) - 1;

// Fixed-width exponent vector with cached total degree and a divisibility filter.
// Unused trailing slots are always zero.
struct Monomial {
    std::array<std::uint16_t, kMaxVars> exp{};
    std::uint32_t degree = 0;
    std::uint64_t mask = 0;

    // Recompute degree and mask after editing exp directly.
    void refresh() {
        degree = 0;
        mask = 0;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            const std::uint32_t e = exp[i];
            degree += e;
            if (e >= 1) mask |= std::uint64_t{1} << (2 * i);
            if (e >= 2) mask |= std::uint64_t{1} << (2 * i + 1);
        }
    }

    static Monomial variable(std::size_t i, std::uint32_t power = 1) {
        Monomial m;
        if (power > kMaxExponent) throw ExponentOverflow("exponent exceeds 2^15-1");
        m.exp[i] = static_cast<std::uint16_t>(power);
        m.refresh();
        return m;
    }

    static Monomial from_exponents(const std::vector<std::uint32_t>& e) {
        Monomial m;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] > kMaxExponent) throw ExponentOverflow("exponent exceeds 2^15-1");
            m.exp[i] = static_cast<std::uint16_t>(e[i]);
        }
        m.refresh();
        return m;
    }

    bool is_one() const { return degree == 0; }

    bool operator==(const Monomial& o) const { return degree == o.degree && exp == o.exp; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    bool overflow = false;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        const std::uint32_t s = std::uint32_t{a.exp[i]} + b.exp[i];
        overflow |= s > kMaxExponent;
        r.exp[i] = static_cast<std::uint16_t>(s);
    }
    if (overflow) throw ExponentOverflow("monomial exponent exceeds 2^15-1");
    r.degree = a.degree + b.degree;
    r.mask = a.mask | b.mask;
    // the >=2 bit can appear from two exponents of 1
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (r.exp[i] >= 2) r.mask |= std::uint64_t{1} << (2 * i + 1);
    return r;
}

inline bool divides(const Monomial& a, const Monomial& b) {
    if ((a.mask & ~b.mask) != 0 || a.degree > b.degree) return false;
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (a.exp[i] > b.exp[i]) return false;
    return true;
}

// b / a, assuming a | b.
inline Monomial quotient(const Monomial& b, const Monomial& a) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint16_t>(b.exp[i] - a.exp[i]);
    r.refresh();
    return r;
}

inline Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = std::max(a.exp[i], b.exp[i]);
    r.refresh();
    return r;
}

inline Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = std::min(a.exp[i], b.exp[i]);
    r.refresh();
    return r;
}

inline bool coprime(const Monomial& a, const Monomial& b) {
    if ((a.mask & b.mask) != 0) {
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (a.exp[i] != 0 && b.exp[i] != 0) return false;
    }
    return true;
}

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            h ^= m.exp[i];
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Admissible term orders. Block elimination ranks the first `boundary` variables
// by degree-reverse-lex first and only then looks at the remaining block.
class MonomialOrder {
public:
    enum class Kind { Lex, GrevLex, BlockElimination, WeightedGrevLex };

    static MonomialOrder lex() { return MonomialOrder(Kind::Lex); }
    static MonomialOrder grevlex() { return MonomialOrder(Kind::GrevLex); }
    static MonomialOrder block(std::size_t boundary) {
        MonomialOrder o(Kind::BlockElimination);
        o.boundary_ = boundary;
        return o;
    }
    static MonomialOrder weighted(std::vector<std::uint32_t> weights) {
        for (auto w : weights)
            if (w == 0) throw InputError("weights of a weighted order must be positive");
        MonomialOrder o(Kind::WeightedGrevLex);
        o.weights_ = std::move(weights);
        return o;
    }

    Kind kind() const { return kind_; }
    std::size_t boundary() const { return boundary_; }
    const std::vector<std::uint32_t>& weights() const { return weights_; }

    bool is_graded() const { return kind_ == Kind::GrevLex; }

    // Negative, zero or positive as a <, ==, > b.
    int compare(const Monomial& a, const Monomial& b, std::size_t nvars) const {
        switch (kind_) {
            case Kind::Lex:
                for (std::size_t i = 0; i < nvars; ++i)
                    if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i] ? 1 : -1;
                return 0;
            case Kind::GrevLex:
                if (a.degree != b.degree) return a.degree > b.degree ? 1 : -1;
                return revlex(a, b, 0, nvars);
            case Kind::BlockElimination: {
                const std::size_t k = std::min(boundary_, nvars);
                std::uint32_t da = 0, db = 0;
                for (std::size_t i = 0; i < k; ++i) {
                    da += a.exp[i];
                    db += b.exp[i];
                }
                if (da != db) return da > db ? 1 : -1;
                if (int c = revlex(a, b, 0, k)) return c;
                if (a.degree - da != b.degree - db) return a.degree - da > b.degree - db ? 1 : -1;
                return revlex(a, b, k, nvars);
            }
            case Kind::WeightedGrevLex: {
                std::uint64_t wa = 0, wb = 0;
                for (std::size_t i = 0; i < nvars; ++i) {
                    const std::uint64_t w = i < weights_.size() ? weights_[i] : 1;
                    wa += w * a.exp[i];
                    wb += w * b.exp[i];
                }
                if (wa != wb) return wa > wb ? 1 : -1;
                return revlex(a, b, 0, nvars);
            }
        }
        return 0;
    }

    bool operator==(const MonomialOrder& o) const {
        return kind_ == o.kind_ && boundary_ == o.boundary_ && weights_ == o.weights_;
    }

    std::string name() const {
        switch (kind_) {
            case Kind::Lex: return "lex";
            case Kind::GrevLex: return "grevlex";
            case Kind::BlockElimination: return "block(" + std::to_string(boundary_) + ")";
            case Kind::WeightedGrevLex: return "wgrevlex";
        }
        return "";
    }

private:
    explicit MonomialOrder(Kind k) : kind_(k) {}

    // Reverse lex on [lo, hi): the monomial with the smaller last differing exponent wins.
    static int revlex(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
        for (std::size_t i = hi; i-- > lo;)
            if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? 1 : -1;
        return 0;
    }

    Kind kind_;
    std::size_t boundary_ = 0;
    std::vector<std::uint32_t> weights_;
};

}  // namespace reltan
