#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <gmpxx.h>

#include "reltan/errors.hpp"

namespace reltan {

// Exact rationals. gmpxx keeps every result canonical (gcd 1, positive denominator).
class RationalField {
public:
    using Element = mpq_class;

    Element zero() const { return Element(0); }
    Element one() const { return Element(1); }
    bool is_zero(const Element& a) const { return sgn(a) == 0; }
    bool is_one(const Element& a) const { return a == 1; }

    Element add(const Element& a, const Element& b) const { return a + b; }
    Element sub(const Element& a, const Element& b) const { return a - b; }
    Element mul(const Element& a, const Element& b) const { return a * b; }
    Element neg(const Element& a) const { return -a; }
    Element inv(const Element& a) const {
        if (is_zero(a)) throw NonInvertibleCoefficient("division by zero");
        return 1 / a;
    }
    Element div(const Element& a, const Element& b) const { return a * inv(b); }
    bool equal(const Element& a, const Element& b) const { return a == b; }

    Element from_int(long v) const { return Element(v); }
    Element from_rational(const mpq_class& q) const {
        Element r = q;
        r.canonicalize();
        return r;
    }

    // Uniform integer in [-bound, bound].
    template <class Rng>
    Element random(Rng& rng, long bound = 10000) const {
        std::uniform_int_distribution<long> d(-bound, bound);
        return Element(d(rng));
    }
    template <class Rng>
    Element random_nonzero(Rng& rng, long bound = 10000) const {
        for (;;) {
            Element e = random(rng, bound);
            if (!is_zero(e)) return e;
        }
    }

    std::string to_string(const Element& a) const { return a.get_str(); }
    std::string name() const { return "QQ"; }
    std::uint32_t characteristic() const { return 0; }
    bool operator==(const RationalField&) const { return true; }
};

// Integers modulo a prime p < 2^31.
class PrimeField {
public:
    using Element = std::uint32_t;

    static constexpr std::uint32_t kDefaultPrime = 32003;

    explicit PrimeField(std::uint32_t p = kDefaultPrime) : p_(p) {
        if (p < 2 || p >= (1u << 31) || !is_prime(p))
            throw InputError("field characteristic must be a prime below 2^31, got " +
                             std::to_string(p));
    }

    std::uint32_t prime() const { return p_; }

    Element zero() const { return 0; }
    Element one() const { return 1; }
    bool is_zero(Element a) const { return a == 0; }
    bool is_one(Element a) const { return a == 1; }

    Element add(Element a, Element b) const {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Element sub(Element a, Element b) const { return a >= b ? a - b : a + p_ - b; }
    Element mul(Element a, Element b) const {
        return static_cast<Element>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
    Element inv(Element a) const {
        if (a == 0) throw NonInvertibleCoefficient("division by zero mod " + std::to_string(p_));
        std::int64_t t = 0, nt = 1, r = p_, nr = a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0) t += p_;
        return static_cast<Element>(t);
    }
    Element div(Element a, Element b) const { return mul(a, inv(b)); }
    bool equal(Element a, Element b) const { return a == b; }

    Element from_int(long v) const {
        long r = v % static_cast<long>(p_);
        if (r < 0) r += p_;
        return static_cast<Element>(r);
    }
    Element from_integer(const mpz_class& z) const {
        mpz_class r = z % p_;
        if (r < 0) r += p_;
        return static_cast<Element>(r.get_ui());
    }
    Element from_rational(const mpq_class& q) const {
        Element den = from_integer(q.get_den());
        if (den == 0)
            throw NonInvertibleCoefficient("denominator " + q.get_den().get_str() +
                                           " is not invertible mod " + std::to_string(p_));
        return mul(from_integer(q.get_num()), inv(den));
    }

    template <class Rng>
    Element random(Rng& rng, long = 0) const {
        std::uniform_int_distribution<std::uint32_t> d(0, p_ - 1);
        return d(rng);
    }
    template <class Rng>
    Element random_nonzero(Rng& rng, long = 0) const {
        std::uniform_int_distribution<std::uint32_t> d(1, p_ - 1);
        return d(rng);
    }

    // Symmetric representative, so small negatives render as "-1" rather than "p-1".
    std::string to_string(Element a) const {
        if (a > p_ / 2) return "-" + std::to_string(p_ - a);
        return std::to_string(a);
    }
    std::string name() const { return "F_" + std::to_string(p_); }
    std::uint32_t characteristic() const { return p_; }
    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

private:
    std::uint32_t p_;
};

}  // namespace reltan
