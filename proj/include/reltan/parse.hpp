#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "reltan/polynomial.hpp"

namespace reltan {

namespace detail {

// Recursive-descent parser for   expr := ['+'|'-'] term {('+'|'-') term}
//                                 term := factor {('*'|'/') factor}
//                               factor := '-' factor | atom ['^' int]
//                                 atom := number | name | '(' expr ')'
template <class F>
class PolyParser {
public:
    PolyParser(const std::string& text, const RingPtr<F>& ring) : s_(text), ring_(ring) {}

    Polynomial<F> parse() {
        skip();
        if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
        Polynomial<F> p = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return p;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial<F> expr() {
        Polynomial<F> acc(ring_);
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        Polynomial<F> t = term();
        acc = negate ? acc - t : acc + t;
        for (;;) {
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else break;
        }
        return acc;
    }

    Polynomial<F> term() {
        Polynomial<F> acc = factor();
        for (;;) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Polynomial<F> d = factor();
                if (!d.is_constant()) throw ParseError("division by a non-constant", at);
                if (d.is_zero()) {
                    if (ring_->field().characteristic() != 0)
                        throw NonInvertibleCoefficient("coefficient is not invertible in " + ring_->field().name() +
                                                       " at position " + std::to_string(at));
                    throw ParseError("division by zero", at);
                }
                acc = acc.scaled(ring_->field().inv(d.lc()));
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial<F> factor() {
        if (accept('-')) return -factor();
        Polynomial<F> base = atom();
        if (accept('^')) {
            skip();
            const std::size_t at = pos_;
            const mpz_class e = integer();
            if (e > kMaxExponent) throw ParseError("exponent too large", at);
            base = pow(base, static_cast<unsigned>(e.get_ui()));
        }
        return base;
    }

    mpz_class integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected an integer", start);
        return mpz_class(s_.substr(start, pos_ - start));
    }

    Polynomial<F> atom() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial<F> p = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class z = integer();
            return Polynomial<F>::constant(ring_, ring_->field().from_rational(mpq_class(z)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            auto idx = ring_->index_of(name);
            if (!idx) throw InputError("unknown variable '" + name + "' at position " + std::to_string(start));
            return Polynomial<F>::variable(ring_, *idx);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    const std::string& s_;
    RingPtr<F> ring_;
    std::size_t pos_ = 0;
};

}  // namespace detail

template <class F>
Polynomial<F> parse_polynomial(const std::string& text, const RingPtr<F>& ring) {
    return detail::PolyParser<F>(text, ring).parse();
}

template <class F>
std::string render_monomial(const Monomial& m, const Ring<F>& ring) {
    std::string out;
    for (std::size_t i = 0; i < ring.nvars(); ++i) {
        if (!m.exp[i]) continue;
        if (!out.empty()) out += '*';
        out += ring.name(i);
        if (m.exp[i] > 1) out += '^' + std::to_string(m.exp[i]);
    }
    return out.empty() ? "1" : out;
}

// Deterministic rendering in the parser's grammar, leading term first.
template <class F>
std::string render(const Polynomial<F>& p) {
    if (p.is_zero()) return "0";
    const auto& ring = *p.ring();
    const F& k = ring.field();
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        std::string c = k.to_string(t.c);
        bool neg = !c.empty() && c[0] == '-';
        if (neg) c.erase(0, 1);
        if (first) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        first = false;
        if (t.m.is_one()) {
            out += c;
        } else {
            if (c != "1") out += c + "*";
            out += render_monomial(t.m, ring);
        }
    }
    return out;
}

template <class F>
std::ostream& operator<<(std::ostream& os, const Polynomial<F>& p) {
    return os << render(p);
}

}  // namespace reltan
