#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reltan/ed.hpp"
#include "reltan/parse.hpp"

namespace reltan {

struct FieldSpec {
    bool prime = false;
    std::uint32_t p = PrimeField::kDefaultPrime;

    std::string to_string() const { return prime ? "F " + std::to_string(p) : "QQ"; }
};

// Parses "QQ", "F <p>" or "F<p>".
inline FieldSpec parse_field_spec(const std::string& text) {
    std::istringstream in(text);
    std::string head;
    in >> head;
    FieldSpec f;
    if (head == "QQ") {
        std::string rest;
        if (in >> rest) throw InputError("unexpected text after field QQ");
        return f;
    }
    std::string digits;
    if (head == "F") {
        in >> digits;
    } else if (head.size() > 1 && head[0] == 'F') {
        digits = head.substr(1);
    } else {
        throw InputError("field must be QQ or F <p>, got '" + text + "'");
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("prime field needs a decimal prime, got '" + text + "'");
    const unsigned long long p = std::stoull(digits);
    if (p < 2 || p > 0xFFFFFFFFull) throw InputError("prime out of range: " + digits);
    if (mpz_probab_prime_p(mpz_class(digits).get_mpz_t(), 30) == 0)
        throw InputError(digits + " is not prime");
    f.prime = true;
    f.p = static_cast<std::uint32_t>(p);
    return f;
}

// An ideal or pair file: header lines "field ...", "vars ...", optional
// "projective"/"affine", then generator lines. Lines before any "[name]"
// header belong to the unnamed section. '#' starts a comment.
struct IdealFile {
    FieldSpec field;
    std::vector<std::string> vars;
    std::optional<bool> projective;
    std::vector<std::string> section_order;
    std::map<std::string, std::vector<std::string>> sections;

    bool has(const std::string& s) const { return sections.count(s) > 0; }
    const std::vector<std::string>& section(const std::string& s) const {
        auto it = sections.find(s);
        if (it == sections.end()) throw InputError("missing section [" + s + "]");
        return it->second;
    }
};

namespace detail {

inline std::string strip(const std::string& s) {
    std::string t = s.substr(0, s.find('#'));
    const auto b = t.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = t.find_last_not_of(" \t\r");
    return t.substr(b, e - b + 1);
}

inline std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace detail

inline IdealFile parse_ideal_file(const std::string& text) {
    IdealFile out;
    bool have_field = false, have_vars = false;
    std::string current;
    std::istringstream in(text);
    std::size_t lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        const std::string line = detail::strip(raw);
        if (line.empty()) continue;
        const auto w = detail::words(line);
        auto fail = [&](const std::string& why) {
            throw InputError("line " + std::to_string(lineno) + ": " + why);
        };
        if (w[0] == "field") {
            if (have_field) fail("duplicate field line");
            out.field = parse_field_spec(line.substr(5));
            have_field = true;
        } else if (w[0] == "vars") {
            if (have_vars) fail("duplicate vars line");
            if (!have_field) fail("the field line must come first");
            out.vars.assign(w.begin() + 1, w.end());
            if (out.vars.empty()) fail("no variables declared");
            have_vars = true;
        } else if (line == "projective" || line == "affine") {
            out.projective = line == "projective";
        } else if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) fail("malformed section header");
            current = line.substr(1, line.size() - 2);
            if (out.sections.count(current)) fail("duplicate section [" + current + "]");
            out.sections[current];
            out.section_order.push_back(current);
        } else {
            if (!have_vars) fail("generator before the vars line");
            if (!out.sections.count(current)) out.section_order.push_back(current);
            out.sections[current].push_back(line);
        }
    }
    if (!have_field) throw InputError("missing field line");
    if (!have_vars) throw InputError("missing vars line");
    return out;
}

inline IdealFile read_ideal_file(const std::string& path) { return parse_ideal_file(detail::read_text(path)); }

template <class F>
F make_field(const FieldSpec& s) {
    if constexpr (std::is_same_v<F, PrimeField>) {
        return PrimeField(s.p);
    } else {
        return F{};
    }
}

template <class F>
Ideal<F> section_ideal(const IdealFile& f, const RingPtr<F>& R, const std::string& name) {
    return Ideal<F>::parse(R, f.section(name));
}

// Rational matrix rows "a b c" for the quadratic form section.
template <class F>
QuadraticForm<F> parse_form(const std::vector<std::string>& rows, const F& k) {
    std::vector<std::vector<typename F::Element>> m;
    for (const auto& r : rows) {
        std::vector<typename F::Element> row;
        for (const auto& w : detail::words(r)) {
            mpq_class q;
            if (q.set_str(w, 10) != 0) throw InputError("bad form entry '" + w + "'");
            q.canonicalize();
            row.push_back(k.from_rational(q));
        }
        m.push_back(std::move(row));
    }
    return QuadraticForm<F>::from_matrix(k, std::move(m));
}

// A pair file has section [X] and at most one of [Z] (the full ideal of Z,
// checked to contain X) or [slice] (equations adjoined to X, so that
// Z = X meet V(slice)); with neither, Z = X. [form] is optional.
template <class F>
VarietyPair<F> load_pair(const IdealFile& f, const RingPtr<F>& R, std::optional<bool> projective_override = {}) {
    const Ideal<F> X = section_ideal(f, R, "X");
    if (f.has("Z") && f.has("slice")) throw InputError("give either [Z] or [slice], not both");
    Ideal<F> Z = X;
    if (f.has("Z")) Z = section_ideal(f, R, "Z");
    if (f.has("slice")) Z = ideal_with(X, section_ideal(f, R, "slice").generators());
    std::optional<bool> proj = projective_override ? projective_override : f.projective;
    if (!proj) proj = X.is_homogeneous() && Z.is_homogeneous();
    std::optional<QuadraticForm<F>> form;
    if (f.has("form")) form = parse_form(f.section("form"), R->field());
    return VarietyPair<F>(X, Z, *proj, form);
}

// "param t1 t2 ..." then one component per line, parsed over field k.
template <class F>
Parametrization<F> parse_parametrization(const std::string& text, const F& k) {
    std::istringstream in(text);
    Parametrization<F> out;
    std::vector<std::string> comps;
    for (std::string raw; std::getline(in, raw);) {
        const std::string line = detail::strip(raw);
        if (line.empty()) continue;
        const auto w = detail::words(line);
        if (w[0] == "param") {
            if (out.params) throw InputError("duplicate param line");
            if (w.size() < 2) throw InputError("param line declares no parameters");
            out.params = make_ring<F>(std::vector<std::string>(w.begin() + 1, w.end()), k);
        } else {
            if (!out.params) throw InputError("component before the param line");
            comps.push_back(line);
        }
    }
    if (!out.params) throw InputError("missing param line");
    for (const auto& c : comps) out.components.push_back(parse_polynomial(c, out.params));
    return out;
}

template <class F>
Parametrization<F> read_parametrization(const std::string& path, const F& k) {
    return parse_parametrization(detail::read_text(path), k);
}

// FNV-1a over the raw bytes, hex.
inline std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 15];
    return out;
}

}  // namespace reltan
