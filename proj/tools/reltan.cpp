#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reltan/acceptance.hpp"
#include "reltan/formulas.hpp"
#include "reltan/ideal_io.hpp"

namespace {

using namespace reltan;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kOk = 0;
constexpr int kSuiteFailed = 1;
constexpr int kHypothesis = 2;
constexpr int kResource = 3;
constexpr int kInput = 4;

const char* const kEmptyMarker = "EMPTY (Z \xe2\x8a\x86 X_sing)";

struct Options {
    std::string command;
    std::string input;
    std::string param_phi, param_psi;
    std::string field;
    std::vector<std::string> field_words;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t jobs = 1;
    std::size_t max_pairs = 0;
    std::uint32_t max_degree = 0;
    double max_seconds = 0;
    bool projective = false, affine = false;
    std::string report;
    std::string format = "text";
    bool no_timing = false;
    std::string order = "grevlex";
    std::string vars;
    std::string point;
    std::vector<std::string> members;
    bool exact = false;
    bool joint = false;
    // formulas
    std::string kind;
    long M = 0, N = 0, r = 1, d = 0, c = 0, def = 0, e = 0, n = 0;
    std::string flavor = "general";
    std::optional<long> l1, l2;
    std::string nvec, delta, degrees, chern, deg_z = "1", deg_y = "1";
};

struct Report {
    json head = json::object();
    json results = json::object();
    json routes = json::object();
    json hypotheses = json::object();
    json timing = json::object();
    json failure;
    std::string stage = "setup";

    Report() {
        hypotheses["diagonal_check"] = "not_evaluated";
        hypotheses["ed_regularity"] = "not_evaluated";
        hypotheses["dual_regularity"] = "not_evaluated";
    }

    json document(bool with_timing) const {
        json out = head;
        out["results"] = results;
        out["routes"] = routes;
        out["hypotheses"] = hypotheses;
        if (!failure.is_null()) out["failure"] = failure;
        if (with_timing) out["timing_ms"] = timing;
        return out;
    }
};

template <class Fn>
auto stage(Report& rep, const std::string& name, Fn&& fn) {
    rep.stage = name;
    const auto t0 = Clock::now();
    auto record = [&] {
        rep.timing[name] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record();
    } else {
        auto v = fn();
        record();
        return v;
    }
}

const char* status(bool ok) { return ok ? "pass" : "fail"; }

const char* status(TriState t) {
    switch (t) {
        case TriState::Yes: return "pass";
        case TriState::No: return "fail";
        default: return "inconclusive";
    }
}

json big(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

json rational(const mpq_class& q) {
    if (q.get_den() == 1) return big(q.get_num());
    return q.get_str();
}

// Over QQ ideals are printed with coprime integer coefficients and a
// positive leading coefficient; over F_p the reduced basis is monic.
template <class F>
Polynomial<F> display_form(const Polynomial<F>& p) {
    if constexpr (std::is_same_v<F, RationalField>) {
        if (p.is_zero()) return p;
        mpz_class den = 1, num = 0;
        for (const auto& t : p.terms()) {
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.c.get_num_mpz_t());
        }
        mpq_class s(den, num);
        s.canonicalize();
        if (sgn(p.lc()) < 0) s = -s;
        return p.scaled(s);
    } else {
        return p;
    }
}

template <class F>
json render_ideal(const Ideal<F>& I, bool clear_denominators = true) {
    PolyVec<F> gb = I.groebner();
    const auto& R = *I.ring();
    std::sort(gb.begin(), gb.end(), [&](const Polynomial<F>& a, const Polynomial<F>& b) {
        return R.compare(a.lm(), b.lm()) > 0;
    });
    json out = json::array();
    for (const auto& g : gb) out.push_back(render(clear_denominators ? display_form(g) : g));
    return out;
}

json dim_degree(const DimDegree& dd) {
    json j = json::object();
    j["empty"] = dd.empty();
    j["dim"] = dd.dim;
    j["degree"] = big(dd.degree);
    j["krull_dim"] = dd.krull_dim;
    j["homogeneous"] = dd.homogeneous;
    j["projective"] = dd.projective;
    return j;
}

json multidegree_json(const MultidegreeVector& m) {
    json j = json::object();
    j["N"] = m.N;
    j["n"] = m.n;
    j["d"] = m.d;
    const auto first = m.first(), last = m.last();
    if (first && last)
        j["offsets"] = json::array({*first, *last});
    else
        j["offsets"] = json::array();
    j["values"] = m.nonzero_range();
    j["all"] = m.values;
    j["relative_polar_degrees"] = relative_polar_degrees(m);
    if (const auto dd = m.dual_dimension())
        j["dual_dimension"] = *dd;
    else
        j["dual_dimension"] = nullptr;
    return j;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<long> long_list(const std::string& s, const char* what) {
    std::vector<long> out;
    for (const auto& w : split_list(s)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stol(w, &used));
            if (used != w.size()) throw std::invalid_argument(w);
        } catch (const std::exception&) {
            throw InputError(std::string("bad integer '") + w + "' in " + what);
        }
    }
    return out;
}

mpz_class integer(const std::string& s, const char* what) {
    mpz_class z;
    if (s.empty() || z.set_str(s, 10) != 0) throw InputError(std::string("bad integer '") + s + "' for " + what);
    return z;
}

std::vector<mpz_class> integer_list(const std::string& s, const char* what) {
    std::vector<mpz_class> out;
    for (const auto& w : split_list(s)) out.push_back(integer(w, what));
    return out;
}

template <class F>
std::vector<typename F::Element> point_list(const std::string& s, const F& k) {
    std::vector<typename F::Element> out;
    for (const auto& w : split_list(s)) {
        mpq_class q;
        if (q.set_str(w, 10) != 0) throw InputError("bad coordinate '" + w + "'");
        q.canonicalize();
        out.push_back(k.from_rational(q));
    }
    return out;
}

template <class F>
json point_json(const std::vector<typename F::Element>& u, const F& k) {
    json out = json::array();
    for (const auto& x : u) out.push_back(k.to_string(x));
    return out;
}

// The generators of a plain ideal file: [I] if present, else the unnamed
// section, else the only section.
std::string main_section(const IdealFile& f) {
    if (f.has("I")) return "I";
    if (f.has("")) return "";
    if (f.section_order.size() == 1) return f.section_order.front();
    throw InputError("the ideal file needs an unnamed section or an [I] section");
}

MonomialOrder order_of(const std::string& name, std::size_t nvars) {
    if (name == "grevlex") return MonomialOrder::grevlex();
    if (name == "lex") return MonomialOrder::lex();
    if (name.rfind("block:", 0) == 0) {
        const long b = long_list(name.substr(6), "block order").at(0);
        if (b <= 0 || static_cast<std::size_t>(b) >= nvars) throw InputError("block boundary out of range");
        return MonomialOrder::block(static_cast<std::size_t>(b));
    }
    throw InputError("unknown order '" + name + "' (grevlex, lex, block:k)");
}

template <class F>
class Runner {
public:
    Runner(const Options& o, const IdealFile& f, const FieldSpec& fs, Report& rep)
        : o_(o), file_(f), rep_(rep), k_(make_field<F>(fs)) {}

    int run() {
        const std::string& c = o_.command;
        if (c == "gb") return gb();
        if (c == "eliminate") return eliminate_cmd();
        if (c == "saturate") return saturate_cmd();
        if (c == "dim-degree") return dim_degree_cmd();
        if (c == "conormal") return conormal();
        if (c == "dual") return dual();
        if (c == "multidegrees") return multidegrees();
        if (c == "contact") return contact();
        if (c == "defects") return defects();
        if (c == "edd") return edd();
        if (c == "data-locus") return data_locus();
        throw InputError("unknown command " + c);
    }

private:
    RingPtr<F> ring(MonomialOrder order = MonomialOrder::grevlex()) const {
        return make_ring<F>(file_.vars, k_, std::move(order));
    }

    Ideal<F> plain_ideal(const RingPtr<F>& R) const {
        return stage(rep_, "parse", [&] { return section_ideal(file_, R, main_section(file_)); });
    }

    int gb() {
        const auto R = ring(order_of(o_.order, file_.vars.size()));
        const Ideal<F> I = plain_ideal(R);
        rep_.head["order"] = o_.order;
        const auto basis = stage(rep_, "groebner", [&] { return render_ideal(I, false); });
        rep_.results["groebner_basis"] = basis;
        rep_.results["size"] = basis.size();
        rep_.routes["groebner_basis"] = "reduced Buchberger basis";
        return kOk;
    }

    int eliminate_cmd() {
        const auto R = ring();
        const Ideal<F> I = plain_ideal(R);
        std::vector<std::size_t> drop;
        for (const auto& v : split_list(o_.vars)) {
            const auto idx = R->index_of(v);
            if (!idx) throw InputError("unknown variable '" + v + "' in --vars");
            drop.push_back(*idx);
        }
        if (drop.empty()) throw InputError("eliminate needs --vars");
        const Ideal<F> J = stage(rep_, "eliminate", [&] { return eliminate(I, drop); });
        rep_.results["eliminated"] = split_list(o_.vars);
        rep_.results["ring"] = J.ring()->names();
        rep_.results["ideal"] = render_ideal(J);
        rep_.routes["ideal"] = "block elimination order";
        return kOk;
    }

    int saturate_cmd() {
        const auto R = ring();
        const Ideal<F> I = plain_ideal(R);
        const Ideal<F> J = stage(rep_, "parse", [&] { return section_ideal(file_, R, "J"); });
        const Ideal<F> S = stage(rep_, "saturate", [&] { return saturate_ideal(I, J); });
        rep_.results["ideal"] = render_ideal(S);
        rep_.results["dim_degree"] = dim_degree(hilbert_dim_degree(S));
        rep_.routes["ideal"] = "saturation (I : J^inf)";
        return kOk;
    }

    int dim_degree_cmd() {
        const Ideal<F> I = plain_ideal(ring());
        const DimDegree dd = stage(rep_, "hilbert", [&] { return hilbert_dim_degree(I); });
        rep_.results["dim_degree"] = dim_degree(dd);
        rep_.routes["dim_degree"] = "Hilbert series of the leading-term ideal";
        return kOk;
    }

    std::optional<bool> model_override() const {
        if (o_.projective && o_.affine) throw InputError("--projective and --affine are exclusive");
        if (o_.projective) return true;
        if (o_.affine) return false;
        return std::nullopt;
    }

    VarietyPair<F> load() {
        const auto R = ring();
        rep_.stage = "pair";
        try {
            auto pair = stage(rep_, "pair", [&] { return load_pair(file_, R, model_override()); });
            rep_.hypotheses["z_in_x"] = "pass";
            rep_.results["model"] = pair.projective() ? "projective" : "affine";
            rep_.results["N"] = pair.ambient_dim();
            rep_.results["dim_x"] = pair.dim_x();
            rep_.results["dim_z"] = pair.dim_z();
            rep_.results["deg_x"] = big(pair.deg_x());
            rep_.results["deg_z"] = big(pair.deg_z());
            const bool inside = stage(rep_, "singular_locus", [&] { return pair.z_inside_singular_locus(); });
            rep_.hypotheses["z_not_in_singular_locus"] = status(!inside);
            rep_.hypotheses["z_avoids_singular_locus"] =
                inside ? "fail" : status(stage(rep_, "singular_locus", [&] { return pair.z_avoids_singular_locus(); }));
            return pair;
        } catch (const HypothesisFailure&) {
            rep_.hypotheses["z_in_x"] = "fail";
            throw;
        }
    }

    bool empty_marker(const VarietyPair<F>& pair, const char* key) {
        if (rep_.hypotheses["z_not_in_singular_locus"] == "pass") return false;
        (void)pair;
        rep_.results[key] = kEmptyMarker;
        rep_.routes[key] = "Z lies in the singular locus of X: every conormal fiber over Z is excluded";
        return true;
    }

    void diagonal(const Conormal<F>& W) {
        const bool meets = stage(rep_, "diagonal", [&] { return meets_diagonal(W, o_.seed); });
        rep_.hypotheses["diagonal_check"] = status(!meets);
    }

    int conormal() {
        const auto pair = load();
        if (empty_marker(pair, "conormal")) return kOk;
        const Conormal<F> W(pair);
        const Ideal<F>& I = stage(rep_, "conormal", [&]() -> const Ideal<F>& { return W.ideal(o_.seed, o_.exact); });
        const DimDegree dd = stage(rep_, "hilbert", [&] { return hilbert_dim_degree(I); });
        rep_.results["ring"] = W.ring()->names();
        rep_.results["conormal"] = render_ideal(I);
        rep_.results["krull_dim"] = dd.krull_dim;
        rep_.results["dim"] = dd.krull_dim - 2;
        rep_.results["expected_dim"] = static_cast<int>(pair.ambient_dim()) - 1 - (pair.dim_x() - pair.dim_z());
        rep_.routes["conormal"] = o_.exact ? "Jacobian minors saturated by the singular locus (exact)"
                                          : "Jacobian minors saturated by a random combination of singular minors";
        return kOk;
    }

    int dual() {
        const auto pair = load();
        if (empty_marker(pair, "relative_dual")) return kOk;
        const Conormal<F> W(pair);
        const Ideal<F> D = stage(rep_, "dual", [&] { return relative_dual_ideal(W, o_.seed, o_.exact); });
        rep_.results["ring"] = D.ring()->names();
        rep_.results["relative_dual"] = D.is_unit() ? json(kEmptyMarker) : render_ideal(D);
        rep_.results["dim_degree"] = dim_degree(hilbert_dim_degree(D));
        rep_.routes["relative_dual"] = "projection of the relative conormal variety to the dual space";
        return kOk;
    }

    int multidegrees() {
        const auto pair = load();
        if (empty_marker(pair, "multidegrees")) return kOk;
        const Conormal<F> W(pair);
        const auto m = stage(rep_, "multidegrees", [&] { return relative_multidegrees(W, o_.seed, o_.jobs); });
        rep_.results["multidegrees"] = multidegree_json(m);
        const auto last = m.last();
        rep_.results["last_multidegree_is_deg_z"] =
            last && mpz_class(static_cast<unsigned long>(m.values[*last])) == pair.deg_z();
        rep_.routes["multidegrees"] = "generic linear slices of the relative conormal variety";
        diagonal(W);
        return kOk;
    }

    int contact() {
        const auto pair = load();
        if (empty_marker(pair, "contact_locus")) return kOk;
        const Conormal<F> W(pair);
        const auto H = point_list(o_.point, k_);
        if (H.size() != W.nx()) throw InputError("--point needs one coordinate per variable");
        const Ideal<F> D = stage(rep_, "dual", [&] { return relative_dual_ideal(W, o_.seed); });
        bool on_dual = true;
        for (const auto& g : D.generators()) on_dual = on_dual && k_.is_zero(evaluate(g, H));
        rep_.hypotheses["hyperplane_on_relative_dual"] = status(on_dual);
        const Ideal<F> C = stage(rep_, "contact", [&] { return W.contact_locus(H, o_.seed); });
        rep_.results["hyperplane"] = point_json(H, k_);
        rep_.results["contact_locus"] = render_ideal(C);
        rep_.results["dim_degree"] = dim_degree(hilbert_dim_degree(C));
        rep_.routes["contact_locus"] = "fiber of the relative conormal variety over the hyperplane";
        return on_dual ? kOk : kHypothesis;
    }

    int defects() {
        const auto pair = load();
        if (!pair.projective()) throw InputError("defects need a projective pair");
        if (empty_marker(pair, "defects")) return kOk;
        const DefectReport r = stage(rep_, "defects", [&] { return defect_pair(pair, o_.seed); });
        json j = json::object();
        j["dim_dual_x"] = r.dim_dual_x;
        j["dim_dual_xz"] = r.dim_dual_xz;
        j["def_x"] = r.def_x;
        j["def_xz"] = r.def_xz;
        j["codim_xz_in_dual"] = r.codim_xz_in_dual;
        j["codim_z_in_x"] = r.codim_z_in_x;
        j["def_equal"] = r.def_equal;
        j["reflexive"] = status(r.reflexive);
        j["reciprocal"] = status(r.reciprocal);
        if (r.contact_dimension)
            j["contact_dimension"] = *r.contact_dimension;
        else
            j["contact_dimension"] = nullptr;
        const bool regular = r.dual_regular == TriState::Yes;
        j["equivalence"] = regular ? json(r.equivalence_holds) : json("not_asserted");
        j["codim_identity"] = regular ? json(r.codim_identity_holds) : json("not_asserted");
        if (!r.note.empty()) j["note"] = r.note;
        rep_.results["defects"] = j;
        rep_.routes["defects"] = "dimensions of the dual and relative dual ideals";
        rep_.routes["equivalence"] = "relative biduality, asserted only for dual-regular pairs";
        rep_.hypotheses["dual_regularity"] = status(r.dual_regular);
        return r.dual_regular == TriState::No ? kHypothesis : kOk;
    }

    std::optional<Parametrization<F>> z_parametrization(const EDProblem<F>& E, json& extra) {
        if (o_.param_phi.empty()) return std::nullopt;
        const auto phi = stage(rep_, "parse", [&] { return read_parametrization(o_.param_phi, k_); });
        const auto psi = stage(rep_, "parse", [&] { return read_parametrization(o_.param_psi, k_); });
        if (phi.components.size() != E.nx()) throw InputError("phi needs one component per variable");
        Parametrization<F> z{psi.params, {}};
        for (const auto& c : phi.components) z.components.push_back(substitute(c, psi.components, psi.params));
        const Ideal<F> T = stage(rep_, "parametrized", [&] {
            const auto th = param_ed_correspondence(phi, psi, E.pair().form(), o_.seed);
            return implicitize(th, E.ring());
        });
        const bool agrees = stage(rep_, "parametrized", [&] { return radical_equal(T, E.ideal(o_.seed)); });
        extra["parametrized_correspondence"] = render_ideal(T);
        rep_.hypotheses["parametrized_route_agrees"] = status(agrees);
        rep_.routes["parametrized_correspondence"] = "implicitization of the normal-bundle parametrization";
        return z;
    }

    int edd() {
        const auto pair = load();
        const EDProblem<F> E(pair);
        rep_.results["ring"] = E.ring()->names();
        const Ideal<F>& I = stage(rep_, "ed_correspondence", [&]() -> const Ideal<F>& { return E.ideal(o_.seed, o_.exact); });
        rep_.results["ed_correspondence"] = render_ideal(I);
        rep_.routes["ed_correspondence"] = "critical equations on Z saturated by the singular locus";
        json extra = json::object();
        const auto z_param = z_parametrization(E, extra);
        for (auto& [key, v] : extra.items()) rep_.results[key] = v;
        const int code = pair.projective() ? edd_projective(E, z_param) : edd_affine(E, I, z_param);
        if (rep_.hypotheses.contains("parametrized_route_agrees") && rep_.hypotheses["parametrized_route_agrees"] == "fail")
            return kHypothesis;
        return code;
    }

    int edd_projective(const EDProblem<F>& E, const std::optional<Parametrization<F>>& z_param) {
        const Conormal<F> W(E.pair());
        const auto m = stage(rep_, "multidegrees", [&] { return relative_multidegrees(W, o_.seed, o_.jobs); });
        const Ideal<F> DL = stage(rep_, "data_locus", [&] { return E.data_locus(o_.seed, o_.exact); });
        rep_.results["data_locus"] = render_ideal(DL);
        rep_.results["multidegrees"] = multidegree_json(m);
        EDDOptions opt;
        opt.seed = o_.seed;
        opt.jobs = o_.jobs;
        const EDDResult r = stage(rep_, "edd", [&] { return conditional_ed_degree(E, m, opt, z_param); });
        rep_.results["sum_delta"] = r.sum_delta;
        rep_.results["deg_DL"] = big(r.deg_dl);
        rep_.results["slice_product"] = r.slice_product;
        rep_.results["edd"] = rational(r.edd);
        if (r.fiber_count)
            rep_.results["fiber_count"] = *r.fiber_count;
        else
            rep_.results["fiber_count"] = nullptr;
        if (!r.note.empty()) rep_.results["note"] = r.note;
        rep_.routes["data_locus"] = "elimination of x from the ED correspondence";
        rep_.routes["deg_DL"] = r.deg_dl_method == "slice" ? "generic linear slice" : "Hilbert series of the data locus";
        rep_.routes["sum_delta"] = "sum of the relative multidegrees delta_0..delta_d";
        rep_.routes["slice_product"] = "generic linear slice of DL lifted to the ED correspondence";
        rep_.routes["edd"] = r.ratio_enabled ? "ratio sum_delta / deg_DL (conormal misses the diagonal)"
                                             : "ratio slice_product / deg_DL (diagonal route disabled)";
        rep_.routes["fiber_count"] = "critical points over a sampled data point";
        rep_.hypotheses["diagonal_check"] = status(r.diagonal_disjoint);
        rep_.hypotheses["edd_integral"] = status(r.integral);
        rep_.hypotheses["routes_consistent"] = status(r.consistent);
        rep_.hypotheses["ed_regularity"] = !r.fiber_count ? "inconclusive" : status(r.fiber_simple);
        bool point_agrees = true;
        if (!o_.point.empty()) {
            const auto u = point_list(o_.point, k_);
            const FiberCount fc = stage(rep_, "fiber", [&] { return fiber_critical_count(E, u, o_.seed, &DL); });
            rep_.results["data_point"] = point_json(u, k_);
            rep_.results["point_fiber_count"] = fc.distinct;
            rep_.routes["point_fiber_count"] = "critical points over the user data point";
            point_agrees = r.integral && mpz_class(static_cast<unsigned long>(fc.distinct)) == r.edd.get_num();
            rep_.hypotheses["point_fiber_agrees"] = status(point_agrees);
            if (!r.fiber_count) rep_.hypotheses["ed_regularity"] = status(fc.simple());
        }
        return r.consistent && r.diagonal_disjoint && point_agrees ? kOk : kHypothesis;
    }

    int edd_affine(const EDProblem<F>& E, const Ideal<F>& I, const std::optional<Parametrization<F>>& z_param) {
        (void)I;
        const Ideal<F> DL = stage(rep_, "data_locus", [&] { return E.data_locus(o_.seed, o_.exact); });
        const DimDegree dd = E.pair().dim_degree(DL);
        rep_.results["data_locus"] = render_ideal(DL);
        rep_.results["data_locus_dim_degree"] = dim_degree(dd);
        rep_.results["expected_data_locus_krull_dim"] = E.expected_data_locus_dim();
        rep_.routes["data_locus"] = "elimination of x from the ED correspondence";
        std::optional<std::vector<typename F::Element>> u;
        std::string how;
        if (!o_.point.empty()) {
            u = point_list(o_.point, k_);
            how = "user data point";
        } else if (z_param) {
            u = sample_data_point_param(E, *z_param, o_.seed);
            how = "random point of the parametrized Z plus a normal vector";
        } else if ((u = sample_linear_data_point(DL, o_.seed))) {
            how = "random point of the linear data locus";
        } else if ((u = sample_hypersurface_data_point(DL, o_.seed))) {
            how = "random point of the data hypersurface, solved for a linear variable";
        } else if constexpr (std::is_same_v<F, PrimeField>) {
            if ((u = sample_data_point_prime(E, o_.seed))) how = "prime-field point of Z plus a normal vector";
        }
        const mpz_class bound = upper_bound(E.pair());
        rep_.results["product_upper_bound"] = big(bound);
        rep_.routes["product_upper_bound"] = "deg(Z) times the complete-intersection sum over the top generator degrees";
        if (!u) {
            rep_.results["edd"] = nullptr;
            rep_.results["note"] = "no data point could be sampled; pass --point or use a prime field";
            rep_.hypotheses["ed_regularity"] = "inconclusive";
            return kHypothesis;
        }
        const FiberCount fc = stage(rep_, "fiber", [&] { return fiber_critical_count(E, *u, o_.seed, &DL); });
        rep_.results["data_point"] = point_json(*u, k_);
        rep_.results["fiber_count"] = fc.distinct;
        rep_.results["fiber_length"] = fc.length;
        rep_.results["edd"] = fc.distinct;
        rep_.results["product"] = big(dd.degree * static_cast<unsigned long>(fc.distinct));
        rep_.routes["data_point"] = how;
        rep_.routes["edd"] = "critical points over one data point of the data locus";
        rep_.hypotheses["ed_regularity"] = status(fc.simple());
        rep_.hypotheses["data_locus_dimension"] = status(dd.krull_dim == E.expected_data_locus_dim());
        return kOk;
    }

    // Reported only: the inequality is not asserted.
    mpz_class upper_bound(const VarietyPair<F>& pair) const {
        std::vector<long> degs;
        for (const auto& g : pair.X().generators()) degs.push_back(g.total_degree());
        std::sort(degs.rbegin(), degs.rend());
        degs.resize(std::min(degs.size(), pair.codim()));
        return ci_conditional_degree(pair.deg_z(), pair.dim_z(), degs);
    }

    int data_locus() {
        const auto pair = load();
        Ideal<F> DL = Ideal<F>::zero(ring());
        std::optional<int> expected;
        if (o_.joint) {
            const JointCorrespondence<F> J(pair);
            DL = stage(rep_, "data_locus", [&] { return J.data_locus(o_.seed); });
            rep_.routes["data_locus"] = "projection of the joint conormal and ED correspondence";
        } else {
            const EDProblem<F> E(pair);
            expected = E.expected_data_locus_dim();
            DL = stage(rep_, "data_locus", [&] { return E.data_locus(o_.seed, o_.exact); });
            rep_.routes["data_locus"] = "elimination of x from the ED correspondence";
        }
        const DimDegree dd = pair.dim_degree(DL);
        rep_.results["ring"] = DL.ring()->names();
        rep_.results["data_locus"] = render_ideal(DL);
        rep_.results["dim_degree"] = dim_degree(dd);
        if (expected) {
            rep_.results["expected_krull_dim"] = *expected;
            rep_.hypotheses["ed_regularity"] = dd.krull_dim == *expected ? "pass" : "inconclusive";
        }
        if (!o_.members.empty()) {
            json members = json::object();
            for (const auto& m : o_.members) {
                const auto g = parse_polynomial(m, DL.ring());
                members[m] = stage(rep_, "membership", [&] { return radical_contains(DL, g); });
            }
            rep_.results["members"] = members;
            rep_.routes["members"] = "radical membership in the data locus ideal";
        }
        return kOk;
    }

    const Options& o_;
    const IdealFile& file_;
    Report& rep_;
    F k_;
};

DeterminantalFlavor flavor_of(const std::string& s) {
    if (s == "general") return DeterminantalFlavor::General;
    if (s == "symmetric") return DeterminantalFlavor::Symmetric;
    if (s == "skew") return DeterminantalFlavor::SkewSymmetric;
    throw InputError("flavor must be general, symmetric or skew");
}

int formulas(const Options& o, Report& rep) {
    rep.head["kind"] = o.kind;
    json& res = rep.results;
    if (o.kind == "determinantal") {
        DeterminantalSpec s{o.M, o.N, o.r, flavor_of(o.flavor)};
        const auto inv = stage(rep, "formula", [&] { return determinantal_invariants(s); });
        res["ambient_dim"] = big(inv.ambient_dim);
        res["dim"] = big(inv.dim);
        res["codim"] = big(inv.codim);
        res["degree"] = big(inv.degree);
        res["defect"] = big(inv.defect);
        res["effective_r"] = inv.effective_r;
        res["odd_skew"] = inv.odd_skew;
        rep.routes["formula"] = std::string("closed forms for ") + to_string(s.flavor) + " determinantal varieties";
        if (o.l1 || o.l2) {
            if (!o.l1 || !o.l2) throw InputError("--l1 and --l2 go together");
            const auto rd = determinantal_relative_defect(s, *o.l1, *o.l2);
            json j = json::object();
            j["empty"] = rd.empty;
            j["def_rel"] = big(rd.def_rel);
            j["codim_rel"] = big(rd.codim_rel);
            j["full"] = rd.full;
            res["relative"] = j;
        }
    } else if (o.kind == "kalman") {
        res["value"] = big(kalman_degree(long_list(o.nvec, "--n-vec"), long_list(o.delta, "--delta")));
        rep.routes["formula"] = "product of Kalman factors";
    } else if (o.kind == "ci-degree") {
        res["value"] = big(ci_conditional_degree(integer(o.deg_z, "--deg-z"), o.d, long_list(o.degrees, "--degrees")));
        rep.routes["formula"] = "deg(Z) sum over i_1+..+i_s <= d of prod (d_k-1)^(i_k)";
    } else if (o.kind == "chern") {
        const auto deltas = chern_to_multidegrees(o.n, integer_list(o.chern, "--chern"));
        json v = json::array();
        for (const auto& x : deltas) v.push_back(big(x));
        res["values"] = v;
        res["alpha"] = json::array();
        for (long k = 0; k <= o.n; ++k) res["alpha"].push_back(big(alpha_k(o.n, o.e, k)));
        res["ci_chern_degree"] = big(ci_chern_degree(integer(o.deg_y, "--deg-y"), o.n, o.e, integer_list(o.chern, "--chern")));
        rep.routes["formula"] = "Chern degrees to multidegrees";
    } else if (o.kind == "cor62") {
        const auto r = cor62_degree(integer(o.deg_y, "--deg-y"), o.c, o.def, integer_list(o.delta, "--delta"));
        res["value"] = big(r.value);
        res["degenerate"] = r.degenerate;
        rep.routes["formula"] = "deg(Y) sum_{i >= max(def, c)} delta_i";
    } else {
        throw InputError("formulas kind must be determinantal, kalman, ci-degree, chern or cor62");
    }
    return kOk;
}

int verify_suite(const Options& o, Report& rep, bool text) {
    const auto list = o.seed_given ? acceptance::criteria(o.seed) : acceptance::criteria();
    json out = json::array();
    int failed = 0;
    for (const auto& cr : list) {
        const auto r = acceptance::run(cr);
        if (!r.pass) ++failed;
        if (text) std::cout << acceptance::format_line(r) << std::endl;
        json j = json::object();
        j["id"] = r.id;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        j["budget_seconds"] = r.budget_seconds;
        out.push_back(j);
        rep.timing["criterion_" + std::to_string(r.id)] = r.seconds * 1000.0;
    }
    rep.results["criteria"] = out;
    rep.results["failed"] = failed;
    rep.results["all_passed"] = failed == 0;
    return failed == 0 ? kOk : kSuiteFailed;
}

// Text rendering. Multidegree objects become a two-row table.
void text_table(std::ostream& os, const std::string& key, const json& m) {
    os << key << " (N=" << m["N"].get<std::size_t>() << ", n=" << m["n"].get<int>() << ", d=" << m["d"].get<int>()
       << ")\n";
    const auto& offs = m["offsets"];
    if (offs.empty()) {
        os << "  all zero\n";
        return;
    }
    const std::size_t first = offs[0].get<std::size_t>();
    const auto& vals = m["values"];
    std::vector<std::string> head{"i"}, row{"delta_i"};
    for (std::size_t i = 0; i < vals.size(); ++i) {
        head.push_back(std::to_string(first + i));
        row.push_back(std::to_string(vals[i].get<std::size_t>()));
    }
    std::vector<std::size_t> width(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) width[i] = std::max(head[i].size(), row[i].size());
    for (const auto* line : {&head, &row}) {
        os << " ";
        for (std::size_t i = 0; i < line->size(); ++i) {
            const std::string& cell = (*line)[i];
            os << ' ' << std::string(width[i] - cell.size(), ' ') << cell;
            if (i == 0) os << " |";
        }
        os << '\n';
    }
}

std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void text_value(std::ostream& os, const std::string& indent, const std::string& key, const json& v) {
    if (key == "multidegrees" && v.is_object() && v.contains("values")) {
        text_table(os, indent + key, v);
    } else if (v.is_array() && !v.empty() && v[0].is_string()) {
        os << indent << key << ":\n";
        for (const auto& s : v) os << indent << "  " << s.get<std::string>() << '\n';
    } else if (v.is_object()) {
        os << indent << key << ":\n";
        for (const auto& [k, x] : v.items()) text_value(os, indent + "  ", k, x);
    } else {
        os << indent << key << ": " << scalar(v) << '\n';
    }
}

std::string render_text(const json& doc) {
    std::ostringstream os;
    for (const auto& [k, v] : doc.items()) {
        if (k == "results" || k == "routes" || k == "hypotheses" || k == "timing_ms" || k == "failure") continue;
        if (k == "inputs") {
            for (const auto& in : v) os << "input: " << scalar(in["path"]) << " (" << scalar(in["hash"]) << ")\n";
            continue;
        }
        os << k << ": " << scalar(v) << '\n';
    }
    for (const char* section : {"results", "routes", "hypotheses", "failure", "timing_ms"}) {
        if (!doc.contains(section) || doc[section].is_null() || doc[section].empty()) continue;
        os << '[' << section << "]\n";
        for (const auto& [k, v] : doc[section].items()) text_value(os, "", k, v);
    }
    return os.str();
}

void add_input(Report& rep, const std::string& path) {
    json j = json::object();
    j["path"] = path;
    j["hash"] = content_hash(detail::read_text(path));
    rep.head["inputs"].push_back(j);
}

int dispatch(const Options& o, Report& rep) {
    rep.head["schema"] = 1;
    rep.head["command"] = o.command;
    rep.head["inputs"] = json::array();
    rep.head["seed"] = o.seed;
    if (o.max_pairs || o.max_degree || o.max_seconds > 0) {
        json caps = json::object();
        caps["max_pairs"] = o.max_pairs;
        caps["max_degree"] = o.max_degree;
        caps["max_seconds"] = o.max_seconds;
        rep.head["limits"] = caps;
    }
    if (o.command == "formulas") return formulas(o, rep);
    if (o.command == "verify-suite") return verify_suite(o, rep, o.format == "text");
    if (o.input.empty()) throw InputError("--input is required");
    add_input(rep, o.input);
    if (!o.param_phi.empty()) {
        add_input(rep, o.param_phi);
        add_input(rep, o.param_psi);
    }
    const IdealFile file = stage(rep, "parse", [&] { return read_ideal_file(o.input); });
    const FieldSpec fs = o.field.empty() ? file.field : parse_field_spec(o.field);
    rep.head["field"] = fs.to_string();
    if (fs.prime) return Runner<PrimeField>(o, file, fs, rep).run();
    return Runner<RationalField>(o, file, fs, rep).run();
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "master seed for random slices and points")->default_val(0);
    sub->add_option("--jobs", o.jobs, "parallel slice jobs")->check(CLI::PositiveNumber);
    sub->add_option("--max-pairs", o.max_pairs, "cap on critical pairs per Groebner run");
    sub->add_option("--max-degree", o.max_degree, "cap on S-polynomial degree");
    sub->add_option("--max-seconds", o.max_seconds, "wall-clock cap per Groebner run");
    sub->add_option("--report", o.report, "write the JSON report to this path");
    sub->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("--no-timing", o.no_timing, "omit timing fields");
}

void add_input_options(CLI::App* sub, Options& o) {
    sub->add_option("--input,-i", o.input, "ideal or pair file")->required()->check(CLI::ExistingFile);
    sub->add_option("--field", o.field_words, "override the field: QQ, F <p> or F<p>")->expected(1, 2);
}

void add_pair_options(CLI::App* sub, Options& o) {
    add_input_options(sub, o);
    sub->add_flag("--projective", o.projective, "treat the pair as cones in P^N");
    sub->add_flag("--affine", o.affine, "treat the pair as affine");
    sub->add_flag("--exact", o.exact, "saturate by the full singular ideal instead of a random element");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"reltan: relative tangency and conditional ED invariants"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* help;
        int kind;  // 0 plain ideal, 1 pair, 2 none
    };
    const Cmd cmds[] = {
        {"gb", "reduced Groebner basis", 0},
        {"eliminate", "eliminate variables", 0},
        {"saturate", "saturate [I] by [J]", 0},
        {"dim-degree", "dimension and degree", 0},
        {"conormal", "relative conormal ideal", 1},
        {"dual", "relative dual ideal", 1},
        {"multidegrees", "relative multidegrees", 1},
        {"contact", "contact locus of a hyperplane", 1},
        {"defects", "dual defects and biduality checks", 1},
        {"edd", "conditional ED degree", 1},
        {"data-locus", "ED data locus", 1},
        {"formulas", "closed-form degree formulas", 2},
        {"verify-suite", "run the acceptance battery", 2},
    };
    std::vector<std::string> param;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, o);
        if (c.kind == 0) add_input_options(sub, o);
        if (c.kind == 1) add_pair_options(sub, o);
        const std::string name = c.name;
        if (name == "gb") sub->add_option("--order", o.order, "grevlex, lex or block:k");
        if (name == "eliminate") sub->add_option("--vars", o.vars, "comma-separated variables to eliminate")->required();
        if (name == "contact") sub->add_option("--point", o.point, "hyperplane coordinates, comma-separated")->required();
        if (name == "edd") {
            sub->add_option("--param", param, "parametrization files phi and psi")->expected(2);
            sub->add_option("--point", o.point, "data point for the fiber count, comma-separated");
        }
        if (name == "data-locus") {
            sub->add_option("--member", o.members, "test radical membership of these polynomials");
            sub->add_flag("--joint", o.joint, "use the joint conormal / ED correspondence");
        }
        if (name == "formulas") {
            sub->add_option("kind", o.kind, "determinantal, kalman, ci-degree, chern or cor62")->required();
            sub->add_option("--M", o.M);
            sub->add_option("--N", o.N);
            sub->add_option("--r", o.r);
            sub->add_option("--flavor", o.flavor, "general, symmetric or skew");
            sub->add_option("--l1", o.l1);
            sub->add_option("--l2", o.l2);
            sub->add_option("--n-vec", o.nvec, "Kalman sizes, comma-separated");
            sub->add_option("--delta", o.delta, "comma-separated integers");
            sub->add_option("--deg-z", o.deg_z);
            sub->add_option("--deg-y", o.deg_y);
            sub->add_option("--d", o.d);
            sub->add_option("--degrees", o.degrees, "comma-separated generator degrees");
            sub->add_option("--n", o.n);
            sub->add_option("--e", o.e);
            sub->add_option("--c", o.c);
            sub->add_option("--def", o.def);
            sub->add_option("--chern", o.chern, "degrees of c_0..c_n, comma-separated");
        }
        sub->callback([&o, &param, sub, name] {
            o.command = name;
            o.seed_given = sub->count("--seed") > 0;
            for (const auto& w : o.field_words) o.field += (o.field.empty() ? "" : " ") + w;
            if (param.size() == 2) {
                o.param_phi = param[0];
                o.param_psi = param[1];
            }
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    Report rep;
    int code = kOk;
    auto fail = [&](int c, const char* kind, const std::exception& e) {
        json f = json::object();
        f["stage"] = rep.stage;
        f["kind"] = kind;
        f["message"] = e.what();
        rep.failure = f;
        std::cerr << "reltan: " << kind << " in stage " << rep.stage << ": " << e.what() << '\n';
        return c;
    };
    {
        const GroebnerLimits limits{o.max_pairs, o.max_degree, o.max_seconds};
        LimitScope scope(limits);
        try {
            code = dispatch(o, rep);
        } catch (const EmptyRelativeDual&) {
            rep.results["status"] = kEmptyMarker;
            rep.hypotheses["z_not_in_singular_locus"] = "fail";
            code = kOk;
        } catch (const HypothesisFailure& e) {
            code = fail(kHypothesis, "hypothesis failure", e);
        } catch (const ResourceExhausted& e) {
            code = fail(kResource, "resource exhausted", e);
        } catch (const InputError& e) {
            code = fail(kInput, "input error", e);
        } catch (const ExponentOverflow& e) {
            code = fail(kInput, "input error", e);
        } catch (const Error& e) {
            code = fail(kHypothesis, "error", e);
        }
    }
    rep.head["exit_code"] = code;

    const json doc = rep.document(!o.no_timing);
    if (!o.report.empty()) {
        std::ofstream f(o.report, std::ios::binary);
        if (!f) {
            std::cerr << "reltan: cannot write " << o.report << '\n';
            return kInput;
        }
        f << doc.dump(2) << '\n';
    }
    if (o.format == "json")
        std::cout << doc.dump(2) << '\n';
    else if (o.command != "verify-suite")
        std::cout << render_text(doc);
    else
        std::cout << (code == kOk ? "acceptance: all criteria passed\n" : "acceptance: some criteria failed\n");
    return code;
}
