#include "lndkit/cli/report.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <mutex>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include "lndkit/actions.hpp"
#include "lndkit/fibergeo.hpp"
#include "lndkit/ideals.hpp"

namespace lndkit::cli {

namespace {

// Parameter access for one task, with manifest positions in every error.
class TaskArgs {
public:
    TaskArgs(const Manifest& m, const TaskSpec& t) : m_(m), t_(t) {}

    const Ring& ring() const { return m_.require_ring(); }
    const RunConfig& config() const { return m_.config; }
    bool has(std::string_view key) const { return t_.has(key); }

    const Param& require(std::string_view key) const {
        const Param* p = t_.find(key);
        if (!p) throw ManifestError("task '" + t_.kind + "' needs '" + std::string(key) + "'", t_.line, 0);
        return *p;
    }

    Polynomial poly(std::string_view key, const Ring& r) const { return parse_piece(require(key), r, require(key).value, 0); }

    Polynomial poly(std::string_view key) const { return poly(key, ring()); }

    std::vector<Polynomial> polys(std::string_view key, const Ring& r) const {
        std::vector<Polynomial> out;
        const Param* p = t_.find(key);
        if (!p) return out;
        for (auto& [piece, off] : split_list(p->value, ',')) {
            if (piece.empty()) throw ManifestError("empty entry in '" + std::string(key) + "'", p->line, p->column + off);
            out.push_back(parse_piece(*p, r, piece, off));
        }
        return out;
    }

    std::vector<Polynomial> polys(std::string_view key) const { return polys(key, ring()); }

    // "a, b; c, d" as a list of tuples.
    std::vector<std::vector<Polynomial>> tuples(std::string_view key) const {
        std::vector<std::vector<Polynomial>> out;
        const Param& p = require(key);
        for (auto& [group, goff] : split_list(p.value, ';')) {
            std::vector<Polynomial> tuple;
            for (auto& [piece, off] : split_list(group, ','))
                tuple.push_back(parse_piece(p, ring(), piece, goff + off));
            out.push_back(std::move(tuple));
        }
        return out;
    }

    bool flag(std::string_view key, bool fallback) const {
        const Param* p = t_.find(key);
        if (!p) return fallback;
        if (p->value == "true" || p->value == "yes") return true;
        if (p->value == "false" || p->value == "no") return false;
        throw ManifestError("'" + std::string(key) + "' must be true or false", p->line, p->column);
    }

    unsigned count(std::string_view key, unsigned fallback) const {
        const Param* p = t_.find(key);
        if (!p) return fallback;
        static const std::regex digits("[0-9]{1,9}");
        if (!std::regex_match(p->value, digits))
            throw ManifestError("'" + std::string(key) + "' must be a non-negative integer", p->line, p->column);
        return static_cast<unsigned>(std::stoul(p->value));
    }

    std::vector<Rational> rationals(std::string_view key) const {
        static const std::regex number("-?[0-9]+(/[0-9]+)?");
        const Param& p = require(key);
        std::vector<Rational> out;
        for (auto& [piece, off] : split_list(p.value, ',')) {
            if (!std::regex_match(piece, number))
                throw ManifestError("expected a rational number, got '" + piece + "'", p.line, p.column + off);
            Rational q;
            q.set_str(piece, 10);
            if (q.get_den() == 0) throw ManifestError("zero denominator", p.line, p.column + off);
            q.canonicalize();
            out.push_back(q);
        }
        return out;
    }

    std::vector<std::string> derivation_names() const {
        if (const Param* p = t_.find("derivations")) {
            std::vector<std::string> names;
            for (auto& [n, off] : split_list(p->value, ',')) names.push_back(n);
            return names;
        }
        if (m_.derivations.size() != 1) throw ManifestError("task needs 'derivations'", t_.line, 0);
        return {m_.derivations.front().first};
    }

    Distribution distribution() const {
        std::vector<Derivation> ds;
        for (const auto& n : derivation_names()) {
            const Derivation* d = m_.find_derivation(n);
            if (!d) throw ManifestError("undefined derivation '" + n + "'", t_.line, 0);
            ds.push_back(*d);
        }
        if (ds.empty()) throw ManifestError("empty derivation list", t_.line, 0);
        return Distribution::certify(std::move(ds), config().lnd.nilpotency_bound);
    }

    const PolyMap& map() const {
        if (const Param* p = t_.find("map")) {
            const PolyMap* f = m_.find_map(p->value);
            if (!f) throw ManifestError("undefined map '" + p->value + "'", p->line, p->column);
            return *f;
        }
        if (m_.maps.size() != 1) throw ManifestError("task needs 'map'", t_.line, 0);
        return m_.maps.front().second;
    }

private:
    Polynomial parse_piece(const Param& p, const Ring& r, std::string_view text, std::size_t off) const {
        try {
            return parse(text, r);
        } catch (const ParseError& e) {
            throw ManifestError(e.message(), p.line, p.column + off + e.position());
        } catch (const InputError& e) {
            throw ManifestError(e.what(), p.line, p.column + off);
        }
    }

    const Manifest& m_;
    const TaskSpec& t_;
};

json opt_poly(const std::optional<Polynomial>& p) { return p ? poly_json(*p) : json(nullptr); }

json degree_json(std::optional<unsigned> d) { return d ? json(*d) : json("-inf"); }

json rationals_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(lndkit::to_string(q));
    return out;
}

json names_json(const Ring& r, const std::vector<std::size_t>& idx) {
    json out = json::array();
    for (auto i : idx) out.push_back(r->name(i));
    return out;
}

json nilpotency_json(const Ring& r, const NilpotencyReport& n) {
    json j;
    j["locally_nilpotent"] = n.nilpotent;
    j["orders"] = n.nilpotent ? json(n.orders) : json(nullptr);
    if (n.witness_variable)
        j["witness"] = {{"variable", r->name(*n.witness_variable)}, {"iterate", opt_poly(n.witness)}};
    else
        j["witness"] = nullptr;
    return j;
}

json condition_h_json(const ConditionHReport& h) {
    json probes = json::array();
    for (const auto& p : h.probes)
        probes.push_back({{"probe", poly_json(p.probe)}, {"invariant", p.invariant}, {"preimage", opt_poly(p.preimage)}});
    return {
        {"dimensions_ok", h.dimensions_ok},
        {"component_invariant", h.component_invariant},
        {"algebraically_independent", h.algebraically_independent},
        {"nonzero_minor", opt_poly(h.nonzero_minor)},
        {"probes", probes},
        {"generation_asserted", h.generation_asserted},
        {"passed", h.passed()},
    };
}

json e_factor_json(const EFactorResult& e) {
    json probes = json::array();
    for (const auto& p : e.probes)
        probes.push_back({{"R", polys_json(p.R)}, {"bracket", poly_json(p.bracket)}, {"J", poly_json(p.J)},
                          {"consistent", p.consistent}});
    return {
        {"E", poly_json(e.E)},
        {"used_probe", e.used_probe},
        {"probes_consistent", e.probes_consistent},
        {"invariant", e.invariant},
        {"consistent_nonzero_probes", e.consistent_nonzero_probes()},
        {"probes", probes},
    };
}

json slices_json(const SliceSearch& s) {
    json diags = json::array();
    for (const auto& d : s.diagnostics)
        diags.push_back({{"k", d.k},
                         {"found", d.found},
                         {"seed", opt_poly(d.seed)},
                         {"order", d.order},
                         {"slice", opt_poly(d.slice)},
                         {"multiplier", opt_poly(d.multiplier)},
                         {"note", d.note}});
    json j;
    j["found"] = s.system.has_value();
    j["slices"] = s.system ? polys_json(s.system->slices) : json(nullptr);
    j["multipliers"] = s.system ? polys_json(s.system->multipliers) : json(nullptr);
    j["diagnostics"] = diags;
    return j;
}

// Compares a computed reduced basis against the ideal an expectation names.
json ideal_expectation(const std::vector<Polynomial>& expected, const std::vector<Polynomial>& basis,
                       const GroebnerConfig& cfg) {
    std::vector<Polynomial> exp_basis;
    if (!expected.empty()) exp_basis = groebner(expected, MonomialOrder::grevlex(), cfg).generators();
    GroebnerBasis computed = groebner(basis, MonomialOrder::grevlex(), cfg);
    bool matches = exp_basis == computed.generators();
    return {{"expected", polys_json(expected)}, {"expected_basis", polys_json(exp_basis)}, {"matches", matches}};
}

json basis_dimension(const GroebnerBasis& G) {
    int d = dimension(G);
    return d < 0 ? json(nullptr) : json(d);
}

json task_check_lnd(const TaskArgs& a, std::string& stage) {
    stage = "certify";
    Distribution D = a.distribution();
    const Ring& r = D.ring();
    json ds = json::array();
    auto names = a.derivation_names();
    for (std::size_t i = 0; i < D.size(); ++i) {
        json d = nilpotency_json(r, D.nilpotency()[i]);
        d["name"] = names[i];
        d["images"] = polys_json(D[i].images());
        ds.push_back(std::move(d));
    }
    json j;
    j["variables"] = r->names();
    j["derivations"] = ds;
    j["commuting"] = D.certified_commuting();
    j["locally_nilpotent"] = D.certified_lnd();
    j["certified"] = D.certified();
    if (auto bad = D.non_commuting_pair())
        j["non_commuting_pair"] = {names[bad->first], names[bad->second]};
    else
        j["non_commuting_pair"] = nullptr;
    return j;
}

json task_invariants(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    auto ps = a.polys("polys");
    if (ps.empty()) a.require("polys");
    stage = "certify";
    Distribution D = a.distribution();
    stage = "invariants";
    json out = json::array();
    bool all = true;
    for (const auto& p : ps) {
        bool inv = D.is_invariant(p);
        all = all && inv;
        json images = json::array();
        for (const auto& d : D.derivations()) images.push_back(poly_json(d.apply(p)));
        json e{{"poly", poly_json(p)}, {"invariant", inv}, {"images", images}};
        e["degree"] = D.certified() ? degree_json(degree_rel(D, p)) : json(nullptr);
        out.push_back(std::move(e));
    }
    return {{"polys", out}, {"all_invariant", all}, {"certified", D.certified()}};
}

json task_exp(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    Polynomial p = a.poly("poly");
    stage = "certify";
    Distribution D = a.distribution();
    stage = "exp";
    Polynomial e = exp(D, p);
    return {{"poly", poly_json(p)},
            {"parameters", parameter_names(D.ring(), D.size())},
            {"series", series_string(D, e)},
            {"canonical", poly_json(e)}};
}

json task_degree(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    Polynomial p = a.poly("poly");
    stage = "certify";
    Distribution D = a.distribution();
    stage = "degree";
    return {{"poly", poly_json(p)}, {"degree", degree_json(degree_rel(D, p))}};
}

json task_e_factor(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    std::vector<std::vector<Polynomial>> probes;
    if (a.has("probes")) probes = a.tuples("probes");
    stage = "certify";
    Distribution D = a.distribution();
    stage = "e-factor";
    EFactorResult e = probes.empty() ? e_factor(D, F, a.config().lnd) : e_factor(D, F, probes);
    return e_factor_json(e);
}

json task_slices(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto extra = a.polys("candidates");
    stage = "certify";
    Distribution D = a.distribution();
    stage = "slices";
    auto pool = default_slice_pool(D.ring(), a.config().lnd.slice_pool_degree, extra);
    return slices_json(diagonal_slices(D, F, pool, a.config().lnd));
}

json task_condition_h(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto probes = a.polys("invariant_probes");
    stage = "certify";
    ActionSpec spec{a.distribution(), F, a.flag("condition_h", true)};
    stage = "condition-h";
    return condition_h_json(check_condition_H_partial(spec, probes, a.config().lnd.groebner));
}

json task_trivialize(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto extra = a.polys("candidates");
    stage = "certify";
    ActionSpec spec{a.distribution(), F, a.flag("condition_h", true)};
    stage = "trivialize";
    TrivializeResult t = trivialize(spec, extra, a.config().lnd);

    json j;
    j["success"] = t.success;
    j["stage"] = stage_name(t.stage);
    j["diagnostic"] = t.diagnostic;
    j["condition_h"] = condition_h_json(t.condition_h);
    j["E"] = t.e_factor ? poly_json(t.e_factor->E) : json(nullptr);
    j["e_factor"] = t.e_factor ? e_factor_json(*t.e_factor) : json(nullptr);
    j["slices"] = t.slices ? slices_json(*t.slices) : json(nullptr);
    json divs = json::array();
    for (const auto& d : t.divisions) divs.push_back({{"A", poly_json(d.A)}, {"S", poly_json(d.S)}});
    j["divisions"] = divs;
    j["failed_division"] = t.failed_division ? json(*t.failed_division) : json(nullptr);
    j["identity_matrix"] = t.identity_matrix;
    j["G"] = polys_json(t.G);
    bool auto_ok = t.automorphism && t.automorphism->automorphism;
    j["inverse"] = auto_ok ? polys_json(t.automorphism->automorphism->inverse) : json(nullptr);
    j["jacobian"] = t.automorphism ? poly_json(t.automorphism->jacobian) : json(nullptr);
    j["automorphism_failure"] =
        t.automorphism && !t.automorphism->failure.empty() ? json(t.automorphism->failure) : json(nullptr);
    j["conjugation"] = t.conjugation ? json(t.conjugation->holds) : json(nullptr);

    std::size_t p = spec.D.size();
    json v;
    v["condition_h"] = t.condition_h.passed();
    v["e_factor"] = t.e_factor && t.e_factor->probes_consistent;
    v["slices"] = t.slices && t.slices->system.has_value();
    v["e_divide"] = t.divisions.size() == p && !t.failed_division;
    v["identity_matrix"] = t.identity_matrix;
    v["automorphism"] = auto_ok;
    v["conjugation"] = t.conjugation && t.conjugation->holds;
    j["verification"] = v;
    return j;
}

json task_nl_locus(const TaskArgs& a, std::string& stage) {
    stage = "certify";
    Distribution D = a.distribution();
    stage = "nl-locus";
    auto minors = nl_locus_ideal(D);
    GroebnerBasis G = groebner(minors, MonomialOrder::grevlex(), a.config().lnd.groebner);
    return {{"minors", polys_json(minors)}, {"basis", polys_json(G.generators())}, {"dimension", basis_dimension(G)}};
}

json task_e_divide(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    Polynomial R = a.poly("poly");
    Polynomial P = a.poly("P", F.tags());
    stage = "e-divide";
    auto d = e_divide(R, P, F, a.config().lnd.groebner);
    json j;
    j["found"] = d.has_value();
    j["A"] = d ? poly_json(d->A) : json(nullptr);
    j["S"] = d ? poly_json(d->S) : json(nullptr);
    j["reconstructs"] = d ? json(F.pullback(d->A) + F.pullback(P) * d->S == R) : json(nullptr);
    return j;
}

json task_ar_decompose(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    const Ring& r = F.source();
    auto omega_coeffs = a.polys("omega");
    a.require("omega");
    if (omega_coeffs.size() != r->size())
        throw ManifestError("omega needs one coefficient per variable", a.require("omega").line,
                            a.require("omega").column);
    ARCertificate c{DiffForm::one_form(r, omega_coeffs), a.poly("P", F.tags()), a.poly("poly"), a.polys("a")};
    unsigned bound = a.count("degree_bound", a.config().derham_degree_bound);

    stage = "certificate-check";
    ARCheck chk = ar_certificate_check(c, F);
    json check{{"shapes_ok", chk.shapes_ok},
               {"identity_holds", chk.identity_holds},
               {"wedge_condition", chk.wedge_condition},
               {"valid", chk.valid()}};
    if (!chk.valid()) {
        std::string why = !chk.shapes_ok        ? "shapes do not match the map"
                          : !chk.identity_holds ? "P(F) omega != dR + sum a_i df_i"
                                                : "dR ^ omega_F is not divisible by P(F)";
        throw InputError("invalid AR certificate: " + why);
    }

    stage = "ar-decompose";
    ARDecomposition d = ar_exact_decompose(c, F, bound, a.config().lnd.groebner);
    json j;
    j["certificate"] = check;
    j["status"] = status_name(d.status);
    j["A"] = opt_poly(d.A);
    j["S"] = opt_poly(d.S);
    j["c"] = polys_json(d.c);
    j["omega0"] = d.omega0 ? form_json(*d.omega0) : json(nullptr);
    j["d"] = d.d ? polys_json(*d.d) : json(nullptr);
    j["degree_bound"] = d.degree_bound;
    if (d.d && d.S) {
        DiffForm rebuilt = differential(*d.S);
        for (std::size_t k = 0; k < F.size(); ++k) rebuilt += (*d.d)[k] * differential(F[k]);
        j["reconstructs"] = rebuilt == c.omega;
    } else {
        j["reconstructs"] = nullptr;
    }
    return j;
}

json task_fiber(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto y = a.rationals("point");
    stage = "fiber";
    FiberProbe f = fiber_probe(F, y, a.config().lnd.groebner);
    const Ring& r = F.source();
    json j;
    j["point"] = rationals_json(f.point);
    j["empty"] = f.empty;
    j["dimension"] = f.empty ? json(nullptr) : json(f.dimension);
    j["ideal"] = polys_json(f.ideal);
    j["connectivity"] = connectivity_name(f.connectivity);
    json cert = nullptr;
    if (f.connectivity == Connectivity::ConnectedCertified && !f.empty)
        cert = {{"dependent", names_json(r, f.dependent)}, {"graph", polys_json(f.graph)}};
    else if (f.connectivity == Connectivity::DisconnectedCertified)
        cert = {{"univariate", opt_poly(f.univariate)}, {"split", polys_json(f.split)}};
    j["certificate"] = cert;
    if (a.has("expect_empty")) {
        bool expected = a.flag("expect_empty", false);
        j["expectation"] = {{"expect_empty", expected}, {"matches", expected == f.empty}};
    }
    return j;
}

json task_blowdown(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto user = a.polys("h");
    bool asserted = a.flag("irreducible", true);
    stage = "blowdown";
    auto cands = blowdown_candidates(F, user);
    json checks = json::array();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        auto b = blowing_down_check(F, cands[i], i < user.size() && asserted, a.config().lnd.groebner);
        checks.push_back({{"h", poly_json(b.h)},
                          {"source", i < user.size() ? "user" : "H"},
                          {"blowing_down", b.blowing_down},
                          {"closure", polys_json(b.closure)},
                          {"closure_dimension", b.closure_dimension},
                          {"irreducibility_asserted", b.irreducibility_asserted}});
    }
    return {{"checks", checks}, {"H", poly_json(omega_F(F).H)}};
}

json task_primitivity(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto cands = a.polys("candidates");
    if (cands.empty()) a.require("candidates");
    stage = "primitivity";
    auto p = primitivity_probe(F, cands, a.config().lnd.groebner);
    json cs = json::array();
    for (const auto& c : p.candidates)
        cs.push_back({{"R", poly_json(c.R)},
                      {"wedge_zero", c.wedge_zero},
                      {"in_subalgebra", c.in_subalgebra ? json(*c.in_subalgebra) : json(nullptr)}});
    return {{"verdict", p.counterexample ? "counterexample" : "no-witness-found"},
            {"counterexample", opt_poly(p.counterexample)},
            {"candidates", cs}};
}

MonomialOrder parse_order(const TaskArgs& a, const Ring& r) {
    if (!a.has("order")) return MonomialOrder::grevlex();
    const Param& p = a.require("order");
    if (p.value == "grevlex") return MonomialOrder::grevlex();
    if (p.value == "lex") return MonomialOrder::lex();
    if (p.value.rfind("block:", 0) == 0) {
        std::vector<bool> front(r->size(), false);
        for (auto& [name, off] : split_list(std::string_view(p.value).substr(6), ',')) {
            auto idx = r->index_of(name);
            if (!idx) throw ManifestError("unknown variable '" + name + "' in order", p.line, p.column + 6 + off);
            front[*idx] = true;
        }
        return MonomialOrder::block(std::move(front));
    }
    throw ManifestError("order must be grevlex, lex or block:<vars>", p.line, p.column);
}

json task_groebner(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    auto gens = a.polys("polys");
    if (gens.empty()) a.require("polys");
    MonomialOrder order = parse_order(a, a.ring());
    stage = "groebner";
    GroebnerBasis G = groebner(gens, order, a.config().lnd.groebner);
    return {{"order", order.name(*a.ring())},
            {"basis", polys_json(G.generators())},
            {"unit", G.is_unit()},
            {"dimension", basis_dimension(G)}};
}

json task_singular(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto expected = a.polys("expect");
    stage = "singular";
    SingularLocus s = singular_ideal(F, a.config().lnd.groebner);
    std::size_t n = F.source()->size();
    json j;
    j["minors"] = polys_json(s.minors);
    j["basis"] = polys_json(s.basis);
    j["empty"] = s.dimension < 0;
    j["dimension"] = s.dimension < 0 ? json(nullptr) : json(s.dimension);
    j["codimension"] = s.dimension < 0 ? json(nullptr) : json(static_cast<int>(n) - s.dimension);
    j["codim1_nonsingular"] = s.codim1_nonsingular;
    if (a.has("expect")) j["expectation"] = ideal_expectation(expected, s.basis, a.config().lnd.groebner);
    return j;
}

json task_image_closure(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    auto expected = a.polys("expect", F.tags());
    stage = "image-closure";
    auto c = image_closure(F, a.config().lnd.groebner);
    json j{{"closure", polys_json(c)}, {"dominant", c.empty()}};
    if (a.has("expect")) j["expectation"] = ideal_expectation(expected, c, a.config().lnd.groebner);
    return j;
}

json task_omega(const TaskArgs& a, std::string& stage) {
    stage = "parse";
    const PolyMap& F = a.map();
    stage = "omega";
    auto w = omega_F(F);
    return {{"H", poly_json(w.H)}, {"omega", form_json(w.omega)}, {"top", form_json(w.top)}};
}

void render(std::ostringstream& out, const json& j, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto flat = [](const json& v) {
        return std::all_of(v.begin(), v.end(), [](const json& e) { return !e.is_structured(); });
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        std::string label = j.is_object() ? it.key() : "-";
        if (v.is_array() && flat(v)) {
            std::string line;
            for (const auto& e : v) line += (line.empty() ? "" : ", ") + scalar(e);
            out << pad << label << ": [" << line << "]\n";
        } else if (v.is_structured()) {
            out << pad << label << ":\n";
            render(out, v, indent + 1);
        } else {
            out << pad << label << ": " << scalar(v) << '\n';
        }
    }
}

}  // namespace

int exit_code_for(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Input: return 2;
        case ErrorCategory::ResourceExhausted: return 3;
        case ErrorCategory::InternalFault: return 4;
    }
    return 4;
}

std::string category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Input: return "input";
        case ErrorCategory::ResourceExhausted: return "resource-exhausted";
        case ErrorCategory::InternalFault: return "internal-fault";
    }
    return "internal-fault";
}

json poly_json(const Polynomial& p) { return p.to_string(); }

json polys_json(const std::vector<Polynomial>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(p.to_string());
    return out;
}

json form_json(const DiffForm& w) {
    json out = json::array();
    for (const auto& [idx, c] : w.coefficients()) out.push_back({names_json(w.ring(), idx), c.to_string()});
    return out;
}

json run_task(const Manifest& m, const TaskSpec& t, std::string& stage) {
    stage = "validate";
    validate_task(m, t);
    TaskArgs a(m, t);
    std::string kind = canonical_kind(t.kind);
    if (kind == "check-lnd") return task_check_lnd(a, stage);
    if (kind == "invariants") return task_invariants(a, stage);
    if (kind == "exp") return task_exp(a, stage);
    if (kind == "degree") return task_degree(a, stage);
    if (kind == "e-factor") return task_e_factor(a, stage);
    if (kind == "slices") return task_slices(a, stage);
    if (kind == "trivialize") return task_trivialize(a, stage);
    if (kind == "condition-h") return task_condition_h(a, stage);
    if (kind == "nl-locus") return task_nl_locus(a, stage);
    if (kind == "e-divide") return task_e_divide(a, stage);
    if (kind == "ar-decompose") return task_ar_decompose(a, stage);
    if (kind == "fiber") return task_fiber(a, stage);
    if (kind == "blowdown") return task_blowdown(a, stage);
    if (kind == "primitivity") return task_primitivity(a, stage);
    if (kind == "groebner") return task_groebner(a, stage);
    if (kind == "singular") return task_singular(a, stage);
    if (kind == "image-closure") return task_image_closure(a, stage);
    if (kind == "omega") return task_omega(a, stage);
    throw ManifestError("unknown task kind '" + t.kind + "'", t.line, 1);
}

TaskOutcome execute_task(const Manifest& m, const TaskSpec& t, std::size_t index) {
    TaskOutcome out;
    json& r = out.report;
    r["index"] = index;
    r["kind"] = canonical_kind(t.kind);
    r["name"] = t.name.empty() ? json(nullptr) : json(t.name);
    if (const Param* note = t.find("note")) r["note"] = note->value;
    std::string stage;
    auto fail = [&](ErrorCategory c, const std::string& what, const ManifestError* loc) {
        json e{{"category", category_name(c)}, {"stage", stage}, {"message", what}};
        if (loc && loc->line()) e["line"] = loc->line();
        if (loc && loc->column()) e["column"] = loc->column();
        r["status"] = "error";
        r["error"] = e;
        out.exit_code = exit_code_for(c);
    };
    try {
        r["result"] = run_task(m, t, stage);
        r["status"] = "ok";
    } catch (const ManifestError& e) {
        fail(e.category(), e.what(), &e);
    } catch (const Error& e) {
        fail(e.category(), e.what(), nullptr);
    } catch (const std::exception& e) {
        fail(ErrorCategory::InternalFault, std::string("unexpected failure: ") + e.what(), nullptr);
    }
    return out;
}

RunOutcome run_manifest(const Manifest& m, unsigned jobs, std::ostream* progress) {
    std::size_t n = m.tasks.size();
    std::vector<TaskOutcome> outcomes(n);
    std::mutex log_mutex;
    auto run_one = [&](std::size_t i) {
        outcomes[i] = execute_task(m, m.tasks[i], i);
        if (progress) {
            std::lock_guard lock(log_mutex);
            const auto& r = outcomes[i].report;
            *progress << "[" << (i + 1) << "/" << n << "] " << r["kind"].get<std::string>();
            if (!m.tasks[i].name.empty()) *progress << " (" << m.tasks[i].name << ")";
            *progress << ": " << r["status"].get<std::string>();
            if (r.contains("error")) *progress << " at stage " << r["error"]["stage"].get<std::string>() << ": "
                                               << r["error"]["message"].get<std::string>();
            *progress << '\n';
        }
    };
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(jobs, n); ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    RunOutcome out;
    for (auto& o : outcomes) {
        out.exit_code = std::max(out.exit_code, o.exit_code);
        out.reports.push_back(std::move(o.report));
    }
    return out;
}

json manifest_error_json(const std::exception& e) {
    json err{{"stage", "manifest"}, {"message", e.what()}};
    err["category"] = "internal-fault";
    if (auto* le = dynamic_cast<const Error*>(&e)) err["category"] = category_name(le->category());
    if (auto* me = dynamic_cast<const ManifestError*>(&e)) {
        if (me->line()) err["line"] = me->line();
        if (me->column()) err["column"] = me->column();
    }
    return {{"error", err}};
}

std::string render_human(const json& j) {
    std::ostringstream out;
    if (j.is_structured()) render(out, j, 0);
    else out << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    return out.str();
}

}  // namespace lndkit::cli
