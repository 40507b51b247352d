#include "lndkit/cli/app.hpp"

#include <CLI11.hpp>

#include <map>
#include <ostream>

#include "lndkit/cli/report.hpp"

namespace lndkit::cli {

namespace {

// Inline flag -> task key.
const std::vector<std::pair<std::string, std::string>>& flag_keys() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"poly", "poly"},
        {"polys", "polys"},
        {"point", "point"},
        {"multiplier", "P"},
        {"coeffs", "a"},
        {"omega", "omega"},
        {"candidates", "candidates"},
        {"probes", "probes"},
        {"invariant-probes", "invariant_probes"},
        {"order", "order"},
        {"degree-bound", "degree_bound"},
        {"expect", "expect"},
        {"expect-empty", "expect_empty"},
        {"hypersurface", "h"},
        {"irreducible", "irreducible"},
        {"condition-h", "condition_h"},
    };
    return table;
}

const std::map<std::string, std::string>& descriptions() {
    static const std::map<std::string, std::string> d = {
        {"check-lnd", "certify local nilpotency and commutation"},
        {"invariants", "check invariance of polynomials"},
        {"exp", "exponential of the distribution applied to --poly"},
        {"degree", "degree of --poly relative to the distribution"},
        {"e-factor", "the invariant E with [D] = E * J"},
        {"slices", "search for a diagonal system of rational slices"},
        {"trivialize", "run the trivialization pipeline"},
        {"condition-h", "partial checks of condition (H)"},
        {"nl-locus", "ideal of the non-free locus"},
        {"e-divide", "decompose --poly as A(F) + P(F) S"},
        {"ar-decompose", "decompose an AR certificate"},
        {"fiber", "probe the fiber over --point"},
        {"blowdown", "blowing-down checks for --h and the factors of H"},
        {"primitivity", "search --candidates for a primitivity counterexample"},
        {"groebner", "reduced Groebner basis of --polys"},
        {"singular", "singular ideal of the map"},
        {"image-closure", "ideal of the closure of the image"},
        {"omega", "H and omega_F of the map"},
    };
    return d;
}

struct OneShot {
    std::string kind;
    std::string manifest;
    std::string ring;
    std::vector<std::string> derivations;
    std::string map;
    std::map<std::string, std::string> values;  // task key -> value
    bool json_out = false;
};

void emit_error(std::ostream& out, std::ostream& err, bool json_out, const json& doc) {
    const json& e = doc["error"];
    err << "error (" << e["category"].get<std::string>() << ") at stage " << e["stage"].get<std::string>() << ": "
        << e["message"].get<std::string>() << '\n';
    if (json_out) out << doc.dump(2) << '\n';
}

int run_one_shot(const OneShot& o, std::ostream& out, std::ostream& err) {
    Manifest m;
    try {
        if (!o.manifest.empty()) m = load_manifest(o.manifest);
        m.tasks.clear();
        if (!o.ring.empty()) {
            Ring r = make_ring(parse_name_list(o.ring));
            if (m.ring && (*m.ring)->names() != r->names())
                throw InputError("--ring differs from the manifest ring");
            if (!m.ring) m.ring = r;
        }
        TaskSpec t;
        t.kind = o.kind;
        auto inline_error = [](const std::string& flag, const ManifestError& e) {
            return ManifestError("--" + flag + ": " + e.message(), 0, e.column());
        };
        if (!o.derivations.empty()) {
            std::string names;
            for (std::size_t i = 0; i < o.derivations.size(); ++i) {
                std::string name = o.derivations[i];
                if (!m.find_derivation(name)) {
                    name = "cli_d" + std::to_string(i + 1);
                    try {
                        m.derivations.emplace_back(name, parse_derivation_inline(m.require_ring(), o.derivations[i]));
                    } catch (const ManifestError& e) {
                        throw inline_error("derivation", e);
                    }
                }
                names += (names.empty() ? "" : ",") + name;
            }
            t.params.emplace_back("derivations", Param{names, 0, 0});
        }
        if (!o.map.empty()) {
            std::string name = o.map;
            if (!m.find_map(name)) {
                name = "cli_map";
                try {
                    m.maps.emplace_back(name, parse_map_inline(m.require_ring(), o.map));
                } catch (const ManifestError& e) {
                    throw inline_error("map", e);
                }
            }
            t.params.emplace_back("map", Param{name, 0, 0});
        }
        for (const auto& [k, v] : o.values) t.params.emplace_back(k, Param{v, 0, 1});
        validate_task(m, t);
        m.tasks.push_back(std::move(t));
    } catch (const std::exception& e) {
        emit_error(out, err, o.json_out, manifest_error_json(e));
        auto* le = dynamic_cast<const Error*>(&e);
        return le ? exit_code_for(le->category()) : 4;
    }

    TaskOutcome r = execute_task(m, m.tasks.front(), 0);
    if (r.report["status"] != "ok") {
        emit_error(out, err, o.json_out, json{{"error", r.report["error"]}});
        return r.exit_code;
    }
    const json& result = r.report["result"];
    if (o.json_out) out << result.dump(2) << '\n';
    else if (o.kind == "exp") out << result["series"].get<std::string>() << '\n';
    else out << render_human(result);
    return 0;
}

int run_manifest_file(const std::string& path, unsigned jobs, bool quiet, std::ostream& out, std::ostream& err) {
    Manifest m;
    try {
        m = load_manifest(path);
    } catch (const std::exception& e) {
        json doc = manifest_error_json(e);
        emit_error(out, err, true, doc);
        auto* le = dynamic_cast<const Error*>(&e);
        return le ? exit_code_for(le->category()) : 4;
    }
    RunOutcome r = run_manifest(m, jobs, quiet ? nullptr : &err);
    out << r.reports.dump(2) << '\n';
    return r.exit_code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"lndkit: locally nilpotent derivations, additive group actions and polynomial maps"};
    app.require_subcommand(1);

    std::string manifest_path;
    unsigned jobs = 1;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "execute every task of a manifest");
    run->add_option("manifest", manifest_path, "manifest file")->required();
    run->add_option("--jobs", jobs, "run up to N independent tasks concurrently")->check(CLI::Range(1u, 256u));
    run->add_flag("--quiet", quiet, "no progress lines on stderr");

    std::vector<std::unique_ptr<OneShot>> shots;
    for (const auto& kind : task_kinds()) {
        auto shot = std::make_unique<OneShot>();
        shot->kind = kind;
        auto* sub = app.add_subcommand(kind, descriptions().at(kind));
        sub->add_option("--manifest", shot->manifest, "take ring, derivations, maps and config from a manifest");
        sub->add_flag("--json", shot->json_out, "print the JSON result");
        const auto& keys = task_keys(kind);
        sub->add_option("--ring", shot->ring, "variables, e.g. x,y,z");
        if (keys.count("derivations"))
            sub->add_option("--derivation", shot->derivations,
                            "\"x: 0; y: x\" or a manifest derivation name; repeat for a distribution");
        if (keys.count("map")) sub->add_option("--map", shot->map, "\"t1: x; t2: x*z+y^2\" or a manifest map name");
        for (const auto& [flag, key] : flag_keys()) {
            if (!keys.count(key)) continue;
            OneShot* sp = shot.get();
            std::string k = key;
            sub->add_option_function<std::string>("--" + flag, [sp, k](const std::string& v) { sp->values[k] = v; });
        }
        shots.push_back(std::move(shot));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error (input): " << e.what() << '\n';
        return 2;
    }

    if (run->parsed()) return run_manifest_file(manifest_path, jobs, quiet, out, err);
    for (const auto& shot : shots)
        if (app.got_subcommand(shot->kind)) return run_one_shot(*shot, out, err);
    return 2;
}

}  // namespace lndkit::cli
