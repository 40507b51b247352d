#include "lndkit/cli/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lndkit::cli {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
    std::string where;
    if (line) where = "line " + std::to_string(line);
    if (column) where += (where.empty() ? "column " : ", column ") + std::to_string(column);
    return where.empty() ? message : where + ": " + message;
}

// Parses an expression sitting at (line, column), translating parse errors
// into manifest positions.
Polynomial parse_at(std::string_view text, const Ring& ring, std::size_t line, std::size_t column) {
    try {
        return parse(text, ring);
    } catch (const ParseError& e) {
        throw ManifestError(e.message(), line, column + e.position());
    } catch (const InputError& e) {
        throw ManifestError(e.what(), line, column);
    }
}

const std::map<std::string, std::set<std::string>>& kind_keys() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"check-lnd", {"derivations"}},
        {"invariants", {"derivations", "polys"}},
        {"exp", {"derivations", "poly"}},
        {"degree", {"derivations", "poly"}},
        {"e-factor", {"derivations", "map", "probes"}},
        {"slices", {"derivations", "map", "candidates"}},
        {"trivialize", {"derivations", "map", "candidates", "invariant_probes", "condition_h"}},
        {"condition-h", {"derivations", "map", "invariant_probes", "condition_h"}},
        {"nl-locus", {"derivations"}},
        {"e-divide", {"map", "poly", "P"}},
        {"ar-decompose", {"map", "omega", "P", "poly", "a", "degree_bound"}},
        {"fiber", {"map", "point", "expect_empty"}},
        {"blowdown", {"map", "h", "irreducible"}},
        {"primitivity", {"map", "candidates"}},
        {"groebner", {"polys", "order"}},
        {"singular", {"map", "expect"}},
        {"image-closure", {"map", "expect"}},
        {"omega", {"map"}},
    };
    return table;
}

unsigned parse_unsigned(const Param& p, const std::string& key) {
    const std::string& v = p.value;
    if (v.empty() || v.size() > 9 || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw ManifestError("'" + key + "' must be a non-negative integer", p.line, p.column);
    return static_cast<unsigned>(std::stoul(v));
}

void apply_config(RunConfig& cfg, const std::string& key, const Param& p) {
    if (key == "nilpotency_bound") cfg.lnd.nilpotency_bound = parse_unsigned(p, key);
    else if (key == "groebner_pair_cap") cfg.lnd.groebner.max_pair_reductions = parse_unsigned(p, key);
    else if (key == "slice_pool_degree") cfg.lnd.slice_pool_degree = parse_unsigned(p, key);
    else if (key == "derham_degree_bound") cfg.derham_degree_bound = parse_unsigned(p, key);
    else if (key == "random_probes") cfg.lnd.random_probes = parse_unsigned(p, key);
    else throw ManifestError("unknown config key '" + key + "'", p.line, 1);
    if (key == "nilpotency_bound" && cfg.lnd.nilpotency_bound == 0)
        throw ManifestError("nilpotency_bound must be positive", p.line, p.column);
    if (key == "groebner_pair_cap" && cfg.lnd.groebner.max_pair_reductions == 0)
        throw ManifestError("groebner_pair_cap must be positive", p.line, p.column);
}

bool valid_key(std::string_view key) {
    if (key.empty() || !(std::isalpha(static_cast<unsigned char>(key[0])) || key[0] == '_')) return false;
    return std::all_of(key.begin(), key.end(),
                       [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

struct Section {
    std::string kind;
    std::string name;
    std::size_t line = 0;
    std::vector<std::pair<std::string, Param>> entries;
};

void finish_section(Manifest& m, Section& s) {
    if (s.kind.empty()) return;
    std::set<std::string> seen;
    for (const auto& [k, p] : s.entries)
        if (!seen.insert(k).second) throw ManifestError("duplicate key '" + k + "'", p.line, 1);
    if (s.kind == "ring") {
        if (m.ring) throw ManifestError("ring declared twice", s.line, 1);
        if (s.entries.size() != 1 || s.entries[0].first != "vars")
            throw ManifestError("[ring] takes exactly one key, vars", s.line, 1);
        const Param& p = s.entries[0].second;
        try {
            m.ring = make_ring(parse_name_list(p.value));
        } catch (const ManifestError&) {
            throw;
        } catch (const InputError& e) {
            throw ManifestError(e.what(), p.line, p.column);
        }
    } else if (s.kind == "derivation" || s.kind == "map") {
        if (!m.ring) throw ManifestError("[" + s.kind + "] before [ring]", s.line, 1);
        const Ring& ring = *m.ring;
        if (m.find_derivation(s.name) || m.find_map(s.name))
            throw ManifestError("name '" + s.name + "' defined twice", s.line, 1);
        if (s.kind == "derivation") {
            std::vector<Polynomial> images(ring->size(), Polynomial(ring));
            for (const auto& [k, p] : s.entries) {
                auto idx = ring->index_of(k);
                if (!idx) throw ManifestError("unknown variable '" + k + "'", p.line, 1);
                images[*idx] = parse_at(p.value, ring, p.line, p.column);
            }
            m.derivations.emplace_back(s.name, Derivation(ring, std::move(images)));
        } else {
            if (s.entries.empty()) throw ManifestError("map '" + s.name + "' has no components", s.line, 1);
            std::vector<std::string> tags;
            std::vector<Polynomial> comps;
            for (const auto& [k, p] : s.entries) {
                if (ring->index_of(k))
                    throw ManifestError("tag '" + k + "' clashes with a ring variable", p.line, 1);
                tags.push_back(k);
                comps.push_back(parse_at(p.value, ring, p.line, p.column));
            }
            try {
                m.maps.emplace_back(s.name, PolyMap(ring, std::move(tags), std::move(comps)));
            } catch (const InputError& e) {
                throw ManifestError(e.what(), s.line, 1);
            }
        }
    } else if (s.kind == "config") {
        for (const auto& [k, p] : s.entries) apply_config(m.config, k, p);
    } else if (s.kind == "task") {
        TaskSpec t;
        t.line = s.line;
        t.name = s.name;
        for (auto& [k, p] : s.entries) {
            if (k == "kind") t.kind = p.value;
            else if (k == "name") t.name = p.value;
            else t.params.emplace_back(k, p);
        }
        if (t.kind.empty()) throw ManifestError("task without kind", s.line, 1);
        m.tasks.push_back(std::move(t));
    }
    s = Section{};
}

}  // namespace

ManifestError::ManifestError(const std::string& message, std::size_t line, std::size_t column)
    : InputError(located(message, line, column)), message_(message), line_(line), column_(column) {}

const Param* TaskSpec::find(std::string_view key) const {
    for (const auto& [k, p] : params)
        if (k == key) return &p;
    return nullptr;
}

const Derivation* Manifest::find_derivation(std::string_view name) const {
    for (const auto& [n, d] : derivations)
        if (n == name) return &d;
    return nullptr;
}

const PolyMap* Manifest::find_map(std::string_view name) const {
    for (const auto& [n, f] : maps)
        if (n == name) return &f;
    return nullptr;
}

const Ring& Manifest::require_ring() const {
    if (!ring) throw InputError("no ring declared");
    return *ring;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::pair<std::string, std::size_t>> split_list(std::string_view text, char sep) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
        std::size_t end = text.find(sep, start);
        std::string_view piece = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        std::size_t lead = 0;
        while (lead < piece.size() && std::isspace(static_cast<unsigned char>(piece[lead]))) ++lead;
        out.emplace_back(trim(piece), start + lead);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

std::vector<std::string> parse_name_list(std::string_view text) {
    std::vector<std::string> names;
    for (auto& [piece, off] : split_list(text, ',')) {
        if (!RingContext::valid_identifier(piece))
            throw ManifestError("invalid variable name '" + piece + "'", 0, 0);
        names.push_back(piece);
    }
    return names;
}

Manifest parse_manifest(std::string_view text) {
    Manifest m;
    Section current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::string body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') throw ManifestError("unterminated section header", line_no, 1);
            finish_section(m, current);
            std::istringstream header(body.substr(1, body.size() - 2));
            std::string kind, name, extra;
            header >> kind >> name >> extra;
            if (!extra.empty()) throw ManifestError("section header takes at most a kind and a name", line_no, 1);
            if (kind != "ring" && kind != "derivation" && kind != "map" && kind != "config" && kind != "task")
                throw ManifestError("unknown section '" + kind + "'", line_no, 1);
            bool named = kind == "derivation" || kind == "map";
            if (named && !RingContext::valid_identifier(name))
                throw ManifestError("[" + kind + "] needs a name", line_no, 1);
            if ((kind == "ring" || kind == "config") && !name.empty())
                throw ManifestError("[" + kind + "] takes no name", line_no, 1);
            current.kind = kind;
            current.name = name;
            current.line = line_no;
            continue;
        }
        if (current.kind.empty()) throw ManifestError("entry outside any section", line_no, 1);
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ManifestError("expected key = value", line_no, 1);
        std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) throw ManifestError("invalid key '" + key + "'", line_no, 1);
        std::size_t vstart = eq + 1;
        while (vstart < line.size() && std::isspace(static_cast<unsigned char>(line[vstart]))) ++vstart;
        Param p{trim(line.substr(vstart)), line_no, vstart + 1};
        current.entries.emplace_back(key, std::move(p));
    }
    finish_section(m, current);
    for (const auto& t : m.tasks) validate_task(m, t);
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read manifest '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

const std::vector<std::string>& task_kinds() {
    static const std::vector<std::string> kinds = [] {
        std::vector<std::string> out;
        for (const auto& [k, _] : kind_keys()) out.push_back(k);
        return out;
    }();
    return kinds;
}

const std::set<std::string>& task_keys(const std::string& kind) {
    auto it = kind_keys().find(canonical_kind(kind));
    if (it == kind_keys().end()) throw InputError("unknown task kind '" + kind + "'");
    return it->second;
}

std::string canonical_kind(const std::string& kind) {
    return kind == "lnd-check" ? "check-lnd" : kind;
}

void validate_task(const Manifest& m, const TaskSpec& t) {
    auto it = kind_keys().find(canonical_kind(t.kind));
    if (it == kind_keys().end()) throw ManifestError("unknown task kind '" + t.kind + "'", t.line, 1);
    const auto& allowed = it->second;
    std::set<std::string> seen;
    for (const auto& [k, p] : t.params) {
        if (k != "note" && !allowed.count(k))
            throw ManifestError("task kind '" + t.kind + "' has no key '" + k + "'", p.line, 1);
        if (!seen.insert(k).second) throw ManifestError("duplicate key '" + k + "'", p.line, 1);
    }
    if (!m.ring) throw ManifestError("tasks need a [ring] section", t.line, 1);
    if (allowed.count("derivations")) {
        if (const Param* p = t.find("derivations")) {
            for (auto& [name, off] : split_list(p->value, ','))
                if (!m.find_derivation(name))
                    throw ManifestError("undefined derivation '" + name + "'", p->line, p->column + off);
        } else if (m.derivations.size() != 1) {
            throw ManifestError("task needs 'derivations' (the manifest defines " +
                                    std::to_string(m.derivations.size()) + ")",
                                t.line, 1);
        }
    }
    if (allowed.count("map")) {
        if (const Param* p = t.find("map")) {
            if (!m.find_map(p->value)) throw ManifestError("undefined map '" + p->value + "'", p->line, p->column);
        } else if (m.maps.size() != 1) {
            throw ManifestError("task needs 'map' (the manifest defines " + std::to_string(m.maps.size()) + ")",
                                t.line, 1);
        }
    }
}

Derivation parse_derivation_inline(const Ring& ring, std::string_view text) {
    std::vector<Polynomial> images(ring->size(), Polynomial(ring));
    std::vector<bool> given(ring->size(), false);
    for (auto& [piece, off] : split_list(text, ';')) {
        if (piece.empty()) continue;
        std::size_t colon = piece.find(':');
        if (colon == std::string::npos) throw ManifestError("expected 'var: expr' in derivation", 0, off + 1);
        std::string var = trim(std::string_view(piece).substr(0, colon));
        auto idx = ring->index_of(var);
        if (!idx) throw ManifestError("unknown variable '" + var + "' in derivation", 0, off + 1);
        if (given[*idx]) throw ManifestError("variable '" + var + "' given twice", 0, off + 1);
        given[*idx] = true;
        std::size_t vstart = colon + 1;
        while (vstart < piece.size() && std::isspace(static_cast<unsigned char>(piece[vstart]))) ++vstart;
        images[*idx] = parse_at(std::string_view(piece).substr(vstart), ring, 0, off + vstart + 1);
    }
    return Derivation(ring, std::move(images));
}

PolyMap parse_map_inline(const Ring& ring, std::string_view text) {
    std::vector<std::string> tags;
    std::vector<Polynomial> comps;
    for (auto& [piece, off] : split_list(text, ';')) {
        if (piece.empty()) continue;
        std::size_t colon = piece.find(':');
        std::size_t vstart = 0;
        if (colon != std::string::npos) {
            std::string tag = trim(std::string_view(piece).substr(0, colon));
            if (!RingContext::valid_identifier(tag)) throw ManifestError("invalid tag '" + tag + "'", 0, off + 1);
            tags.push_back(tag);
            vstart = colon + 1;
            while (vstart < piece.size() && std::isspace(static_cast<unsigned char>(piece[vstart]))) ++vstart;
        }
        comps.push_back(parse_at(std::string_view(piece).substr(vstart), ring, 0, off + vstart + 1));
    }
    if (comps.empty()) throw ManifestError("map has no components", 0, 0);
    if (tags.empty()) return PolyMap(ring, std::move(comps));
    if (tags.size() != comps.size()) throw ManifestError("either every component has a tag or none does", 0, 0);
    return PolyMap(ring, std::move(tags), std::move(comps));
}

}  // namespace lndkit::cli
