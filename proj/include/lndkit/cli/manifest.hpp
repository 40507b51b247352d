#pragma once

// Problem descriptions for the command-line front end.  The grammar is
// documented in docs/manifest.md.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lndkit/lnd.hpp"
#include "lndkit/polymap.hpp"

namespace lndkit::cli {

// An input error tied to a manifest location (1-based; 0 when unknown).
class ManifestError : public InputError {
public:
    ManifestError(const std::string& message, std::size_t line, std::size_t column);

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

struct RunConfig {
    LndConfig lnd;
    unsigned derham_degree_bound = 0;  // 0 = automatic
};

struct Param {
    std::string value;
    std::size_t line = 0;
    std::size_t column = 0;  // column of the first character of value
};

struct TaskSpec {
    std::string kind;
    std::string name;
    std::size_t line = 0;
    std::vector<std::pair<std::string, Param>> params;

    const Param* find(std::string_view key) const;
    bool has(std::string_view key) const { return find(key) != nullptr; }
};

struct Manifest {
    std::optional<Ring> ring;
    std::vector<std::pair<std::string, Derivation>> derivations;
    std::vector<std::pair<std::string, PolyMap>> maps;
    RunConfig config;
    std::vector<TaskSpec> tasks;

    const Derivation* find_derivation(std::string_view name) const;
    const PolyMap* find_map(std::string_view name) const;
    const Ring& require_ring() const;
};

Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::string& path);

// Task kinds understood by run_task, with "lnd-check" accepted for "check-lnd".
const std::vector<std::string>& task_kinds();
std::string canonical_kind(const std::string& kind);
// Parameter keys a kind accepts besides kind, name and note.
const std::set<std::string>& task_keys(const std::string& kind);
// Throws ManifestError for unknown kinds, unknown keys or undefined names.
void validate_task(const Manifest& m, const TaskSpec& t);

// "x: 0; y: x; z: -2*y"; variables left out map to 0.
Derivation parse_derivation_inline(const Ring& ring, std::string_view text);
// "t1: x; t2: x*z+y^2", or "x; x*z+y^2" with default tag names.
PolyMap parse_map_inline(const Ring& ring, std::string_view text);
// "x, y, z"
std::vector<std::string> parse_name_list(std::string_view text);

std::string trim(std::string_view s);
// Splits on sep, trimming pieces and keeping each piece's offset into text.
std::vector<std::pair<std::string, std::size_t>> split_list(std::string_view text, char sep);

}  // namespace lndkit::cli
