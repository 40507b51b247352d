#pragma once

// Task execution and JSON reports.  Keys are sorted (nlohmann::json's
// default object type) and polynomials use the canonical printer, so equal
// inputs give byte-identical output.

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "lndkit/cli/manifest.hpp"
#include "lndkit/forms.hpp"

namespace lndkit::cli {

using json = nlohmann::json;

int exit_code_for(ErrorCategory c);
std::string category_name(ErrorCategory c);

json poly_json(const Polynomial& p);
json polys_json(const std::vector<Polynomial>& ps);
// [[["x", "y"], "coeff"], ...]
json form_json(const DiffForm& w);

// The result object of one task.  `stage` tracks progress so that errors can
// name where they happened.  Throws lndkit::Error.
json run_task(const Manifest& m, const TaskSpec& t, std::string& stage);

struct TaskOutcome {
    json report;
    int exit_code = 0;
};

// Runs one task and wraps the result or the error with the task's index, kind and name.
TaskOutcome execute_task(const Manifest& m, const TaskSpec& t, std::size_t index);

struct RunOutcome {
    json reports = json::array();
    int exit_code = 0;  // the largest task exit code
};

// jobs > 1 runs tasks concurrently; reports keep manifest order.  Progress
// lines go to `progress` when given.
RunOutcome run_manifest(const Manifest& m, unsigned jobs = 1, std::ostream* progress = nullptr);

// Error document for failures that happen before any task runs.
json manifest_error_json(const std::exception& e);

// Indented "key: value" lines for terminals.
std::string render_human(const json& j);

}  // namespace lndkit::cli
