#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "meanscope/cases.hpp"

namespace meanscope {

using Json = nlohmann::ordered_json;

// Everything a verify run needs; serializes to / from the JSON echoed in
// reports, so a report can be replayed as a config file.
struct RunConfig {
    std::vector<std::string> cases{"all"};
    std::vector<int> dims{1, 2, 3, 5, 8};
    int trials = 200;
    std::uint64_t seed = 42;
    double tol_abs = kDefaultTolAbs;
    double tol_rel = kDefaultTolRel;
    // "sweep" runs the acceptance set (geometric 1/4, 1/2, 3/4 plus
    // arithmetic and right-trivial); "geometric-sweep" only the three
    // geometric weights; otherwise a single mean id with `alpha`.
    std::string mean = "sweep";
    double alpha = 0.5;
    // Either a template name ("sweep" rotates identity / compression /
    // vector-state / trace) or an explicit map object, e.g.
    //   {"kind": "vector-state", "x": [[0.707,0],[0.707,0]]}
    //   {"kind": "compression", "V": [[[1,0]],[[0,0]]]}
    // with matrices/vectors inline or via "<field>_file" paths.
    Json map = "sweep";
    std::vector<double> bounds4{4.0, 1.0, 4.0, 1.0};
    std::vector<double> bounds8{4.0, 1.0, 4.0, 1.0, 4.0, 1.0, 4.0, 1.0};
    double rel_m = 1.0;
    double rel_M = 2.0;
    bool pin_endpoints = true;
    bool commuting = false;
    int threads = 0;
    std::string report_path = "meanscope-report.json";

    bool operator==(const RunConfig&) const = default;
};

Json config_to_json(const RunConfig& config);
RunConfig config_from_json(const Json& j);

// Resolution into the suite machinery; throws InputError with the
// offending field named when a value is unusable.
SuiteConfig resolve_suite_config(const RunConfig& config);

Json matrix_to_json(const HermitianMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j);
ComplexVector complex_vector_from_json(const Json& j);

// Explicit map object ({"kind": ..., parameters...}) to a concrete spec.
PositiveMapSpec map_spec_from_json(const Json& j);

Json instance_to_json(const CaseInstance& inst);
Json certificate_to_json(const Certificate& cert);

// Full report: config echo, environment, per-case records, summary,
// duration.  Key order is fixed; failures carry full instance dumps.
Json build_report(const RunConfig& config, const SuiteResult& result,
                  double duration_seconds);

// The deterministic portion compared across runs: the report minus
// wall-clock fields.
std::string report_body(const Json& report);

// Reports must not contain NaN/Inf; offending values are re-encoded as
// strings and reported back so the caller can fail the run.
std::vector<std::string> non_finite_paths(Json& j);

}  // namespace meanscope
