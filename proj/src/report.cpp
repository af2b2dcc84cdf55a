#include "meanscope/report.hpp"

#include <cmath>
#include <fstream>

#include "meanscope/version.hpp"

namespace meanscope {

Json config_to_json(const RunConfig& c) {
    Json j;
    j["cases"] = c.cases;
    j["dims"] = c.dims;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["tol_abs"] = c.tol_abs;
    j["tol_rel"] = c.tol_rel;
    j["mean"] = c.mean;
    j["alpha"] = c.alpha;
    j["map"] = c.map;
    j["bounds4"] = c.bounds4;
    j["bounds8"] = c.bounds8;
    j["rel_m"] = c.rel_m;
    j["rel_M"] = c.rel_M;
    j["pin_endpoints"] = c.pin_endpoints;
    j["commuting"] = c.commuting;
    j["threads"] = c.threads;
    j["report_path"] = c.report_path;
    return j;
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    if (j.contains("cases")) c.cases = j.at("cases").get<std::vector<std::string>>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol_abs")) c.tol_abs = j.at("tol_abs").get<double>();
    if (j.contains("tol_rel")) c.tol_rel = j.at("tol_rel").get<double>();
    if (j.contains("mean")) c.mean = j.at("mean").get<std::string>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("map")) c.map = j.at("map");
    if (j.contains("bounds4")) c.bounds4 = j.at("bounds4").get<std::vector<double>>();
    if (j.contains("bounds8")) c.bounds8 = j.at("bounds8").get<std::vector<double>>();
    if (j.contains("rel_m")) c.rel_m = j.at("rel_m").get<double>();
    if (j.contains("rel_M")) c.rel_M = j.at("rel_M").get<double>();
    if (j.contains("pin_endpoints")) c.pin_endpoints = j.at("pin_endpoints").get<bool>();
    if (j.contains("commuting")) c.commuting = j.at("commuting").get<bool>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("report_path")) c.report_path = j.at("report_path").get<std::string>();
    return c;
}

SuiteConfig resolve_suite_config(const RunConfig& config) {
    SuiteConfig suite;

    if (config.cases.empty())
        throw InputError("cases: at least one case id (or \"all\") required");
    suite.cases.clear();
    for (const auto& key : config.cases) {
        if (key == "all") {
            suite.cases = default_case_set();
            break;
        }
        const auto id = case_from_key(key);
        if (!id) throw InputError("cases: unknown case id '" + key + "'");
        suite.cases.push_back(*id);
    }

    if (config.dims.empty()) throw InputError("dims: at least one dimension required");
    suite.dims.clear();
    for (int d : config.dims) {
        if (d < 1) throw InputError("dims: dimensions must be >= 1");
        suite.dims.push_back(d);
    }

    if (config.trials < 1) throw InputError("trials: must be >= 1");
    suite.trials = config.trials;
    suite.seed = config.seed;
    if (!(config.tol_abs >= 0.0) || !(config.tol_rel >= 0.0))
        throw InputError("tol_abs/tol_rel: must be >= 0");
    suite.tol = Tolerance{config.tol_abs, config.tol_rel};

    suite.means.clear();
    if (config.mean == "sweep") {
        suite.means = SuiteConfig::default_mean_sweep();
    } else if (config.mean == "geometric-sweep") {
        for (double a : {0.25, 0.5, 0.75})
            suite.means.push_back(representing_fn("geometric", a));
    } else {
        if (config.mean != "right-trivial" &&
            !(config.alpha > 0.0 && config.alpha < 1.0))
            throw InputError("alpha: alpha must lie in (0,1)");
        suite.means.push_back(representing_fn(config.mean, config.alpha));
    }

    suite.maps.clear();
    if (config.map.is_string()) {
        const std::string name = config.map.get<std::string>();
        if (name == "sweep") {
            suite.maps = {MapTemplate::Identity, MapTemplate::RandomCompression,
                          MapTemplate::VectorStateMap,
                          MapTemplate::NormalizedTrace};
        } else {
            const auto t = map_template_from_name(name);
            if (!t || *t == MapTemplate::None)
                throw InputError("map: unknown map template '" + name + "'");
            suite.maps = {*t};
        }
    } else if (config.map.is_object()) {
        suite.explicit_map = map_spec_from_json(config.map);
        const Eigen::Index want = suite.explicit_map->input_dim();
        if (want >= 0)
            for (Eigen::Index d : suite.dims)
                if (d != want)
                    throw InputError(
                        "map: explicit map expects dimension " +
                        std::to_string(want) + " but dims include " +
                        std::to_string(d));
        suite.maps = {MapTemplate::Explicit};
    } else {
        throw InputError("map: expected a template name or a map object");
    }

    if (config.bounds4.size() != 4)
        throw InputError("bounds4: expected a1,b1,a2,b2");
    if (config.bounds8.size() != 8)
        throw InputError("bounds8: expected a1,b1,...,a4,b4");
    BoundConfig bounds;
    std::copy(config.bounds4.begin(), config.bounds4.end(), bounds.box.begin());
    std::copy(config.bounds8.begin(), config.bounds8.end(), bounds.quad.begin());
    for (int i = 0; i < 2; ++i)
        if (!(bounds.box[2 * i + 1] > 0.0) ||
            !(bounds.box[2 * i + 1] < bounds.box[2 * i]))
            throw InputError("bounds4: need 0 < b_i < a_i");
    for (int i = 0; i < 4; ++i)
        if (!(bounds.quad[2 * i + 1] > 0.0) ||
            !(bounds.quad[2 * i + 1] < bounds.quad[2 * i]))
            throw InputError("bounds8: need 0 < b_i < a_i");
    if (!(config.rel_m > 0.0) || !(config.rel_m < config.rel_M))
        throw InputError("rel_m/rel_M: need 0 < m < M");
    bounds.rel_lo = config.rel_m;
    bounds.rel_hi = config.rel_M;
    bounds.pin_endpoints = config.pin_endpoints;
    bounds.commuting = config.commuting;
    suite.bounds = bounds;
    suite.threads = config.threads;
    return suite;
}

namespace {

std::complex<double> entry_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2)
        return {j.at(0).get<double>(), j.at(1).get<double>()};
    throw InputError("matrix entry must be a number or an [re, im] pair");
}

// Inline value, or "<key>_file" pointing at a JSON document.
Json field_or_file(const Json& j, const std::string& key) {
    if (j.contains(key)) return j.at(key);
    const std::string file_key = key + "_file";
    if (j.contains(file_key)) {
        std::ifstream in(j.at(file_key).get<std::string>());
        if (!in)
            throw InputError("map: cannot open " + file_key + " '" +
                             j.at(file_key).get<std::string>() + "'");
        return Json::parse(in);
    }
    throw InputError("map: missing field '" + key + "'");
}

}  // namespace

ComplexVector complex_vector_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw InputError("vector must be a non-empty array");
    ComplexVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = entry_from_json(j.at(i));
    return v;
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j.at(0).is_array())
        throw InputError("matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols)
            throw InputError("matrix rows have inconsistent lengths");
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = entry_from_json(j.at(i).at(k));
    }
    return m;
}

PositiveMapSpec map_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw InputError("map: object form needs a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "vector-state") {
        ComplexVector x = complex_vector_from_json(field_or_file(j, "x"));
        const double n = x.norm();
        if (n <= 0.0) throw InputError("map: vector state needs a nonzero x");
        return PositiveMapSpec::vector_state(x / n);
    }
    if (kind == "compression")
        return PositiveMapSpec::compression(
            complex_matrix_from_json(field_or_file(j, "V")));
    if (kind == "schur")
        return PositiveMapSpec::schur(
            HermitianMatrix(complex_matrix_from_json(field_or_file(j, "S"))));
    if (kind == "normalized-trace") return PositiveMapSpec::normalized_trace();
    if (kind == "identity") {
        if (!j.contains("dim")) throw InputError("map: identity needs 'dim'");
        return PositiveMapSpec::identity(j.at("dim").get<Eigen::Index>());
    }
    if (kind == "hadamard-compression") {
        if (!j.contains("dim"))
            throw InputError("map: hadamard-compression needs 'dim'");
        return PositiveMapSpec::hadamard_compression(
            j.at("dim").get<Eigen::Index>());
    }
    if (kind == "congruence-then") {
        const HermitianMatrix a0(
            complex_matrix_from_json(field_or_file(j, "A0")));
        if (!j.contains("inner"))
            throw InputError("map: congruence-then needs 'inner'");
        return PositiveMapSpec::congruence_then(
            a0, map_spec_from_json(j.at("inner")));
    }
    throw InputError("map: unknown map kind '" + kind + "'");
}

Json matrix_to_json(const HermitianMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.dim(); ++j) {
            const auto z = m.matrix()(i, j);
            row.push_back(Json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json instance_to_json(const CaseInstance& inst) {
    Json j;
    j["fingerprint"] = inst.fingerprint;
    j["case"] = case_info(inst.id).key;
    j["dim"] = inst.dim;
    j["seed"] = inst.seed;
    j["mean"] = inst.f.name;
    if (inst.f.alpha) j["mean_alpha"] = *inst.f.alpha;
    j["alpha"] = inst.alpha;
    j["map"] = map_template_name(inst.map_template);
    static const char* names[] = {"A", "B", "C", "D"};
    for (std::size_t i = 0; i < inst.mats.size() && i < 4; ++i)
        j[names[i]] = matrix_to_json(inst.mats[i]);
    Json cert = Json::array();
    for (const auto& band : inst.certified)
        cert.push_back(Json::array({band[0], band[1]}));
    j["certified_bands"] = std::move(cert);
    return j;
}

Json certificate_to_json(const Certificate& cert) {
    Json j;
    j["case"] = cert.case_key;
    j["fingerprint"] = cert.fingerprint;
    j["holds"] = cert.order.holds;
    j["numerical_equality"] = cert.order.numerical_equality;
    j["min_gap_eig"] = cert.order.min_gap_eig;
    j["scale"] = cert.order.scale;
    j["tol_abs"] = cert.order.tol_abs;
    j["tol_rel"] = cert.order.tol_rel;
    j["lhs_norm"] = cert.lhs_norm;
    j["rhs_norm"] = cert.rhs_norm;
    Json constants;
    for (const auto& [key, value] : cert.constants) constants[key] = value;
    j["constants"] = std::move(constants);
    return j;
}

Json build_report(const RunConfig& config, const SuiteResult& result,
                  double duration_seconds) {
    Json j;
    j["config"] = config_to_json(config);
    j["environment"] = Json{{"version", kVersion},
                            {"tool", "meanscope"},
                            {"build", kBuildStamp}};
    Json cases = Json::array();
    for (const auto& agg : result.per_case) {
        Json rec;
        rec["case"] = agg.case_key;
        rec["trials"] = agg.trials;
        rec["passes"] = agg.passes;
        rec["numerical_equalities"] = agg.numerical_equalities;
        rec["failures"] = agg.failures;
        rec["skipped"] = agg.skipped;
        rec["worst_min_gap_eig"] =
            agg.trials > 0 ? agg.worst_min_gap : 0.0;
        rec["worst_fingerprint"] = agg.worst_fingerprint;
        Json dumps = Json::array();
        for (const auto& failure : agg.failure_dumps) {
            Json f;
            f["certificate"] = certificate_to_json(failure.certificate);
            f["instance"] = instance_to_json(failure.instance);
            dumps.push_back(std::move(f));
        }
        rec["failure_dumps"] = std::move(dumps);
        cases.push_back(std::move(rec));
    }
    j["cases"] = std::move(cases);
    j["summary"] = Json{{"total_trials", result.total_trials},
                        {"total_failures", result.total_failures},
                        {"total_numerical_equalities",
                         result.total_numerical_equalities},
                        {"total_skipped", result.total_skipped}};
    j["duration_seconds"] = duration_seconds;
    return j;
}

std::string report_body(const Json& report) {
    Json body = report;
    body.erase("duration_seconds");
    return body.dump(2);
}

namespace {

void collect_non_finite(Json& j, const std::string& path,
                        std::vector<std::string>& out) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out.push_back(path);
            j = std::isnan(v) ? "NaN" : (v > 0 ? "Inf" : "-Inf");
        }
        return;
    }
    if (j.is_object()) {
        for (auto& [key, value] : j.items())
            collect_non_finite(value, path + "/" + key, out);
    } else if (j.is_array()) {
        int i = 0;
        for (auto& value : j)
            collect_non_finite(value, path + "/" + std::to_string(i++), out);
    }
}

}  // namespace

std::vector<std::string> non_finite_paths(Json& j) {
    std::vector<std::string> out;
    collect_non_finite(j, "", out);
    return out;
}

}  // namespace meanscope
