// Command-line front end: runs the inequality suites, prints constant
// blocks, scans for near-equality instances, and lists the case registry.
//
//   meanscope verify    --case all --dim 1,2,3,5,8 --trials 200 --seed 42
//   meanscope constants --mean geometric --alpha 0.5 --bounds 4,1,4,1
//   meanscope sharpness --case variance-lemma --dim 2 --budget 300
//   meanscope case-list
//
// Exit codes: 0 all certificates hold, 1 at least one inequality failed,
// 2 configuration/usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "meanscope/report.hpp"
#include "meanscope/version.hpp"

using namespace meanscope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

RunConfig load_base_config(int argc, char** argv) {
    RunConfig base;
    if (const char* env_seed = std::getenv("MEANSCOPE_SEED")) {
        base.seed = std::strtoull(env_seed, nullptr, 10);
    }
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in)
                throw InputError(std::string("config: cannot open '") +
                                 argv[i + 1] + "'");
            Json j = Json::parse(in);
            const std::uint64_t env_default = base.seed;
            base = config_from_json(j.contains("config") ? j.at("config") : j);
            if (!j.contains("seed") &&
                !(j.contains("config") && j.at("config").contains("seed")))
                base.seed = env_default;
        }
    }
    return base;
}

void add_common_options(CLI::App* cmd, RunConfig& config,
                        std::string& map_flag) {
    cmd->add_option("--config", "config file (JSON, same schema as the report echo)");
    cmd->add_option("--seed", config.seed, "master seed (default: MEANSCOPE_SEED or 42)");
    cmd->add_option("--tol-abs", config.tol_abs, "absolute tolerance");
    cmd->add_option("--tol-rel", config.tol_rel, "relative tolerance");
    cmd->add_option("--mean", config.mean,
                    "mean id: sweep, geometric-sweep, geometric, arithmetic, "
                    "right-trivial, custom:<name>");
    cmd->add_option("--alpha", config.alpha, "weight in (0,1)");
    cmd->add_option("--map", map_flag,
                    "map template: sweep, identity, compression, vector-state, "
                    "normalized-trace, subunital-compression, schur "
                    "(config files may give an explicit map object instead)");
    cmd->add_option("--bounds", config.bounds4, "pair bound box a1,b1,a2,b2")
        ->delimiter(',')
        ->expected(4);
    cmd->add_option("--bounds8", config.bounds8,
                    "quad bound box a1,b1,...,a4,b4")
        ->delimiter(',')
        ->expected(8);
    cmd->add_option("--rel-m", config.rel_m, "relative band lower ratio m");
    cmd->add_option("--rel-M", config.rel_M, "relative band upper ratio M");
    cmd->add_flag("--no-pin,!--pin", config.pin_endpoints,
                  "disable endpoint pinning of generated spectra");
    cmd->add_flag("--commuting", config.commuting,
                  "generate commuting operand families");
    cmd->add_option("--threads", config.threads, "worker threads (0 = auto)");
}

int cmd_verify(RunConfig config) {
    const SuiteConfig suite = resolve_suite_config(config);
    const auto start = std::chrono::steady_clock::now();
    const SuiteResult result = run_suite(suite);
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    Json report = build_report(config, result, duration);
    const auto bad = non_finite_paths(report);

    std::cout << std::left << std::setw(24) << "case" << std::right
              << std::setw(8) << "trials" << std::setw(8) << "passes"
              << std::setw(7) << "numeq" << std::setw(6) << "fail"
              << std::setw(6) << "skip" << std::setw(14) << "worst-gap"
              << "\n";
    for (const auto& agg : result.per_case) {
        std::cout << std::left << std::setw(24) << agg.case_key << std::right
                  << std::setw(8) << agg.trials << std::setw(8) << agg.passes
                  << std::setw(7) << agg.numerical_equalities << std::setw(6)
                  << agg.failures << std::setw(6) << agg.skipped
                  << std::setw(14) << std::scientific << std::setprecision(2)
                  << (agg.trials > 0 ? agg.worst_min_gap : 0.0)
                  << std::defaultfloat << "\n";
    }
    std::cout << std::left << std::setw(24) << "TOTAL" << std::right
              << std::setw(8) << result.total_trials << std::setw(8)
              << result.total_trials - result.total_failures << std::setw(7)
              << result.total_numerical_equalities << std::setw(6)
              << result.total_failures << std::setw(6) << result.total_skipped
              << "\n";

    if (!config.report_path.empty()) {
        std::ofstream out(config.report_path);
        if (!out)
            throw InputError("report_path: cannot write '" + config.report_path +
                             "'");
        out << report.dump(2) << "\n";
        std::cout << "report: " << config.report_path << "\n";
    }

    if (!bad.empty()) {
        std::cerr << "non-finite values in report (run fails):\n";
        for (const auto& path : bad) std::cerr << "  " << path << "\n";
        return kExitFailure;
    }
    return result.total_failures == 0 ? kExitOk : kExitFailure;
}

int cmd_constants(const std::string& mean, double alpha,
                  std::vector<double> bounds) {
    const RepresentingFunction f = representing_fn(mean, alpha);
    Json j;
    if (bounds.size() == 4) {
        const ChordConstants cc =
            chord_constants(f, bounds[0], bounds[1], bounds[2], bounds[3], alpha);
        const DerivedConstants dc = derived_constants(cc);
        j["mean"] = mean;
        j["alpha"] = alpha;
        j["bounds"] = bounds;
        j["interval"] = Json::array({cc.u, cc.v});
        j["mu"] = cc.mu;
        j["nu"] = cc.nu;
        if (cc.omega_defined)
            j["omega"] = cc.omega;
        else
            j["omega_undefined"] = true;
        j["rev_ando_add"] = dc.rev_ando_add;
        if (dc.shisha_defined) j["shisha"] = dc.shisha;
        j["variance_bound"] = dc.variance_bound;
        j["oims_bound"] = dc.oims_bound;
        if (dc.greub_defined) j["greub_factor"] = dc.greub_factor;
    } else if (bounds.size() == 8) {
        std::array<double, 8> box{};
        std::copy(bounds.begin(), bounds.end(), box.begin());
        const HadamardChordConstants hc = hadamard_constants(f, box, alpha);
        j["mean"] = mean;
        j["alpha"] = alpha;
        j["bounds"] = bounds;
        j["interval"] = Json::array({hc.u, hc.v});
        j["mu"] = hc.mu;
        j["nu"] = hc.nu;
        if (hc.omega41_defined)
            j["omega_41"] = hc.omega41;
        else
            j["omega_undefined"] = true;
        j["mu_42"] = hc.mu42;
        j["nu_42"] = hc.nu42;
        j["c"] = hc.c;
        j["t0"] = hc.t0;
        j["K"] = hc.K;
        j["neg_g_t0"] = -hc.g_at_t0;
    } else {
        throw InputError("bounds: expected 4 (pair box) or 8 (quad box) values");
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_sharpness(const std::string& case_key, const RunConfig& config,
                  int dim, int budget, int top_k) {
    const auto id = case_from_key(case_key);
    if (!id) throw InputError("case: unknown case id '" + case_key + "'");

    SharpnessConfig scfg;
    scfg.dim = dim;
    scfg.mean_kind = config.mean == "sweep" ? "geometric" : config.mean;
    scfg.alpha = config.alpha;
    if (!config.map.is_string())
        throw InputError("map: sharpness accepts template names only");
    const std::string map_name = config.map.get<std::string>();
    if (map_name != "sweep") {
        const auto t = map_template_from_name(map_name);
        if (!t) throw InputError("map: unknown map template '" + map_name + "'");
        scfg.map = *t;
    }
    std::copy(config.bounds4.begin(), config.bounds4.end(),
              scfg.bounds.box.begin());
    std::copy(config.bounds8.begin(), config.bounds8.end(),
              scfg.bounds.quad.begin());
    scfg.bounds.rel_lo = config.rel_m;
    scfg.bounds.rel_hi = config.rel_M;
    scfg.bounds.commuting = config.commuting;
    scfg.seed = config.seed;
    scfg.tol = Tolerance{config.tol_abs, config.tol_rel};
    scfg.top_k = top_k;

    const SharpnessResult result = sharpness_scan(*id, scfg, budget);
    Json j;
    j["case"] = case_key;
    j["evaluated"] = result.evaluated;
    j["violations"] = result.violations;
    Json tops = Json::array();
    for (const auto& rec : result.top) {
        tops.push_back(Json{{"fingerprint", rec.fingerprint},
                            {"family", rec.family},
                            {"min_gap_eig", rec.min_gap},
                            {"scale", rec.scale},
                            {"rel_gap", rec.rel_gap}});
    }
    j["near_equality"] = std::move(tops);
    std::cout << j.dump(2) << "\n";
    return result.violations == 0 ? kExitOk : kExitFailure;
}

int cmd_case_list() {
    for (const auto& info : case_registry()) {
        std::cout << std::left << std::setw(24) << info.key << info.name
                  << (info.in_default_set ? "" : "  [opt-in]") << "\n"
                  << "    " << info.statement << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        RunConfig config = load_base_config(argc, argv);

        CLI::App app{"meanscope: numerical certificates for operator-mean "
                     "inequalities under positive linear maps"};
        app.set_version_flag("--version", kVersion);
        app.require_subcommand(1);

        // verify
        auto* verify = app.add_subcommand(
            "verify", "run randomized certificates for the selected cases");
        std::string case_arg = "all";
        std::string map_flag;
        verify->add_option("--case", case_arg,
                           "comma-separated case ids, or 'all'");
        verify->add_option("--dim", config.dims, "dimensions, e.g. 1,2,3,5,8")
            ->delimiter(',');
        verify->add_option("--trials", config.trials, "trials per case and dim");
        verify->add_option("--report", config.report_path,
                           "report output path ('' disables)");
        add_common_options(verify, config, map_flag);

        // constants
        auto* constants = app.add_subcommand(
            "constants", "print the constant block for a mean and bound box");
        std::string const_mean = "geometric";
        double const_alpha = 0.5;
        std::vector<double> const_bounds;
        constants->add_option("--mean", const_mean, "mean id");
        constants->add_option("--alpha", const_alpha, "weight in (0,1)");
        constants
            ->add_option("--bounds", const_bounds,
                         "4 values a1,b1,a2,b2 or 8 values a1,b1,...,b4")
            ->delimiter(',')
            ->required();

        // sharpness
        auto* sharp = app.add_subcommand(
            "sharpness", "search for near-equality instances of one case");
        std::string sharp_case;
        int sharp_dim = 2;
        int sharp_budget = 300;
        int sharp_top = 5;
        sharp->add_option("--case", sharp_case, "case id")->required();
        sharp->add_option("--dim", sharp_dim, "instance dimension");
        sharp->add_option("--budget", sharp_budget, "instances to evaluate");
        sharp->add_option("--top", sharp_top, "records to report");
        add_common_options(sharp, config, map_flag);

        // case-list
        app.add_subcommand("case-list", "print the case registry");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return kExitUsage;
        }

        if (verify->count("--map") > 0 || sharp->count("--map") > 0)
            config.map = map_flag;

        if (app.got_subcommand("verify")) {
            if (verify->count("--case") > 0) {
                config.cases.clear();
                std::stringstream ss(case_arg);
                std::string token;
                while (std::getline(ss, token, ','))
                    if (!token.empty()) config.cases.push_back(token);
            }
            return cmd_verify(config);
        }
        if (app.got_subcommand("constants"))
            return cmd_constants(const_mean, const_alpha, const_bounds);
        if (app.got_subcommand("sharpness"))
            return cmd_sharpness(sharp_case, config, sharp_dim, sharp_budget,
                                 sharp_top);
        if (app.got_subcommand("case-list")) return cmd_case_list();
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateBoundsError& e) {
        std::cerr << "error: degenerate bounds: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateSlopeError& e) {
        std::cerr << "error: degenerate slope: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
