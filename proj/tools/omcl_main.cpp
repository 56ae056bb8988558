#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "omcl/demo_io.hpp"
#include "omcl/experiment.hpp"
#include "omcl/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed) {
    if (cli_seed) return *cli_seed;
    if (const char* env = std::getenv("OMCL_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

fs::path resolve_out(const fs::path& path) {
    if (path.is_absolute()) return path;
    if (const char* env = std::getenv("OMCL_OUTDIR")) return fs::path(env) / path;
    return path;
}

omcl::HarnessConfig resolve_config(const std::string& config_path) {
    if (config_path.empty()) return omcl::HarnessConfig{};
    return omcl::load_config(config_path);
}

json decision_to_json(const omcl::RecognitionDecision& d) {
    json j;
    j["outcome"] = d.recognized() ? "recognized" : "novel";
    if (!d.designation.empty()) j["designation"] = d.designation;
    if (d.best_cost) j["best_cost"] = *d.best_cost;
    if (d.wrong_cost) j["wrong_cost"] = *d.wrong_cost;
    json costs = json::array();
    for (const auto& [name, cost] : d.per_concept_costs)
        costs.push_back({{"designation", name}, {"cost", cost}});
    j["per_concept_costs"] = std::move(costs);
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"omcl: one-shot multimodal action learning and recognition"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "harness config file (JSON)");

    std::optional<std::uint64_t> seed_opt;

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "generate a synthetic demonstration dataset");
    std::string gen_out = "data";
    int gen_n = 2;
    std::string gen_templates, gen_dump_templates;
    gen->add_option("--out-dir", gen_out, "output directory (demos.jsonl + catalog.json)");
    gen->add_option("--n-per-class", gen_n, "demonstrations per action class")
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed_opt, "master seed (env OMCL_SEED)");
    gen->add_option("--templates", gen_templates, "custom action template table (JSON)");
    gen->add_option("--dump-templates", gen_dump_templates,
                    "write the built-in template table to this path and exit");

    // ---- teach ----
    auto* teach = app.add_subcommand("teach", "absorb demonstrations into a concept registry");
    std::string teach_registry, teach_catalog, teach_demo, teach_designation;
    teach->add_option("--registry", teach_registry, "registry file (created when missing)")
        ->required();
    teach->add_option("--catalog", teach_catalog, "catalog file (needed for a new registry)");
    teach->add_option("--demo", teach_demo, "demonstration file (JSON lines)")->required();
    teach->add_option("--designation", teach_designation,
                      "action name; omit to recognize first and prompt on novelty");

    // ---- recognize ----
    auto* rec = app.add_subcommand("recognize", "recognize demonstrations against a registry");
    std::string rec_registry, rec_demo;
    std::optional<double> rec_delta;
    rec->add_option("--registry", rec_registry, "registry file")->required();
    rec->add_option("--demo", rec_demo, "demonstration file (JSON lines)")->required();
    rec->add_option("--delta-c", rec_delta, "override the novelty margin Delta_C");

    // ---- osr ----
    auto* osr = app.add_subcommand("osr", "run the one-shot recognition experiment");
    std::string osr_data, osr_catalog, osr_recognizer = "omcl", osr_out = "osr_report.json";
    int osr_reps = 10;
    osr->add_option("--data", osr_data, "dataset file (JSON lines)")->required();
    osr->add_option("--catalog", osr_catalog, "catalog file")->required();
    osr->add_option("--recognizer", osr_recognizer, "omcl | omcl-n | gmm-hmm");
    osr->add_option("--repetitions", osr_reps, "number of random one-shot splits")
        ->check(CLI::PositiveNumber);
    osr->add_option("--seed", seed_opt, "experiment seed (env OMCL_SEED)");
    osr->add_option("--out", osr_out, "report output path (JSON)");

    // ---- gridsearch-weights ----
    auto* gw = app.add_subcommand("gridsearch-weights",
                                  "grid-search the initial context weights (k_lambda0, k_rho0)");
    std::string gw_data, gw_catalog, gw_out = "gridsearch_weights.json";
    std::vector<double> gw_lambdas{0.0005, 0.005, 0.05};
    std::vector<double> gw_rhos{0.005, 0.05, 0.5};
    int gw_repeats = 10;
    gw->add_option("--data", gw_data, "dataset file")->required();
    gw->add_option("--catalog", gw_catalog, "catalog file")->required();
    gw->add_option("--k-lambda", gw_lambdas, "k_lambda0 grid values")->delimiter(',');
    gw->add_option("--k-rho", gw_rhos, "k_rho0 grid values")->delimiter(',');
    gw->add_option("--repeats", gw_repeats, "splits per tuple")->check(CLI::PositiveNumber);
    gw->add_option("--seed", seed_opt, "experiment seed (env OMCL_SEED)");
    gw->add_option("--out", gw_out, "report output path (JSON)");

    // ---- gridsearch-delta ----
    auto* gd = app.add_subcommand("gridsearch-delta",
                                  "grid-search the novelty margin Delta_C with fixed weights");
    std::string gd_data, gd_catalog, gd_out = "gridsearch_delta.json";
    std::vector<double> gd_deltas{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.2};
    std::optional<double> gd_lambda, gd_rho;
    gd->add_option("--data", gd_data, "dataset file")->required();
    gd->add_option("--catalog", gd_catalog, "catalog file")->required();
    gd->add_option("--deltas", gd_deltas, "Delta_C grid values")->delimiter(',');
    gd->add_option("--k-lambda", gd_lambda, "fixed k_lambda0 (default from config)");
    gd->add_option("--k-rho", gd_rho, "fixed k_rho0 (default from config)");
    gd->add_option("--seed", seed_opt, "experiment seed (env OMCL_SEED)");
    gd->add_option("--out", gd_out, "report output path (JSON)");

    // ---- report ----
    auto* rep = app.add_subcommand("report", "format an OSR report as metrics + confusion CSV");
    std::string rep_in, rep_out = "report";
    rep->add_option("--in", rep_in, "OSR report (JSON)")->required();
    rep->add_option("--out-dir", rep_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const omcl::HarnessConfig config = resolve_config(config_path);

        if (gen->parsed()) {
            if (!gen_dump_templates.empty()) {
                const fs::path path = resolve_out(gen_dump_templates);
                if (path.has_parent_path()) fs::create_directories(path.parent_path());
                std::ofstream out(path);
                if (!out) throw omcl::Error("cannot write " + path.string());
                out << omcl::templates_to_json(omcl::default_templates()).dump(2) << "\n";
                std::cout << "wrote template table to " << path.string() << "\n";
                return 0;
            }
            omcl::GeneratorConfig gcfg = config.generator;
            gcfg.seed = resolve_seed(seed_opt);
            const omcl::EnvironmentCatalog catalog = omcl::household_catalog();
            std::vector<omcl::ActionTemplate> templates = omcl::default_templates();
            if (!gen_templates.empty()) {
                std::ifstream in(gen_templates);
                if (!in) throw omcl::Error("cannot open template file: " + gen_templates);
                json tj;
                in >> tj;
                templates = omcl::templates_from_json(tj);
            }
            const auto demos = omcl::generate_dataset(templates, catalog, gcfg, gen_n);
            const fs::path dir = resolve_out(gen_out);
            fs::create_directories(dir);
            omcl::save_catalog(catalog, dir / "catalog.json");
            omcl::save_demonstrations(demos, catalog, dir / "demos.jsonl");
            std::cout << "wrote " << demos.size() << " demonstrations to "
                      << (dir / "demos.jsonl").string() << "\n";
        } else if (teach->parsed()) {
            omcl::ConceptRegistry registry;
            if (fs::exists(teach_registry)) {
                registry = omcl::load_registry(teach_registry);
            } else {
                if (teach_catalog.empty())
                    throw omcl::Error("teach: new registry needs --catalog");
                omcl::KdeParams kde = config.kde;
                kde.feature_dim = 6 * config.resample_points;
                registry = omcl::ConceptRegistry(omcl::load_catalog(teach_catalog),
                                                 omcl::PrimitiveLibrary(kde), config.concepts);
            }
            const auto demos = omcl::load_demonstrations(teach_demo, registry.catalog());
            std::optional<std::string> designation;
            if (!teach_designation.empty()) designation = teach_designation;
            for (const auto& demo : demos) {
                const omcl::TeachResult result = omcl::teach_demonstration(
                    registry, demo, designation, config, [&]() {
                        std::cout << "novel action: designation? " << std::flush;
                        std::string name;
                        if (!std::getline(std::cin, name) || name.empty())
                            throw omcl::Error("teach: no designation provided");
                        return name;
                    });
                if (result.decision)
                    std::cout << "decision: " << decision_to_json(*result.decision).dump()
                              << "\n";
                std::cout << (result.created ? "created" : "updated") << " concept '"
                          << result.designation << "'";
                if (!result.created)
                    std::cout << " (k_rho " << result.k_rho_before << " -> "
                              << result.k_rho_after << ", k_lambda "
                              << result.k_lambda_before << " -> " << result.k_lambda_after
                              << ")";
                std::cout << "\n";
            }
            omcl::save_registry(registry, teach_registry);
        } else if (rec->parsed()) {
            omcl::ConceptRegistry registry = omcl::load_registry(rec_registry);
            const auto demos = omcl::load_demonstrations(rec_demo, registry.catalog());
            omcl::RecognitionParams params = config.recognition;
            if (rec_delta) params.delta_c = *rec_delta;
            const omcl::PrototypeParams proto_params = config.prototype_params();
            for (const auto& demo : demos) {
                const omcl::MotionPrototype proto = omcl::build_prototype(
                    demo, registry.catalog(), registry.library(), proto_params, false);
                std::cout << decision_to_json(omcl::recognize(registry, proto, params)).dump()
                          << "\n";
            }
        } else if (osr->parsed()) {
            const omcl::EnvironmentCatalog catalog = omcl::load_catalog(osr_catalog);
            const auto dataset = omcl::load_demonstrations(osr_data, catalog);
            const omcl::OsrReport report = omcl::osr_experiment(
                dataset, omcl::recognizer_from_string(osr_recognizer), config, catalog,
                osr_reps, resolve_seed(seed_opt));
            const fs::path out = resolve_out(osr_out);
            if (out.has_parent_path()) fs::create_directories(out.parent_path());
            std::ofstream file(out);
            if (!file) throw omcl::Error("cannot write " + out.string());
            file << report.to_json().dump() << "\n";
            std::cout << report.recognizer << " accuracy: " << 100.0 * report.mean_accuracy
                      << " +/- " << 100.0 * report.std_accuracy << " % over "
                      << report.run_accuracies.size() << " repetitions\n";
        } else if (gw->parsed()) {
            const omcl::EnvironmentCatalog catalog = omcl::load_catalog(gw_catalog);
            const auto dataset = omcl::load_demonstrations(gw_data, catalog);
            std::vector<std::pair<double, double>> grid;
            for (double l : gw_lambdas)
                for (double r : gw_rhos) grid.emplace_back(l, r);
            const omcl::GridSearchReport report = omcl::grid_search_weights(
                dataset, config, catalog, grid, gw_repeats, resolve_seed(seed_opt));
            std::ofstream file(resolve_out(gw_out));
            if (!file) throw omcl::Error("cannot write " + gw_out);
            file << report.to_json().dump(2) << "\n";
            std::cout << "best: " << report.to_json()["best"].dump() << "\n";
        } else if (gd->parsed()) {
            const omcl::EnvironmentCatalog catalog = omcl::load_catalog(gd_catalog);
            const auto dataset = omcl::load_demonstrations(gd_data, catalog);
            omcl::HarnessConfig tuned = config;
            if (gd_lambda) tuned.concepts.k_lambda0 = *gd_lambda;
            if (gd_rho) tuned.concepts.k_rho0 = *gd_rho;
            const omcl::GridSearchReport report = omcl::grid_search_delta(
                dataset, tuned, catalog, gd_deltas, resolve_seed(seed_opt));
            std::ofstream file(resolve_out(gd_out));
            if (!file) throw omcl::Error("cannot write " + gd_out);
            file << report.to_json().dump(2) << "\n";
            std::cout << "best: " << report.to_json()["best"].dump() << "\n";
        } else if (rep->parsed()) {
            std::ifstream in(rep_in);
            if (!in) throw omcl::Error("cannot open report: " + rep_in);
            json j;
            in >> j;
            omcl::write_report(omcl::OsrReport::from_json(j), resolve_out(rep_out));
            std::cout << "wrote metrics.json and confusion.csv to " << rep_out << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
