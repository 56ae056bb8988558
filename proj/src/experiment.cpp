#include "omcl/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace omcl {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ b);
}

} // namespace

Recognizer recognizer_from_string(const std::string& name) {
    if (name == "omcl") return Recognizer::Omcl;
    if (name == "omcl-n") return Recognizer::OmclN;
    if (name == "gmm-hmm") return Recognizer::GmmHmm;
    throw Error("unknown recognizer '" + name + "' (expected omcl | omcl-n | gmm-hmm)");
}

std::string to_string(Recognizer r) {
    switch (r) {
        case Recognizer::Omcl: return "omcl";
        case Recognizer::OmclN: return "omcl-n";
        default: return "gmm-hmm";
    }
}

double OsrReport::class_accuracy(const std::string& name) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == name) return per_class_accuracy[i];
    throw Error("report: unknown class '" + name + "'");
}

json OsrReport::to_json() const {
    json j;
    j["recognizer"] = recognizer;
    j["seed"] = seed;
    j["classes"] = classes;
    j["run_accuracies"] = run_accuracies;
    j["mean_accuracy"] = mean_accuracy;
    j["std_accuracy"] = std_accuracy;
    j["confusion"] = confusion;
    j["per_class_accuracy"] = per_class_accuracy;
    j["novelty_flags"] = novelty_flags;
    return j;
}

OsrReport OsrReport::from_json(const json& j) {
    OsrReport r;
    r.recognizer = j.at("recognizer").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.classes = j.at("classes").get<std::vector<std::string>>();
    r.run_accuracies = j.at("run_accuracies").get<std::vector<double>>();
    r.mean_accuracy = j.at("mean_accuracy").get<double>();
    r.std_accuracy = j.at("std_accuracy").get<double>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<long>>>();
    r.per_class_accuracy = j.at("per_class_accuracy").get<std::vector<double>>();
    r.novelty_flags = j.at("novelty_flags").get<long>();
    return r;
}

namespace {

struct SingleRun {
    std::vector<std::pair<std::string, std::string>> predictions; // (true, predicted)
    long novelty_flags = 0;
};

SingleRun run_once(const std::vector<Demonstration>& train,
                   const std::vector<Demonstration>& test, Recognizer recognizer,
                   const HarnessConfig& params, const EnvironmentCatalog& catalog,
                   std::uint64_t seed) {
    std::set<std::string> train_classes;
    for (const auto& d : train) {
        if (d.label.empty()) throw Error("osr: unlabeled training demonstration");
        train_classes.insert(d.label);
    }
    for (const auto& d : test)
        if (!train_classes.count(d.label))
            throw Error("osr: test class '" + d.label + "' missing from training set");

    SingleRun run;
    if (recognizer == Recognizer::GmmHmm) {
        std::map<std::string, GmmHmmModel> models;
        std::uint64_t class_idx = 0;
        for (const auto& d : train) {
            GmmHmmParams hp = params.hmm;
            hp.seed = mix_seed(seed, ++class_idx);
            models.emplace(d.label, hmm_train({hmm_features(d)}, hp));
        }
        for (const auto& d : test)
            run.predictions.emplace_back(d.label, hmm_classify(models, hmm_features(d)));
        return run;
    }

    const bool zero_context = (recognizer == Recognizer::OmclN);
    KdeParams kde = params.kde;
    kde.feature_dim = 6 * params.resample_points;
    ConceptRegistry registry(catalog, PrimitiveLibrary(kde), params.concepts);
    const PrototypeParams proto_params = params.prototype_params();

    for (const auto& d : train) {
        MotionPrototype p = build_prototype(d, catalog, registry.library(), proto_params, true);
        registry.create_concept(std::move(p), d.label);
    }

    RecognitionParams rec = params.recognition;
    rec.zero_context = zero_context;
    for (const auto& d : test) {
        const MotionPrototype p =
            build_prototype(d, catalog, registry.library(), proto_params, false);
        const RecognitionDecision decision = recognize(registry, p, rec);
        // closed-set protocol: forced assignment to the minimum-cost concept
        run.predictions.emplace_back(d.label, decision.designation);
        if (!decision.recognized()) ++run.novelty_flags;
    }
    return run;
}

OsrReport summarize(const std::vector<SingleRun>& runs, Recognizer recognizer,
                    std::uint64_t seed) {
    OsrReport report;
    report.recognizer = to_string(recognizer);
    report.seed = seed;

    std::set<std::string> class_set;
    for (const auto& run : runs)
        for (const auto& [truth, predicted] : run.predictions) {
            class_set.insert(truth);
            class_set.insert(predicted);
        }
    report.classes.assign(class_set.begin(), class_set.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < report.classes.size(); ++i) index[report.classes[i]] = i;

    const std::size_t n = report.classes.size();
    report.confusion.assign(n, std::vector<long>(n, 0));
    for (const auto& run : runs) {
        long correct = 0;
        for (const auto& [truth, predicted] : run.predictions) {
            report.confusion[index[truth]][index[predicted]] += 1;
            if (truth == predicted) ++correct;
        }
        report.run_accuracies.push_back(
            run.predictions.empty() ? 0.0
                                    : static_cast<double>(correct) / run.predictions.size());
        report.novelty_flags += run.novelty_flags;
    }

    double mean = 0.0;
    for (double a : report.run_accuracies) mean += a;
    mean /= static_cast<double>(report.run_accuracies.size());
    report.mean_accuracy = mean;
    if (report.run_accuracies.size() > 1) {
        double ss = 0.0;
        for (double a : report.run_accuracies) ss += (a - mean) * (a - mean);
        report.std_accuracy =
            std::sqrt(ss / static_cast<double>(report.run_accuracies.size() - 1));
    }

    report.per_class_accuracy.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        long row = 0;
        for (std::size_t k = 0; k < n; ++k) row += report.confusion[i][k];
        report.per_class_accuracy[i] =
            (row > 0) ? static_cast<double>(report.confusion[i][i]) / row : 0.0;
    }
    return report;
}

std::map<std::string, std::vector<std::size_t>> group_by_label(
    const std::vector<Demonstration>& dataset) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset[i].label.empty()) throw Error("dataset contains an unlabeled demonstration");
        groups[dataset[i].label].push_back(i);
    }
    return groups;
}

// One training index per class, everything else test.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> one_shot_split(
    const std::map<std::string, std::vector<std::size_t>>& groups, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<std::size_t> train_set;
    for (const auto& [label, indices] : groups) {
        std::uniform_int_distribution<std::size_t> dist(0, indices.size() - 1);
        train_set.insert(indices[dist(rng)]);
    }
    std::vector<std::size_t> train(train_set.begin(), train_set.end());
    std::vector<std::size_t> test;
    for (const auto& [label, indices] : groups)
        for (std::size_t i : indices)
            if (!train_set.count(i)) test.push_back(i);
    std::sort(test.begin(), test.end());
    return {train, test};
}

std::vector<Demonstration> select(const std::vector<Demonstration>& dataset,
                                  const std::vector<std::size_t>& indices) {
    std::vector<Demonstration> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(dataset[i]);
    return out;
}

} // namespace

OsrReport run_osr(const std::vector<Demonstration>& train,
                  const std::vector<Demonstration>& test, Recognizer recognizer,
                  const HarnessConfig& params, const EnvironmentCatalog& catalog,
                  std::uint64_t seed) {
    return summarize({run_once(train, test, recognizer, params, catalog, seed)}, recognizer,
                     seed);
}

OsrReport osr_experiment(const std::vector<Demonstration>& dataset, Recognizer recognizer,
                         const HarnessConfig& params, const EnvironmentCatalog& catalog,
                         int repetitions, std::uint64_t seed) {
    if (repetitions < 1) throw Error("osr: repetitions must be >= 1");
    const auto groups = group_by_label(dataset);
    for (const auto& [label, indices] : groups)
        if (indices.size() < 2)
            throw Error("osr: class '" + label + "' needs at least 2 demonstrations");

    std::vector<SingleRun> runs;
    for (int r = 0; r < repetitions; ++r) {
        const auto [train_idx, test_idx] = one_shot_split(groups, mix_seed(seed, r));
        runs.push_back(run_once(select(dataset, train_idx), select(dataset, test_idx),
                                recognizer, params, catalog, mix_seed(seed, 0x1000 + r)));
    }
    return summarize(runs, recognizer, seed);
}

json GridSearchReport::to_json() const {
    json entries_json = json::array();
    for (const auto& e : entries) {
        json p = json::object();
        for (const auto& [k, v] : e.params) p[k] = v;
        entries_json.push_back({{"params", std::move(p)}, {"score", e.score}});
    }
    json j;
    j["entries"] = std::move(entries_json);
    j["selected"] = selected;
    json best_params = json::object();
    for (const auto& [k, v] : best().params) best_params[k] = v;
    j["best"] = {{"params", std::move(best_params)}, {"score", best().score}};
    return j;
}

GridSearchReport grid_search_weights(const std::vector<Demonstration>& dataset,
                                     const HarnessConfig& params,
                                     const EnvironmentCatalog& catalog,
                                     const std::vector<std::pair<double, double>>& grid,
                                     int repeats, std::uint64_t seed) {
    if (grid.empty()) throw Error("grid search: empty grid");
    const auto groups = group_by_label(dataset);
    for (const auto& [label, indices] : groups)
        if (indices.size() < 2)
            throw Error("grid search: class '" + label + "' needs at least 2 demonstrations");

    // identical splits across tuples
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> splits;
    for (int r = 0; r < repeats; ++r) splits.push_back(one_shot_split(groups, mix_seed(seed, r)));

    GridSearchReport report;
    for (const auto& [k_lambda0, k_rho0] : grid) {
        HarnessConfig tuned = params;
        tuned.concepts.k_lambda0 = k_lambda0;
        tuned.concepts.k_rho0 = k_rho0;
        double total = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const auto& [train_idx, test_idx] = splits[r];
            const OsrReport run =
                run_osr(select(dataset, train_idx), select(dataset, test_idx),
                        Recognizer::Omcl, tuned, catalog, mix_seed(seed, 0x2000 + r));
            total += run.mean_accuracy;
        }
        GridSearchEntry entry;
        entry.params = {{"k_lambda0", k_lambda0}, {"k_rho0", k_rho0}};
        entry.score = total / repeats;
        report.entries.push_back(std::move(entry));
    }

    report.selected = 0;
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        const auto& best = report.entries[report.selected];
        const auto& cand = report.entries[i];
        if (cand.score > best.score ||
            (cand.score == best.score && grid[i] < grid[report.selected]))
            report.selected = i;
    }
    return report;
}

GridSearchReport grid_search_delta(const std::vector<Demonstration>& dataset,
                                   const HarnessConfig& params,
                                   const EnvironmentCatalog& catalog,
                                   const std::vector<double>& deltas, std::uint64_t seed) {
    if (deltas.empty()) throw Error("grid search: empty grid");
    const auto groups = group_by_label(dataset);
    for (const auto& [label, indices] : groups)
        if (indices.size() < 2)
            throw Error("grid search: class '" + label + "' needs at least 2 demonstrations");

    const auto [train_idx, test_idx] = one_shot_split(groups, mix_seed(seed, 0));

    KdeParams kde = params.kde;
    kde.feature_dim = 6 * params.resample_points;
    ConceptRegistry registry(catalog, PrimitiveLibrary(kde), params.concepts);
    const PrototypeParams proto_params = params.prototype_params();
    for (std::size_t i : train_idx) {
        MotionPrototype p =
            build_prototype(dataset[i], catalog, registry.library(), proto_params, true);
        registry.create_concept(std::move(p), dataset[i].label);
    }

    // the library is frozen now; prototypes are shared across deltas
    std::vector<std::pair<std::string, MotionPrototype>> queries;
    for (std::size_t i : test_idx)
        queries.emplace_back(dataset[i].label, build_prototype(dataset[i], catalog,
                                                               registry.library(),
                                                               proto_params, false));

    GridSearchReport report;
    for (double delta : deltas) {
        RecognitionParams rec = params.recognition;
        rec.delta_c = delta;
        long confirmed_correct = 0;
        for (const auto& [label, proto] : queries) {
            const RecognitionDecision decision = recognize(registry, proto, rec);
            if (decision.recognized() && decision.designation == label) ++confirmed_correct;
        }
        GridSearchEntry entry;
        entry.params = {{"delta_c", delta}};
        entry.score = queries.empty()
                          ? 0.0
                          : static_cast<double>(confirmed_correct) / queries.size();
        report.entries.push_back(std::move(entry));
    }

    report.selected = 0;
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        const auto& best = report.entries[report.selected];
        const auto& cand = report.entries[i];
        if (cand.score > best.score ||
            (cand.score == best.score && deltas[i] < deltas[report.selected]))
            report.selected = i;
    }
    return report;
}

void write_report(const OsrReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "metrics.json");
        if (!out) throw Error("cannot write " + (out_dir / "metrics.json").string());
        json j;
        j["recognizer"] = report.recognizer;
        j["seed"] = report.seed;
        j["repetitions"] = report.run_accuracies.size();
        j["mean_accuracy"] = report.mean_accuracy;
        j["std_accuracy"] = report.std_accuracy;
        j["run_accuracies"] = report.run_accuracies;
        json per_class = json::object();
        for (std::size_t i = 0; i < report.classes.size(); ++i)
            per_class[report.classes[i]] = report.per_class_accuracy[i];
        j["per_class_accuracy"] = std::move(per_class);
        j["novelty_flags"] = report.novelty_flags;
        out << j.dump(2) << "\n";
    }
    {
        std::ofstream out(out_dir / "confusion.csv");
        if (!out) throw Error("cannot write " + (out_dir / "confusion.csv").string());
        out << "true\\predicted";
        for (const auto& c : report.classes) out << "," << c;
        out << "\n";
        for (std::size_t i = 0; i < report.classes.size(); ++i) {
            out << report.classes[i];
            for (std::size_t k = 0; k < report.classes.size(); ++k)
                out << "," << report.confusion[i][k];
            out << "\n";
        }
    }
}

TeachResult teach_demonstration(ConceptRegistry& registry, const Demonstration& demo,
                                const std::optional<std::string>& designation,
                                const HarnessConfig& params,
                                const std::function<std::string()>& designation_provider) {
    const PrototypeParams proto_params = params.prototype_params();
    MotionPrototype proto =
        build_prototype(demo, registry.catalog(), registry.library(), proto_params, true);

    TeachResult result;
    auto file_under = [&](const std::string& name) {
        if (registry.contains(name)) {
            const MotionConcept& before = registry.concept_named(name);
            result.k_rho_before = before.k_rho;
            result.k_lambda_before = before.k_lambda;
            const MotionConcept& after = registry.update_concept(name, std::move(proto));
            result.k_rho_after = after.k_rho;
            result.k_lambda_after = after.k_lambda;
            result.created = false;
        } else {
            const MotionConcept& created = registry.create_concept(std::move(proto), name);
            result.k_rho_before = result.k_rho_after = created.k_rho;
            result.k_lambda_before = result.k_lambda_after = created.k_lambda;
            result.created = true;
        }
        result.designation = name;
    };

    if (designation) {
        file_under(*designation);
        return result;
    }

    result.decision = recognize(registry, proto, params.recognition);
    if (result.decision->recognized()) {
        file_under(result.decision->designation);
    } else {
        if (!designation_provider)
            throw Error("teach: novel demonstration but no designation available");
        file_under(designation_provider());
    }
    return result;
}

} // namespace omcl
