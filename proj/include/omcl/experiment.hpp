#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "omcl/config.hpp"
#include "omcl/recognition.hpp"

namespace omcl {

enum class Recognizer { Omcl, OmclN, GmmHmm };

Recognizer recognizer_from_string(const std::string& name); // omcl | omcl-n | gmm-hmm
std::string to_string(Recognizer r);

// One-shot recognition results. Classes are listed in sorted order; the
// confusion matrix is rows = true class, columns = predicted, counts
// aggregated over all repetitions.
struct OsrReport {
    std::string recognizer;
    std::uint64_t seed = 0;
    std::vector<std::string> classes;
    std::vector<double> run_accuracies;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0; // sample standard deviation over repetitions
    std::vector<std::vector<long>> confusion;
    std::vector<double> per_class_accuracy;
    long novelty_flags = 0; // decisions the margin test would have called novel

    double class_accuracy(const std::string& name) const;

    nlohmann::json to_json() const;
    static OsrReport from_json(const nlohmann::json& j);
};

// Closed-set one-shot run: one concept (or HMM) per class from its single
// training demonstration, then forced minimum-cost assignment of every test
// demonstration. Novelty is evaluated only informationally.
OsrReport run_osr(const std::vector<Demonstration>& train,
                  const std::vector<Demonstration>& test, Recognizer recognizer,
                  const HarnessConfig& params, const EnvironmentCatalog& catalog,
                  std::uint64_t seed);

// Repeats run_osr with per-repetition random train/test splits (one training
// demonstration per class, the rest test) drawn from the dataset.
OsrReport osr_experiment(const std::vector<Demonstration>& dataset, Recognizer recognizer,
                         const HarnessConfig& params, const EnvironmentCatalog& catalog,
                         int repetitions, std::uint64_t seed);

struct GridSearchEntry {
    std::vector<std::pair<std::string, double>> params;
    double score = 0.0;
};

struct GridSearchReport {
    std::vector<GridSearchEntry> entries;
    std::size_t selected = 0;

    const GridSearchEntry& best() const { return entries.at(selected); }

    nlohmann::json to_json() const;
};

// Grid search over (k_lambda0, k_rho0): per tuple, `repeats` random one-shot
// splits evaluated closed-set; ties select the smallest tuple.
GridSearchReport grid_search_weights(const std::vector<Demonstration>& dataset,
                                     const HarnessConfig& params,
                                     const EnvironmentCatalog& catalog,
                                     const std::vector<std::pair<double, double>>& grid,
                                     int repeats, std::uint64_t seed);

// Grid search over Delta_C with the weights fixed: one random one-shot
// split; the score of a Delta_C is the fraction of test demonstrations both
// confirmed by the margin test and assigned to their true concept.
GridSearchReport grid_search_delta(const std::vector<Demonstration>& dataset,
                                   const HarnessConfig& params,
                                   const EnvironmentCatalog& catalog,
                                   const std::vector<double>& deltas, std::uint64_t seed);

// Writes metrics.json and confusion.csv (header row/column of class names).
void write_report(const OsrReport& report, const std::filesystem::path& out_dir);

struct TeachResult {
    std::string designation;
    bool created = false;                       // false = updated an existing concept
    std::optional<RecognitionDecision> decision; // present when no designation was given
    double k_rho_before = 0.0, k_rho_after = 0.0;
    double k_lambda_before = 0.0, k_lambda_after = 0.0;
};

// One teaching interaction: learn a prototype (library updated), then either
// file it under the given designation or recognize it; on a novel result the
// designation_provider is consulted (interactive prompt in the CLI).
TeachResult teach_demonstration(ConceptRegistry& registry, const Demonstration& demo,
                                const std::optional<std::string>& designation,
                                const HarnessConfig& params,
                                const std::function<std::string()>& designation_provider);

} // namespace omcl
