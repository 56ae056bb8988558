#include "omcl/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace omcl {

using nlohmann::json;

void HarnessConfig::check() const {
    segmentation.check();
    if (resample_points < 2) throw ValidationError("config: resample_points must be >= 2");
    if (kde.feature_dim != 6 * resample_points)
        throw ValidationError("config: kde.feature_dim must equal 6*resample_points");
    kde.check();
    concepts.check();
    hmm.check();
    generator.check();
}

json HarnessConfig::to_json() const {
    json j;
    j["segmentation"] = {{"speed_threshold", segmentation.speed_threshold},
                         {"min_len", segmentation.min_len},
                         {"max_len", segmentation.max_len},
                         {"smoothing_window", segmentation.smoothing_window}};
    j["features"] = {{"resample_points", resample_points}};
    j["kde"] = {{"seed_sigma", kde.seed_sigma},
                {"variance_floor", kde.variance_floor},
                {"component_cap", kde.component_cap},
                {"novelty_log_threshold", kde.novelty_log_threshold},
                {"log_floor", kde.log_floor}};
    j["concepts"] = {{"k_rho0", concepts.k_rho0},
                     {"k_lambda0", concepts.k_lambda0},
                     {"alpha_k", concepts.alpha_k}};
    j["recognition"] = {{"delta_c", recognition.delta_c}, {"c_abs", recognition.c_abs}};
    j["hmm"] = {{"states", hmm.states},
                {"components", hmm.components},
                {"iterations", hmm.iterations},
                {"variance_floor", hmm.variance_floor}};
    j["generator"] = {{"duration", generator.duration},
                      {"sample_rate", generator.sample_rate},
                      {"position_noise", generator.position_noise},
                      {"orientation_noise", generator.orientation_noise},
                      {"amplitude_jitter", generator.amplitude_jitter},
                      {"frequency_jitter", generator.frequency_jitter},
                      {"transit_prefix", generator.transit_prefix}};
    return j;
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

HarnessConfig HarnessConfig::from_json(const json& j) {
    HarnessConfig c;
    if (j.contains("segmentation")) {
        const json& s = j["segmentation"];
        maybe(s, "speed_threshold", c.segmentation.speed_threshold);
        maybe(s, "min_len", c.segmentation.min_len);
        maybe(s, "max_len", c.segmentation.max_len);
        maybe(s, "smoothing_window", c.segmentation.smoothing_window);
    }
    if (j.contains("features")) maybe(j["features"], "resample_points", c.resample_points);
    c.kde.feature_dim = 6 * c.resample_points;
    bool explicit_threshold = false;
    if (j.contains("kde")) {
        const json& s = j["kde"];
        maybe(s, "seed_sigma", c.kde.seed_sigma);
        maybe(s, "variance_floor", c.kde.variance_floor);
        maybe(s, "component_cap", c.kde.component_cap);
        maybe(s, "log_floor", c.kde.log_floor);
        if (s.contains("novelty_log_threshold") && !s["novelty_log_threshold"].is_null()) {
            c.kde.novelty_log_threshold = s["novelty_log_threshold"].get<double>();
            explicit_threshold = true;
        }
    }
    if (!explicit_threshold)
        c.kde.novelty_log_threshold =
            KdeParams::default_novelty_threshold(c.kde.feature_dim, c.kde.seed_sigma);
    if (j.contains("concepts")) {
        const json& s = j["concepts"];
        maybe(s, "k_rho0", c.concepts.k_rho0);
        maybe(s, "k_lambda0", c.concepts.k_lambda0);
        maybe(s, "alpha_k", c.concepts.alpha_k);
    }
    if (j.contains("recognition")) {
        const json& s = j["recognition"];
        maybe(s, "delta_c", c.recognition.delta_c);
        maybe(s, "c_abs", c.recognition.c_abs);
    }
    if (j.contains("hmm")) {
        const json& s = j["hmm"];
        maybe(s, "states", c.hmm.states);
        maybe(s, "components", c.hmm.components);
        maybe(s, "iterations", c.hmm.iterations);
        maybe(s, "variance_floor", c.hmm.variance_floor);
    }
    if (j.contains("generator")) {
        const json& s = j["generator"];
        maybe(s, "duration", c.generator.duration);
        maybe(s, "sample_rate", c.generator.sample_rate);
        maybe(s, "position_noise", c.generator.position_noise);
        maybe(s, "orientation_noise", c.generator.orientation_noise);
        maybe(s, "amplitude_jitter", c.generator.amplitude_jitter);
        maybe(s, "frequency_jitter", c.generator.frequency_jitter);
        maybe(s, "transit_prefix", c.generator.transit_prefix);
    }
    c.check();
    return c;
}

HarnessConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config " + path.string() + ": " + e.what());
    }
    return HarnessConfig::from_json(j);
}

void save_config(const HarnessConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write config file: " + path.string());
    out << config.to_json().dump(2) << "\n";
}

} // namespace omcl
