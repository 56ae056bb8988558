#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "omcl/concepts.hpp"
#include "omcl/hmm.hpp"
#include "omcl/prototype.hpp"
#include "omcl/recognition.hpp"
#include "omcl/segmentation.hpp"
#include "omcl/synthetic.hpp"

namespace omcl {

// All module defaults in one place; the CLI reads this from a JSON config
// file and individual commands override what they need.
struct HarnessConfig {
    SegmentationParams segmentation;
    int resample_points = 8;
    KdeParams kde;          // feature_dim derived from resample_points
    ConceptConfig concepts;
    RecognitionParams recognition;
    GmmHmmParams hmm;
    GeneratorConfig generator;

    PrototypeParams prototype_params() const {
        return PrototypeParams{segmentation, resample_points};
    }

    void check() const;

    nlohmann::json to_json() const;
    static HarnessConfig from_json(const nlohmann::json& j);
};

HarnessConfig load_config(const std::filesystem::path& path);
void save_config(const HarnessConfig& config, const std::filesystem::path& path);

} // namespace omcl
