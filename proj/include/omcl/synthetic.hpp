#pragma once

#include <array>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "omcl/types.hpp"

namespace omcl {

// Channel order used by the generator and the 22-class template table.
inline constexpr int kHeadChannel = 0;
inline constexpr int kLeftHandChannel = 1;
inline constexpr int kRightHandChannel = 2;
inline constexpr int kChannelCount = 3; // K = M = 3

// One pose a stroke can target, relative to the channel's rest posture.
struct StrokePose {
    Eigen::Vector3d offset{0.0, 0.0, 0.0};   // m
    Eigen::Vector3d rotation{0.0, 0.0, 0.0}; // axis-angle, rad
    Eigen::Vector3d spread{0.0, 0.0, 0.0};   // per-demo uniform half-extents
    double dwell_scale = 1.0;
};

// A channel's motion program: a fixed number of minimum-jerk strokes that
// cycle through the waypoints, separated by short dwells. Inactive channels
// rest at the base posture with only sway noise.
struct ChannelPlan {
    bool active = false;
    std::vector<StrokePose> waypoints;
    int stroke_count = 0;
    double stroke_duration = 0.3; // s, before jitter
    double dwell = 0.15;          // s, before jitter
};

// A generative description of one action class: the motion programs of the
// three channels plus the class-conditional context. Classes with very
// similar motion patterns share a family id (and identical programs) and
// are distinguishable only through context.
struct ActionTemplate {
    std::string name;
    std::string family;
    std::array<ChannelPlan, kChannelCount> channels;
    std::vector<std::string> locations;                        // allowed location names
    std::array<std::vector<std::string>, kChannelCount> objects; // options; {"*"} = any
    double grasp_onset_lo = 0.02, grasp_onset_hi = 0.08;   // fractions of the record
    double grasp_offset_lo = 0.92, grasp_offset_hi = 0.98;
};

struct GeneratorConfig {
    std::uint64_t seed = 0;
    double duration = 6.0;            // s
    double sample_rate = 60.0;        // Hz
    double position_noise = 0.01;     // m, band-limited sway
    double orientation_noise = 0.02;  // rad
    double amplitude_jitter = 0.2;    // fraction
    double frequency_jitter = 0.2;    // fraction, stroke/dwell durations
    bool transit_prefix = false;      // brief stay at another location first

    void check() const;
};

// The four household areas and the Table-style object inventory.
EnvironmentCatalog household_catalog();

// The 22 built-in action templates, in a fixed order.
const std::vector<ActionTemplate>& default_templates();
const ActionTemplate& template_named(const std::string& name);
std::vector<std::string> action_class_names();

nlohmann::json templates_to_json(const std::vector<ActionTemplate>& templates);
std::vector<ActionTemplate> templates_from_json(const nlohmann::json& j);

// Deterministic for (template, cfg, draw): two calls with the same arguments
// produce bit-identical demonstrations.
Demonstration generate_demo(const ActionTemplate& tmpl, const EnvironmentCatalog& catalog,
                            const GeneratorConfig& cfg, std::uint64_t draw);
Demonstration generate_demo(const std::string& class_name, const GeneratorConfig& cfg,
                            std::uint64_t draw);

// n_per_class demonstrations of every template class, per-demo seeds derived
// from cfg.seed, then a seeded shuffle.
std::vector<Demonstration> generate_dataset(const std::vector<ActionTemplate>& templates,
                                            const EnvironmentCatalog& catalog,
                                            const GeneratorConfig& cfg, int n_per_class);
std::vector<Demonstration> generate_dataset(const GeneratorConfig& cfg, int n_per_class);

} // namespace omcl
