#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <utility>
#include <vector>

#include "omcl/features.hpp"

namespace omcl {

struct GaussianComponent {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> variance; // diagonal
};

// One motion primitive: a Gaussian-mixture density over segment features,
// grown one kernel at a time as segments are absorbed.
struct MotionPrimitive {
    int id = 0;
    std::vector<GaussianComponent> components;
    long sample_count = 0;
};

struct KdeParams {
    int feature_dim = 48;
    double seed_sigma = 0.05;       // per-dimension kernel bandwidth
    double variance_floor = 1e-6;
    int component_cap = 16;
    double novelty_log_threshold;   // theta_new; see default below
    double log_floor = -1e9;

    KdeParams() { novelty_log_threshold = default_novelty_threshold(feature_dim, seed_sigma); }

    // Log-density of an isotropic seed Gaussian at Euclidean distance
    // 5*seed_sigma from its mean: features farther than that from every
    // primitive spawn a new one.
    static double default_novelty_threshold(int dim, double seed_sigma);

    void check() const;
};

// Mixture log-density with the given saturation floor; kept as a free
// function so tests can evaluate primitives outside a library.
double log_density(const MotionPrimitive& p, const FeatureVector& f, double log_floor = -1e9);

// The shared library of motion primitives. Ids are assigned densely from 0
// and never reused.
class PrimitiveLibrary {
public:
    PrimitiveLibrary() = default;
    explicit PrimitiveLibrary(KdeParams params);

    bool empty() const { return primitives_.empty(); }
    int size() const { return static_cast<int>(primitives_.size()); }
    const KdeParams& params() const { return params_; }
    const std::map<int, MotionPrimitive>& primitives() const { return primitives_; }
    const MotionPrimitive& primitive(int id) const;
    bool contains(int id) const { return primitives_.count(id) != 0; }

    double log_density(int id, const FeatureVector& f) const;

    // Maximum-likelihood primitive for a feature; ties break toward the
    // smallest id. Throws on an empty library.
    std::pair<int, double> best_primitive(const FeatureVector& f) const;

    // Online update: create a new primitive when the best log-density falls
    // below the novelty threshold (or the library is empty), otherwise let
    // the winner absorb the feature as a fresh kernel component, merging
    // the closest pair of components once the cap is exceeded. Returns the
    // id of the created/updated primitive.
    int observe(const FeatureVector& f);

    nlohmann::json to_json() const;
    static PrimitiveLibrary from_json(const nlohmann::json& j);

private:
    void check_dim(const FeatureVector& f) const;

    KdeParams params_;
    std::map<int, MotionPrimitive> primitives_;
    int next_id_ = 0;
};

} // namespace omcl
