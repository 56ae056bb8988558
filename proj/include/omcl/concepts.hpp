#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "omcl/kde.hpp"
#include "omcl/prototype.hpp"
#include "omcl/types.hpp"

namespace omcl {

// Sentinel returned by dominant_objects when a channel saw no object at all.
inline constexpr int kNoObject = -1;

// An action's representation: the prototypes absorbed so far, the
// human-given designation, and the importance weights of the two context
// terms in the assignment cost.
struct MotionConcept {
    std::string designation;
    std::vector<MotionPrototype> prototypes;
    double k_rho = 0.0;
    double k_lambda = 0.0;
};

struct ConceptConfig {
    double k_rho0 = 0.05;
    double k_lambda0 = 0.005;
    double alpha_k = 0.1;

    void check() const;
};

// Per object channel, the index of the object with maximal rho (ties toward
// the smallest catalog index); kNoObject when the whole channel is zero.
std::vector<int> dominant_objects(const MotionPrototype& p);

// Argmax of lambda, ties toward the smallest catalog index.
int dominant_location(const MotionPrototype& p);

// The set of learned concepts plus everything their prototypes reference:
// the shared primitive library and the environment catalog. Concepts keep
// creation order; designations are unique.
class ConceptRegistry {
public:
    ConceptRegistry() = default;
    ConceptRegistry(EnvironmentCatalog catalog, PrimitiveLibrary library, ConceptConfig config);

    const EnvironmentCatalog& catalog() const { return catalog_; }
    const PrimitiveLibrary& library() const { return library_; }
    PrimitiveLibrary& library() { return library_; }
    const ConceptConfig& config() const { return config_; }
    const std::vector<MotionConcept>& concepts() const { return concepts_; }

    bool contains(const std::string& designation) const;
    const MotionConcept& concept_named(const std::string& designation) const;

    // New concept with a single prototype and the default weights.
    // Throws on a duplicate designation.
    const MotionConcept& create_concept(MotionPrototype p, const std::string& designation);

    // Appends the prototype and adapts k_rho/k_lambda: each weight grows by
    // a factor (1+alpha_k) when the incoming prototype's dominant context
    // agrees with a strict majority of the pre-existing prototypes (on all
    // object channels / on the location argmax), and shrinks by (1-alpha_k)
    // otherwise.
    const MotionConcept& update_concept(const std::string& designation, MotionPrototype p);

    nlohmann::json to_json() const;
    static ConceptRegistry from_json(const nlohmann::json& j);

private:
    EnvironmentCatalog catalog_;
    PrimitiveLibrary library_;
    ConceptConfig config_;
    std::vector<MotionConcept> concepts_;
};

ConceptRegistry load_registry(const std::filesystem::path& path);
void save_registry(const ConceptRegistry& registry, const std::filesystem::path& path);

} // namespace omcl
