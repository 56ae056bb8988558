#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omcl/concepts.hpp"

namespace omcl {

// Dynamic time warping between two primitive-id sequences with 0-1 local
// loss, normalized by the longer length. Result lies in [0, 1].
double dtw_01(const std::vector<int>& a, const std::vector<int>& b);

// Mean DTW cost over the concept's prototypes and motion channels.
double motion_cost(const MotionConcept& c, const std::vector<std::vector<int>>& tau);

// Mean over prototypes and object channels of the per-channel mean absolute
// difference of Bernoulli parameters.
double context_cost_objects(const MotionConcept& c, const std::vector<std::vector<double>>& rho);

// Mean over prototypes of the total variation distance between location
// distributions.
double context_cost_location(const MotionConcept& c, const std::vector<double>& lambda);

// motion + k_rho*objects + k_lambda*location with the concept's own weights.
double assignment_cost(const MotionConcept& c, const MotionPrototype& p);

// Same, with the context weights overridden (k_rho = k_lambda = 0 gives the
// motion-only ablation).
double assignment_cost(const MotionConcept& c, const MotionPrototype& p, double k_rho,
                       double k_lambda);

enum class Outcome { Recognized, Novel };

struct RecognitionDecision {
    Outcome outcome = Outcome::Novel;
    std::string designation;             // best-cost concept (empty when no concepts exist)
    std::optional<double> best_cost;     // C_R
    std::optional<double> wrong_cost;    // C_W, mean cost of the other concepts
    std::vector<std::pair<std::string, double>> per_concept_costs; // creation order

    bool recognized() const { return outcome == Outcome::Recognized; }
};

struct RecognitionParams {
    double delta_c = 0.9;      // margin factor of the novelty test
    double c_abs = 0.12;       // absolute cutoff when only one concept exists
    bool zero_context = false; // force k_rho = k_lambda = 0 (motion-only ablation)
};

// Applies the margin rule |C_R - C_W| >= delta_c * C_R to already-computed
// costs (creation order). With a single concept the rule is undefined and an
// absolute cutoff C_R <= c_abs decides instead. Exposed separately so the
// decision arithmetic is testable without a registry.
RecognitionDecision decide_from_costs(std::vector<std::pair<std::string, double>> costs,
                                      const RecognitionParams& params);

// Costs against every concept in the registry, minimum-cost assignment, and
// the novelty test. Ties in the minimum go to the earliest-created concept.
RecognitionDecision recognize(const ConceptRegistry& reg, const MotionPrototype& p,
                              const RecognitionParams& params);

} // namespace omcl
