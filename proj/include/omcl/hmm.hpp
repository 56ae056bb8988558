#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "omcl/kde.hpp"
#include "omcl/recognition.hpp"
#include "omcl/types.hpp"

namespace omcl {

using FeatureSequence = std::vector<std::vector<double>>; // frames x dim

// Per-timestep motion-only features: for every channel, position shifted to
// the channel's first frame and rotation vector relative to the first
// frame, concatenated. Dimension 6K; the first frame maps to zero.
FeatureSequence hmm_features(const Demonstration& d);

struct GmmHmmParams {
    int states = 16;
    int components = 3;
    int iterations = 5;
    double variance_floor = 1e-4;
    std::uint64_t seed = 0;

    void check() const;
};

// Ergodic HMM with per-state diagonal-Gaussian mixtures.
struct GmmHmmModel {
    int states = 0;
    int components = 0;
    int dim = 0;
    std::vector<double> initial;
    std::vector<std::vector<double>> transition;
    std::vector<std::vector<GaussianComponent>> emissions; // [state][component]
    std::vector<double> training_loglik; // per EM iteration, final model last
};

// Baum-Welch from a deterministic seeded initialization (states seeded by
// temporal bins, mixture means by within-bin spread). Variance flooring is
// applied every M-step; the per-iteration log-likelihood is non-decreasing
// up to floating-point tolerance.
GmmHmmModel hmm_train(const std::vector<FeatureSequence>& sequences, const GmmHmmParams& params);

// log P(sequence | model) by the scaled forward algorithm; always finite.
double hmm_loglik(const GmmHmmModel& model, const FeatureSequence& sequence);

// Maximum-likelihood class; ties break toward the lexicographically
// smallest class name.
std::string hmm_classify(const std::map<std::string, GmmHmmModel>& models,
                         const FeatureSequence& sequence);

// Motion-only ablation: identical to recognize() with both context weights
// forced to zero for every concept.
RecognitionDecision omcl_n_recognize(const ConceptRegistry& reg, const MotionPrototype& p,
                                     const RecognitionParams& params);

} // namespace omcl
