#pragma once

#include <vector>

#include "omcl/kde.hpp"
#include "omcl/segmentation.hpp"
#include "omcl/types.hpp"

namespace omcl {

// Compact record of one demonstration: per-channel primitive-id sequences
// (tau), per-object-channel Bernoulli parameters (rho), and the categorical
// location distribution (lambda).
struct MotionPrototype {
    std::vector<std::vector<int>> tau;     // K sequences
    std::vector<std::vector<double>> rho;  // M x |O|
    std::vector<double> lambda;            // |L|

    bool operator==(const MotionPrototype&) const = default;
};

// Maximum-likelihood Bernoulli parameter per object: fraction of timesteps
// in which the object is observed.
std::vector<double> estimate_object_dist(const ObjectStream& s, int object_count);

// Maximum-likelihood categorical parameters: fraction of timesteps at each
// location. Sums to 1.
std::vector<double> estimate_location_dist(const LocationStream& s, int location_count);

struct PrototypeParams {
    SegmentationParams segmentation;
    int resample_points = 8;
};

// Segments and featurizes every motion channel, encoding each segment by
// its maximum-likelihood primitive. With learn=true the library absorbs all
// of a channel's segment features before that channel's primitives are
// selected; with learn=false the library is left untouched (and must be
// non-empty). rho/lambda are sized by the catalog.
MotionPrototype build_prototype(const Demonstration& d, const EnvironmentCatalog& catalog,
                                PrimitiveLibrary& lib, const PrototypeParams& params,
                                bool learn);

} // namespace omcl
