#include "omcl/prototype.hpp"

namespace omcl {

std::vector<double> estimate_object_dist(const ObjectStream& s, int object_count) {
    if (s.observations.empty())
        throw ValidationError("estimate_object_dist: empty stream");
    std::vector<long> counts(object_count, 0);
    for (const auto& bits : s.observations) {
        for (int o = 0; o < object_count; ++o)
            if (bits[o]) ++counts[o];
    }
    std::vector<double> rho(object_count, 0.0);
    const double n = static_cast<double>(s.observations.size());
    for (int o = 0; o < object_count; ++o) rho[o] = counts[o] / n;
    return rho;
}

std::vector<double> estimate_location_dist(const LocationStream& s, int location_count) {
    if (s.locations.empty())
        throw ValidationError("estimate_location_dist: empty stream");
    std::vector<long> counts(location_count, 0);
    for (int l : s.locations) ++counts[l];
    std::vector<double> lambda(location_count, 0.0);
    const double n = static_cast<double>(s.locations.size());
    for (int l = 0; l < location_count; ++l) lambda[l] = counts[l] / n;
    return lambda;
}

MotionPrototype build_prototype(const Demonstration& d, const EnvironmentCatalog& catalog,
                                PrimitiveLibrary& lib, const PrototypeParams& params,
                                bool learn) {
    if (!learn && lib.empty())
        throw Error("build_prototype: recognition against an empty primitive library");

    const int f = params.resample_points;
    MotionPrototype proto;
    proto.tau.reserve(d.motion.size());
    for (const auto& stream : d.motion) {
        const SegmentBoundaries bounds =
            segment_stream(stream, d.sample_rate, params.segmentation);

        std::vector<FeatureVector> features;
        features.reserve(bounds.segment_count());
        for (int s = 0; s < bounds.segment_count(); ++s) {
            const auto [begin, end] = bounds.segment(s);
            features.push_back(featurize(stream, begin, end, f));
        }

        // The library is updated with the whole channel first; selection
        // runs against the updated set.
        if (learn) {
            for (const auto& feature : features) lib.observe(feature);
        }

        std::vector<int> tau_k;
        tau_k.reserve(features.size());
        for (const auto& feature : features)
            tau_k.push_back(lib.best_primitive(feature).first);
        proto.tau.push_back(std::move(tau_k));
    }

    proto.rho.reserve(d.objects.size());
    for (const auto& s : d.objects)
        proto.rho.push_back(estimate_object_dist(s, catalog.object_count()));
    proto.lambda = estimate_location_dist(d.location, catalog.location_count());
    return proto;
}

} // namespace omcl
