#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cstdint>
#include <string>
#include <vector>

#include "omcl/error.hpp"

namespace omcl {

// Ordered sets of object and location identifiers. Indices are stable for
// the lifetime of a registry; streams refer to entries by index.
struct EnvironmentCatalog {
    std::string name;
    std::vector<std::string> objects;
    std::vector<std::string> locations;

    int object_count() const { return static_cast<int>(objects.size()); }
    int location_count() const { return static_cast<int>(locations.size()); }

    // Returns -1 when the identifier is not in the catalog.
    int object_index(const std::string& id) const;
    int location_index(const std::string& id) const;

    // Throws CatalogError on empty or duplicated identifiers.
    void check() const;
};

// Position + orientation track of one body element. Both tracks have the
// same length T+1 >= 2; quaternions are unit within 1e-6 and stored with a
// non-negative scalar part (q and -q name the same rotation).
struct MotionStream {
    std::vector<Eigen::Vector3d> positions;
    std::vector<Eigen::Quaterniond> orientations;

    int sample_count() const { return static_cast<int>(positions.size()); }
};

// Per-timestep binary indicators over the object catalog.
struct ObjectStream {
    std::vector<std::vector<std::uint8_t>> observations;

    int sample_count() const { return static_cast<int>(observations.size()); }
};

// Per-timestep index into the location catalog.
struct LocationStream {
    std::vector<int> locations;

    int sample_count() const { return static_cast<int>(locations.size()); }
};

// One recorded performance: K motion streams, M object streams, one
// location stream, all time-aligned with T+1 samples.
struct Demonstration {
    std::vector<MotionStream> motion;
    std::vector<ObjectStream> objects;
    LocationStream location;
    std::string label; // empty = unlabeled
    double sample_rate = 60.0;

    int motion_channels() const { return static_cast<int>(motion.size()); }
    int object_channels() const { return static_cast<int>(objects.size()); }
    int sample_count() const {
        return motion.empty() ? 0 : motion.front().sample_count();
    }
    int time_steps() const { return sample_count() - 1; } // T
};

struct Violation {
    std::string stream;  // e.g. "motion[1].orientations"
    std::string message;
};

// Empty result iff every type invariant holds. Violations are data, not
// errors: callers decide whether to throw.
std::vector<Violation> validate_demonstration(const Demonstration& d,
                                              const EnvironmentCatalog& catalog);

// Convenience wrapper: throws ValidationError listing all violations.
void require_valid(const Demonstration& d, const EnvironmentCatalog& catalog);

} // namespace omcl
