#pragma once

#include <vector>

#include "omcl/types.hpp"

namespace omcl {

using FeatureVector = std::vector<double>;

// Axis-angle vector of a unit quaternion, angle in [0, pi].
Eigen::Vector3d rotation_vector(const Eigen::Quaterniond& q);

// Embeds the sub-trajectory [begin, end) of a motion stream as a vector of
// dimension 6*resample_points: the segment is resampled to resample_points
// instants (linear interpolation of positions, slerp of orientations),
// positions are translated so the first point is the origin, orientations
// are expressed relative to the first frame and encoded as rotation
// vectors, and the six coordinates are interleaved per point.
FeatureVector featurize(const MotionStream& stream, int begin, int end,
                        int resample_points);

} // namespace omcl
