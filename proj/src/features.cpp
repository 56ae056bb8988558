#include "omcl/features.hpp"

#include <cmath>

namespace omcl {

Eigen::Vector3d rotation_vector(const Eigen::Quaterniond& q) {
    Eigen::Quaterniond c = q;
    if (c.w() < 0.0) c.coeffs() = -c.coeffs();
    const double sin_half = c.vec().norm();
    if (sin_half < 1e-12) return 2.0 * c.vec(); // small-angle limit
    const double angle = 2.0 * std::atan2(sin_half, c.w());
    return c.vec() * (angle / sin_half);
}

FeatureVector featurize(const MotionStream& stream, int begin, int end,
                        int resample_points) {
    const int len = end - begin;
    if (len < 2)
        throw ValidationError("featurize: segment needs at least 2 samples, got " +
                              std::to_string(len));
    if (resample_points < 2)
        throw ValidationError("featurize: resample count must be >= 2");
    if (begin < 0 || end > stream.sample_count())
        throw ValidationError("featurize: segment range outside stream");

    const int f = resample_points;
    std::vector<Eigen::Vector3d> pos(f);
    std::vector<Eigen::Quaterniond> rot(f);
    for (int i = 0; i < f; ++i) {
        const double s = begin + (static_cast<double>(i) * (len - 1)) / (f - 1);
        const int i0 = std::min(static_cast<int>(s), end - 2);
        const double frac = s - i0;
        pos[i] = stream.positions[i0] * (1.0 - frac) + stream.positions[i0 + 1] * frac;
        rot[i] = (frac == 0.0) ? stream.orientations[i0]
                               : stream.orientations[i0].slerp(frac, stream.orientations[i0 + 1]);
    }

    FeatureVector feature(6 * f, 0.0);
    const Eigen::Vector3d origin = pos[0];
    const Eigen::Quaterniond base = rot[0].conjugate();
    for (int i = 0; i < f; ++i) {
        const Eigen::Vector3d dp = pos[i] - origin;
        const Eigen::Vector3d rv = rotation_vector(base * rot[i]);
        feature[6 * i + 0] = dp.x();
        feature[6 * i + 1] = dp.y();
        feature[6 * i + 2] = dp.z();
        feature[6 * i + 3] = rv.x();
        feature[6 * i + 4] = rv.y();
        feature[6 * i + 5] = rv.z();
    }
    return feature;
}

} // namespace omcl
