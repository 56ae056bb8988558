#include "omcl/segmentation.hpp"

#include <algorithm>
#include <cmath>

namespace omcl {

void SegmentationParams::check() const {
    if (min_len < 2) throw ValidationError("segmentation: min_len must be >= 2");
    if (max_len < 2 * min_len)
        throw ValidationError("segmentation: max_len must be >= 2*min_len");
    if (speed_threshold < 0.0)
        throw ValidationError("segmentation: speed_threshold must be >= 0");
    if (smoothing_window < 1 || smoothing_window % 2 == 0)
        throw ValidationError("segmentation: smoothing_window must be odd and >= 1");
}

std::pair<int, int> SegmentBoundaries::segment(int n) const {
    const int begin = (n == 0) ? 0 : cut_indices[n - 1];
    const int end = (n == segment_count() - 1) ? total_samples : cut_indices[n];
    return {begin, end};
}

std::vector<double> speed_profile(const MotionStream& stream, double sample_rate,
                                  int smoothing_window) {
    const int n = stream.sample_count();
    std::vector<double> speed(n, 0.0);
    for (int t = 0; t < n; ++t) {
        Eigen::Vector3d v;
        if (t == 0) {
            v = (stream.positions[1] - stream.positions[0]) * sample_rate;
        } else if (t == n - 1) {
            v = (stream.positions[n - 1] - stream.positions[n - 2]) * sample_rate;
        } else {
            v = (stream.positions[t + 1] - stream.positions[t - 1]) * (sample_rate / 2.0);
        }
        speed[t] = v.norm();
    }

    const int half = (smoothing_window - 1) / 2;
    if (half == 0) return speed;
    std::vector<double> smoothed(n, 0.0);
    for (int t = 0; t < n; ++t) {
        const int lo = std::max(0, t - half);
        const int hi = std::min(n - 1, t + half);
        double sum = 0.0;
        for (int i = lo; i <= hi; ++i) sum += speed[i];
        smoothed[t] = sum / (hi - lo + 1);
    }
    return smoothed;
}

SegmentBoundaries segment_stream(const MotionStream& stream, double sample_rate,
                                 const SegmentationParams& params) {
    params.check();
    const int n = stream.sample_count();
    if (n < params.min_len)
        throw ValidationError("segmentation: stream of " + std::to_string(n) +
                              " samples is shorter than min_len " +
                              std::to_string(params.min_len));

    const std::vector<double> speed =
        speed_profile(stream, sample_rate, params.smoothing_window);

    const bool all_slow =
        std::all_of(speed.begin(), speed.end(),
                    [&](double s) { return s < params.speed_threshold; });

    // Candidate cuts come from the maximal below-threshold regions of the
    // profile: a brief dip contributes its minimum (earliest on ties), a
    // rest phase at least min_len long contributes its entry and exit
    // crossings so the moving strokes on either side stay unpadded.
    std::vector<int> candidates;
    if (!all_slow) {
        int region_start = -1;
        for (int i = 0; i <= n; ++i) {
            const bool below = (i < n) && speed[i] < params.speed_threshold;
            if (below && region_start < 0) region_start = i;
            if (!below && region_start >= 0) {
                const int a = region_start, b = i - 1;
                region_start = -1;
                if (b - a + 1 >= params.min_len) {
                    if (a > 0) candidates.push_back(a);
                    if (b < n - 1) candidates.push_back(b);
                } else {
                    int best = a;
                    for (int k = a + 1; k <= b; ++k)
                        if (speed[k] < speed[best]) best = k;
                    if (best > 0 && best < n - 1) candidates.push_back(best);
                }
            }
        }
    }

    std::vector<int> cuts;
    int prev = 0;
    for (int c : candidates) {
        if (c - prev < params.min_len) continue;
        if (n - c < params.min_len) continue;
        cuts.push_back(c);
        prev = c;
    }

    // Equal subdivision of every segment still longer than max_len.
    std::vector<int> final_cuts;
    int begin = 0;
    auto subdivide = [&](int seg_begin, int seg_end) {
        const int len = seg_end - seg_begin;
        if (len > params.max_len) {
            const int pieces = (len + params.max_len - 1) / params.max_len;
            const int base = len / pieces;
            const int extra = len % pieces;
            int at = seg_begin;
            for (int p = 0; p + 1 < pieces; ++p) {
                at += base + (p < extra ? 1 : 0);
                final_cuts.push_back(at);
            }
        }
        if (seg_end < n) final_cuts.push_back(seg_end);
    };
    for (int cut : cuts) {
        subdivide(begin, cut);
        begin = cut;
    }
    subdivide(begin, n);

    SegmentBoundaries out;
    out.cut_indices = std::move(final_cuts);
    out.total_samples = n;
    return out;
}

} // namespace omcl
