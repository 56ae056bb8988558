#pragma once

#include <utility>
#include <vector>

#include "omcl/types.hpp"

namespace omcl {

struct SegmentationParams {
    double speed_threshold = 0.05; // m/s
    int min_len = 15;              // samples
    int max_len = 90;              // samples
    int smoothing_window = 5;      // samples, odd

    // Throws ValidationError. Requires max_len >= 2*min_len so that
    // equal subdivision of an over-long segment can always land every
    // piece inside [min_len, max_len].
    void check() const;
};

// Cut indices {t_1 < ... < t_{N-1}} strictly inside (0, T). Segment n is
// the half-open sample range [t_{n-1}, t_n) with t_0 = 0 and t_N = T+1,
// so the segments tile the stream with no gaps or overlaps.
struct SegmentBoundaries {
    std::vector<int> cut_indices;
    int total_samples = 0;

    int segment_count() const { return static_cast<int>(cut_indices.size()) + 1; }
    std::pair<int, int> segment(int n) const; // [begin, end)
};

// Speed magnitude per sample: central finite differences on positions
// (one-sided at the ends) scaled by sample_rate, then smoothed with a
// centered moving average truncated at the stream edges.
std::vector<double> speed_profile(const MotionStream& stream, double sample_rate,
                                  int smoothing_window);

// Low-velocity crossing segmentation. Cut candidates come from the
// below-threshold regions of the smoothed speed profile: a brief dip is cut
// at its minimum (earliest on ties), a rest of min_len or more samples at
// its entry/exit crossings. Candidates are kept at least min_len apart,
// earliest first; any resulting segment longer than max_len is split by
// equal-length subdivision. When every sample is below the threshold the
// profile is uninformative and the stream falls straight through to the
// subdivision rule.
SegmentBoundaries segment_stream(const MotionStream& stream, double sample_rate,
                                 const SegmentationParams& params);

} // namespace omcl
