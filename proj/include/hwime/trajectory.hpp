#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hwime/geometry.hpp"

namespace hwime {

// Event stream that does not parse as Down, Move*, Up runs.
class MalformedStream : public std::runtime_error {
 public:
  explicit MalformedStream(const std::string& what) : std::runtime_error(what) {}
};

// Translates the sample so the bounding-box minimum lands on (0,0) and scales
// it uniformly so the larger box extent equals `target`, preserving aspect.
// Coordinates round half away from zero (pure integer arithmetic, so results
// are identical across platforms). A zero-extent axis is translated only; a
// fully degenerate sample (all points coincide) comes back as the translated
// single point. Timestamps are untouched.
Sample normalize_size(const Sample& sample, int target);

// Flattens a sample into a replayable event stream on a uniform t1_ms cadence
// starting at t=0. Per stroke: first point Down, interior Move, last Up. A
// one-point stroke emits Down then Up at the same coordinates one tick apart.
// The cadence runs on across stroke boundaries.
std::vector<TouchEvent> to_touch_events(const Sample& sample, uint32_t t1_ms);

// Inverse of to_touch_events: each Down..Up run becomes one stroke. A bare
// Down/Up pair at identical coordinates collapses back to a one-point stroke.
// Throws MalformedStream on shape violations (Move/Up before Down, Down inside
// an open stroke, trailing open stroke, decreasing timestamps).
std::vector<Stroke> from_touch_events(std::span<const TouchEvent> events);

// Greedy thinning: the first point is always kept, each later point survives
// iff its time gap from the anchor (last kept point by default, last raw point
// with ResampleAnchor::Raw) is at least the threshold. The final point is
// force-kept so stroke endpoints survive. Threshold 0 is the identity.
std::vector<Point> resample_time(std::span<const Point> points,
                                 uint32_t threshold_ms,
                                 ResampleAnchor anchor = ResampleAnchor::Kept);

// Same rule with Euclidean distance from the anchor point.
std::vector<Point> resample_distance(std::span<const Point> points,
                                     double threshold,
                                     ResampleAnchor anchor = ResampleAnchor::Kept);

// Applies resample_time then resample_distance to every stroke. That order is
// fixed; with either threshold 0 the composition reduces to the other filter.
std::vector<Stroke> apply_resampling(const std::vector<Stroke>& strokes,
                                     const ResampleConfig& config);

}  // namespace hwime
