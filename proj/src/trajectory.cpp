#include "hwime/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace hwime {

namespace {

// Round-half-away-from-zero of num/den for num >= 0, den > 0, in exact
// integer arithmetic so replicas are byte-identical across implementations.
int64_t div_round_half_away(int64_t num, int64_t den) {
  return (2 * num + den) / (2 * den);
}

int16_t scale_coord(int32_t value, int32_t min, int64_t target, int64_t extent) {
  if (extent == 0) return 0;  // zero-extent axis: translation only
  return static_cast<int16_t>(
      div_round_half_away(static_cast<int64_t>(value - min) * target, extent));
}

}  // namespace

Sample normalize_size(const Sample& sample, int target) {
  if (target < 1) throw std::invalid_argument("normalization target must be >= 1");
  if (target > 32767) throw std::invalid_argument("normalization target exceeds grid range");
  BoundingBox box = bounding_box(sample);
  const int64_t extent = std::max(box.width(), box.height());

  Sample out = sample;
  for (Stroke& stroke : out.strokes) {
    for (Point& p : stroke.points) {
      p.x = scale_coord(p.x, box.min_x, target, extent);
      p.y = scale_coord(p.y, box.min_y, target, extent);
    }
  }
  return out;
}

std::vector<TouchEvent> to_touch_events(const Sample& sample, uint32_t t1_ms) {
  if (t1_ms < 1) throw std::invalid_argument("t1 must be >= 1 ms");
  validate(sample);

  std::vector<TouchEvent> events;
  events.reserve(point_count(sample) + sample.strokes.size());
  uint64_t tick = 0;
  auto stamp = [&]() { return static_cast<uint32_t>(tick++ * t1_ms); };

  for (const Stroke& stroke : sample.strokes) {
    const std::vector<Point>& pts = stroke.points;
    if (pts.size() == 1) {
      // A dot still needs a well-formed Down/Up pair on the wire.
      events.push_back({EventKind::Down, pts[0].x, pts[0].y, stamp()});
      events.push_back({EventKind::Up, pts[0].x, pts[0].y, stamp()});
      continue;
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      EventKind kind = i == 0                ? EventKind::Down
                       : i == pts.size() - 1 ? EventKind::Up
                                             : EventKind::Move;
      events.push_back({kind, pts[i].x, pts[i].y, stamp()});
    }
  }
  return events;
}

std::vector<Stroke> from_touch_events(std::span<const TouchEvent> events) {
  std::vector<Stroke> strokes;
  std::vector<Point> open;
  bool in_stroke = false;
  uint32_t prev_t = 0;

  for (size_t i = 0; i < events.size(); ++i) {
    const TouchEvent& ev = events[i];
    if (i > 0 && ev.t < prev_t) {
      throw MalformedStream("decreasing timestamp at event " + std::to_string(i));
    }
    prev_t = ev.t;

    switch (ev.kind) {
      case EventKind::Down:
        if (in_stroke) {
          throw MalformedStream("Down inside an open stroke at event " + std::to_string(i));
        }
        in_stroke = true;
        open.clear();
        open.push_back({ev.x, ev.y, ev.t});
        break;
      case EventKind::Move:
        if (!in_stroke) {
          throw MalformedStream("Move before Down at event " + std::to_string(i));
        }
        open.push_back({ev.x, ev.y, ev.t});
        break;
      case EventKind::Up: {
        if (!in_stroke) {
          throw MalformedStream("Up before Down at event " + std::to_string(i));
        }
        // Bare Down/Up at the same coordinates is the wire form of a dot.
        bool collapses = open.size() == 1 && open[0].x == ev.x && open[0].y == ev.y;
        if (!collapses) open.push_back({ev.x, ev.y, ev.t});
        strokes.push_back(Stroke{std::move(open)});
        open = {};
        in_stroke = false;
        break;
      }
    }
  }
  if (in_stroke) throw MalformedStream("stream ends with an open stroke");
  if (strokes.empty()) throw MalformedStream("stream contains no strokes");
  return strokes;
}

namespace {

template <typename GapFromAnchor>
std::vector<Point> thin(std::span<const Point> points, GapFromAnchor far_enough,
                        ResampleAnchor anchor) {
  if (points.size() <= 1) return {points.begin(), points.end()};

  std::vector<Point> kept;
  kept.reserve(points.size());
  kept.push_back(points.front());
  const Point* ref = &points.front();

  for (size_t i = 1; i + 1 < points.size(); ++i) {
    if (far_enough(*ref, points[i])) {
      kept.push_back(points[i]);
      if (anchor == ResampleAnchor::Kept) ref = &kept.back();
    }
    if (anchor == ResampleAnchor::Raw) ref = &points[i];
  }
  kept.push_back(points.back());  // endpoints always survive
  return kept;
}

}  // namespace

std::vector<Point> resample_time(std::span<const Point> points,
                                 uint32_t threshold_ms, ResampleAnchor anchor) {
  return thin(
      points,
      [threshold_ms](const Point& ref, const Point& p) {
        return p.t - ref.t >= threshold_ms;
      },
      anchor);
}

std::vector<Point> resample_distance(std::span<const Point> points,
                                     double threshold, ResampleAnchor anchor) {
  return thin(
      points,
      [threshold](const Point& ref, const Point& p) {
        return std::hypot(double(p.x) - ref.x, double(p.y) - ref.y) >= threshold;
      },
      anchor);
}

std::vector<Stroke> apply_resampling(const std::vector<Stroke>& strokes,
                                     const ResampleConfig& config) {
  std::vector<Stroke> out;
  out.reserve(strokes.size());
  for (const Stroke& stroke : strokes) {
    std::vector<Point> pts =
        resample_time(stroke.points, config.time_threshold_ms, config.anchor);
    pts = resample_distance(pts, config.distance_threshold, config.anchor);
    out.push_back(Stroke{std::move(pts)});
  }
  return out;
}

}  // namespace hwime
