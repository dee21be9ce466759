#include "hwime/geometry.hpp"

#include <algorithm>

namespace hwime {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Down: return "Down";
    case EventKind::Move: return "Move";
    case EventKind::Up: return "Up";
  }
  return "?";
}

BoundingBox bounding_box(const Sample& sample) {
  validate(sample);
  const Point& first = sample.strokes.front().points.front();
  BoundingBox box{first.x, first.y, first.x, first.y};
  for (const Stroke& stroke : sample.strokes) {
    for (const Point& p : stroke.points) {
      box.min_x = std::min<int32_t>(box.min_x, p.x);
      box.min_y = std::min<int32_t>(box.min_y, p.y);
      box.max_x = std::max<int32_t>(box.max_x, p.x);
      box.max_y = std::max<int32_t>(box.max_y, p.y);
    }
  }
  return box;
}

void validate(const Sample& sample) {
  if (sample.label.empty()) {
    throw std::invalid_argument("sample label must be non-empty");
  }
  if (sample.strokes.empty()) {
    throw std::invalid_argument("sample must have at least one stroke");
  }
  for (const Stroke& stroke : sample.strokes) {
    if (stroke.points.empty()) {
      throw std::invalid_argument("stroke must have at least one point");
    }
    for (size_t i = 1; i < stroke.points.size(); ++i) {
      if (stroke.points[i].t < stroke.points[i - 1].t) {
        throw std::invalid_argument("stroke timestamps must be non-decreasing");
      }
    }
  }
}

size_t point_count(const Sample& sample) {
  size_t n = 0;
  for (const Stroke& stroke : sample.strokes) n += stroke.points.size();
  return n;
}

}  // namespace hwime
