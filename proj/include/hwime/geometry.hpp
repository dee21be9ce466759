#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwime {

// Grid coordinates are abstract pixels in signed 16-bit range. t is the
// nominal time in milliseconds since the start of the sample; files carry no
// timestamps, replay synthesizes them at a fixed cadence.
struct Point {
  int16_t x = 0;
  int16_t y = 0;
  uint32_t t = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// One continuous pen contact. Non-empty, timestamps non-decreasing.
struct Stroke {
  std::vector<Point> points;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

// A labeled handwritten character.
struct Sample {
  uint32_t id = 0;
  std::string label;            // UTF-8, at least one codepoint
  std::vector<Stroke> strokes;  // at least one stroke

  friend bool operator==(const Sample&, const Sample&) = default;
};

enum class EventKind : uint8_t { Down = 0, Move = 1, Up = 2 };

const char* to_string(EventKind kind);

// Unit of wire replay. A well-formed stream is a concatenation of per-stroke
// runs shaped Down, Move*, Up with non-decreasing t across the whole stream.
struct TouchEvent {
  EventKind kind = EventKind::Down;
  int16_t x = 0;
  int16_t y = 0;
  uint32_t t = 0;

  friend bool operator==(const TouchEvent&, const TouchEvent&) = default;
};

// Which previous point the thinning rule measures against: the last kept
// point (greedy thinning) or the last raw input point.
enum class ResampleAnchor : uint8_t { Kept, Raw };

// Touch-screen point-dropping model. A threshold of 0 disables that filter.
struct ResampleConfig {
  uint32_t time_threshold_ms = 0;
  double distance_threshold = 0.0;
  ResampleAnchor anchor = ResampleAnchor::Kept;
};

struct BoundingBox {
  int32_t min_x = 0;
  int32_t min_y = 0;
  int32_t max_x = 0;
  int32_t max_y = 0;

  int32_t width() const { return max_x - min_x; }
  int32_t height() const { return max_y - min_y; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Tight axis-aligned box over all points of all strokes.
BoundingBox bounding_box(const Sample& sample);

// Throws std::invalid_argument if the sample breaks a structural invariant
// (empty label, no strokes, empty stroke, decreasing timestamps).
void validate(const Sample& sample);

size_t point_count(const Sample& sample);

}  // namespace hwime
