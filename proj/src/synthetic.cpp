#include "hwime/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hwime::synthetic {

namespace {

using Waypoints = std::vector<std::pair<int, int>>;

// Skeleton strokes per digit; digit 4 uses two strokes so multi-stroke
// matching (and the pen-up gap penalty) gets exercised.
const std::vector<std::vector<Waypoints>>& skeletons() {
  static const std::vector<std::vector<Waypoints>> glyphs = {
      /*0*/ {{{50, 10}, {20, 30}, {15, 70}, {20, 110}, {50, 130}, {80, 110}, {85, 70}, {80, 30}, {50, 10}}},
      /*1*/ {{{40, 30}, {55, 12}, {55, 130}}},
      /*2*/ {{{20, 40}, {35, 14}, {65, 12}, {80, 38}, {70, 70}, {40, 100}, {18, 128}, {85, 128}}},
      /*3*/ {{{22, 25}, {45, 12}, {70, 20}, {75, 45}, {55, 65}, {72, 85}, {75, 110}, {50, 128}, {22, 115}}},
      /*4*/ {{{65, 12}, {18, 90}, {85, 90}}, {{65, 40}, {65, 130}}},
      /*5*/ {{{78, 14}, {30, 14}, {25, 60}, {55, 55}, {78, 75}, {75, 105}, {50, 128}, {22, 118}}},
      /*6*/ {{{70, 15}, {40, 35}, {25, 75}, {28, 110}, {55, 130}, {75, 112}, {72, 85}, {48, 75}, {30, 90}}},
      /*7*/ {{{18, 14}, {82, 14}, {45, 130}}},
      /*8*/ {{{50, 70}, {25, 45}, {50, 12}, {75, 45}, {50, 70}, {22, 100}, {50, 130}, {80, 100}, {50, 70}}},
      /*9*/ {{{75, 30}, {50, 12}, {25, 30}, {28, 55}, {52, 68}, {75, 52}, {75, 30}, {70, 95}, {55, 130}}},
  };
  return glyphs;
}

int16_t clamp_grid(int v) { return static_cast<int16_t>(std::clamp(v, 0, 175)); }

void push_distinct(std::vector<Point>& points, int16_t x, int16_t y, uint32_t t) {
  if (!points.empty() && points.back().x == x && points.back().y == y) return;
  points.push_back({x, y, t});
}

}  // namespace

Sample make_glyph(int digit, uint64_t seed, int jitter) {
  const auto& strokes = skeletons().at(static_cast<size_t>(digit));
  SplitMix64 rng(seed);

  Sample sample;
  sample.label = std::to_string(digit);
  uint32_t t = 0;

  for (const Waypoints& waypoints : strokes) {
    std::vector<Point> points;
    for (size_t w = 0; w + 1 < waypoints.size(); ++w) {
      auto [x1, y1] = waypoints[w];
      auto [x2, y2] = waypoints[w + 1];
      double len = std::hypot(double(x2 - x1), double(y2 - y1));
      int steps = std::max(1, static_cast<int>(std::lround(len / 8.0)));
      int from = w == 0 ? 0 : 1;
      for (int s = from; s <= steps; ++s) {
        int x = static_cast<int>(std::lround(x1 + (x2 - x1) * double(s) / steps));
        int y = static_cast<int>(std::lround(y1 + (y2 - y1) * double(s) / steps));
        if (jitter > 0) {
          x += static_cast<int>(rng.next_below(2 * jitter + 1)) - jitter;
          y += static_cast<int>(rng.next_below(2 * jitter + 1)) - jitter;
        }
        push_distinct(points, clamp_grid(x), clamp_grid(y), t);
        t += 10;
      }
    }
    if (points.size() < 2) points.push_back({clamp_grid(points.back().x + 1), points.back().y, t});
    sample.strokes.push_back(Stroke{std::move(points)});
  }
  return sample;
}

SamplePool make_glyph_pool(const std::string& name, int per_class,
                           uint64_t seed_base, int jitter, uint32_t id_base) {
  SamplePool pool;
  pool.source_name = name;
  uint32_t id = id_base;
  for (int digit = 0; digit <= 9; ++digit) {
    for (int k = 0; k < per_class; ++k) {
      Sample sample = make_glyph(digit, seed_base + uint64_t(digit) * 1000 + uint64_t(k), jitter);
      sample.id = id++;
      pool.samples.push_back(std::move(sample));
    }
  }
  return pool;
}

Sample random_sample(SplitMix64& rng, uint32_t id) {
  static const char* kLabels[] = {"a", "b", "x", "7", "永", "水", "one", "π"};

  Sample sample;
  sample.id = id;
  sample.label = kLabels[rng.next_below(std::size(kLabels))];

  size_t stroke_count = 1 + rng.next_below(4);
  uint32_t t = 0;
  for (size_t s = 0; s < stroke_count; ++s) {
    std::vector<Point> points;
    int x = static_cast<int>(rng.next_below(176));
    int y = static_cast<int>(rng.next_below(176));
    points.push_back({static_cast<int16_t>(x), static_cast<int16_t>(y), t});
    t += 10;

    bool dot = rng.next_below(8) == 0;
    if (!dot) {
      size_t point_count = 2 + rng.next_below(19);
      for (size_t p = 1; p < point_count; ++p) {
        int nx, ny;
        do {
          nx = std::clamp(x + static_cast<int>(rng.next_below(17)) - 8, 0, 175);
          ny = std::clamp(y + static_cast<int>(rng.next_below(17)) - 8, 0, 175);
        } while (nx == x && ny == y);
        x = nx;
        y = ny;
        points.push_back({static_cast<int16_t>(x), static_cast<int16_t>(y), t});
        t += 10;
      }
    }
    sample.strokes.push_back(Stroke{std::move(points)});
  }
  return sample;
}

SamplePool random_pool(const std::string& name, size_t count, uint64_t seed) {
  SplitMix64 rng(seed);
  SamplePool pool;
  pool.source_name = name;
  pool.samples.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    pool.samples.push_back(random_sample(rng, static_cast<uint32_t>(i)));
  }
  return pool;
}

std::vector<std::vector<std::pair<int16_t, int16_t>>> coordinates(const Sample& sample) {
  std::vector<std::vector<std::pair<int16_t, int16_t>>> out;
  out.reserve(sample.strokes.size());
  for (const Stroke& stroke : sample.strokes) {
    std::vector<std::pair<int16_t, int16_t>> pts;
    pts.reserve(stroke.points.size());
    for (const Point& p : stroke.points) pts.emplace_back(p.x, p.y);
    out.push_back(std::move(pts));
  }
  return out;
}

}  // namespace hwime::synthetic
