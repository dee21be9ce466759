#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hwime/dataset.hpp"
#include "hwime/geometry.hpp"
#include "hwime/rng.hpp"

namespace hwime::synthetic {

// Synthetic stroke data for demos, benchmarks and tests: no external
// handwriting database is needed to exercise the full pipeline.
//
// Ten polyline digit glyphs on a ~100x140 grid, densified along each segment
// and jittered per point. Seed-deterministic; consecutive points within a
// stroke are always distinct and coordinates stay within [0, 175], so size
// normalization to 180 scales up and keeps them distinct.
Sample make_glyph(int digit, uint64_t seed, int jitter);

// per_class instances of each digit with labels "0".."9". Ids run from
// id_base in digit-major order; seeds derive from seed_base.
SamplePool make_glyph_pool(const std::string& name, int per_class,
                           uint64_t seed_base, int jitter, uint32_t id_base = 0);

// Random valid sample: 1..4 strokes, occasional one-point dot strokes,
// random-walk geometry bounded to [0, 175] with distinct consecutive points.
Sample random_sample(SplitMix64& rng, uint32_t id);

SamplePool random_pool(const std::string& name, size_t count, uint64_t seed);

// Stroke-structured coordinates, the shape the recognizer sees.
std::vector<std::vector<std::pair<int16_t, int16_t>>> coordinates(const Sample& sample);

}  // namespace hwime::synthetic
