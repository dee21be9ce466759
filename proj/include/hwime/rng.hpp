#pragma once

#include <cstdint>

namespace hwime {

// SplitMix64 (Vigna's public-domain mixer). This exact sequence is part of
// the replica-file contract: any implementation that reproduces it, the
// replica_seed derivation and the next_below() reduction below reproduces
// replica files byte for byte. See docs/FORMATS.md.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Reduction is a plain modulo, chosen for trivial cross-language
  // reproducibility; the bias is irrelevant at benchmark pool sizes.
  uint64_t next_below(uint64_t bound) { return next() % bound; }

 private:
  uint64_t state_;
};

// Seed for replica `index` (1-based): the index-th output of a master
// SplitMix64 stream.
inline uint64_t replica_seed(uint64_t master_seed, uint32_t index) {
  SplitMix64 master(master_seed);
  uint64_t s = 0;
  for (uint32_t i = 0; i < index; ++i) s = master.next();
  return s;
}

}  // namespace hwime
