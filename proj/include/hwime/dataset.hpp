#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hwime/geometry.hpp"

namespace hwime {

// A named collection of samples. Ids are unique within a pool; parse_hws
// assigns them 0..n-1 in file order.
struct SamplePool {
  std::string source_name;
  std::vector<Sample> samples;
};

// Whole-label membership set (labels may be multi-codepoint symbols).
struct Charset {
  std::string name;
  std::set<std::string> members;
};

struct ReplicaEntry {
  std::string source_name;
  uint32_t sample_id = 0;

  friend bool operator==(const ReplicaEntry&, const ReplicaEntry&) = default;
  friend auto operator<=>(const ReplicaEntry&, const ReplicaEntry&) = default;
};

// One drawn test set. Entries are ordered; no (source, id) pair repeats
// within a replica. `seed` is the master seed of the build that produced it.
struct TestReplica {
  std::string set_name;
  uint32_t replica_index = 1;  // 1-based
  uint64_t seed = 0;
  std::vector<ReplicaEntry> entries;
};

// Maps a replay position (0-based index into the replica) to the ground-truth
// label; consumed out-of-band by the oracle recognizer.
using LabelMap = std::unordered_map<uint32_t, std::string>;

enum class DatasetErrc {
  BadMagic,
  TruncatedFile,
  InvalidUtf8Label,
  ZeroStrokes,
  ZeroPoints,
  TrailingBytes,
  LabelTooLong,
  TooManyStrokes,
  TooManyPoints,
  TooManySamples,
  DuplicateEntry,
  EmptyCharset,
  PoolTooSmall,
  DuplicateSource,
  BadReplicaFile,
  BadLabelFile,
};

const char* to_string(DatasetErrc code);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(DatasetErrc code, size_t offset, const std::string& detail);

  DatasetErrc code() const { return code_; }
  size_t offset() const { return offset_; }

 private:
  DatasetErrc code_;
  size_t offset_;
};

// HWS1 container (layout in docs/FORMATS.md). Errors carry the byte offset
// at which the problem was detected.
SamplePool parse_hws(std::span<const uint8_t> bytes, std::string source_name);
std::vector<uint8_t> write_hws(const SamplePool& pool);

// Charset text: one label per line, '#' comment lines and blank lines
// ignored, duplicates rejected.
Charset load_charset(std::string_view body, std::string name);

// Keeps exactly the samples whose full label is a member, order preserved.
SamplePool filter_by_charset(const SamplePool& pool, const Charset& charset);

// Draws `replica_count` sets of `size` entries from the concatenated pools by
// partial Fisher-Yates over SplitMix64 (see docs/FORMATS.md). Deterministic in
// (pools, size, replica_count, seed). Pool source names must be distinct.
std::vector<TestReplica> build_replicas(const std::vector<SamplePool>& pools,
                                        size_t size, uint32_t replica_count,
                                        uint64_t seed, std::string set_name);

// Replica text file: "HWRL1 <set_name> <replica_index> <seed>" header then
// one "source<TAB>id" line per entry.
std::string format_replica(const TestReplica& replica);
TestReplica parse_replica(std::string_view body);

// Label file: one "position<TAB>label" line per entry.
std::string format_labels(const LabelMap& labels);
LabelMap parse_labels(std::string_view body);

// File helpers (thin wrappers over the byte/text forms above).
SamplePool load_hws_file(const std::string& path);
void save_hws_file(const SamplePool& pool, const std::string& path);
Charset load_charset_file(const std::string& path);
TestReplica load_replica_file(const std::string& path);
LabelMap load_labels_file(const std::string& path);

}  // namespace hwime
