#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hwime/dataset.hpp"
#include "hwime/metrics.hpp"

namespace hwime {

// Every timing symbol of the replay contract in one place. t1 is the nominal
// gap between replayed points, t2 the post-sample wait for a recognition
// commit (the guidance floor is 300 ms). time_scale shrinks real sleeps
// without touching nominal timestamps.
struct SessionConfig {
  uint32_t t1_ms = 6;
  uint32_t t2_ms = 500;
  int normalization_target = 180;
  double time_scale = 1.0;
  std::vector<std::string> agents;  // host:port endpoints, non-empty
  std::string system_name = "agent";
  std::optional<uint64_t> seed;     // echoed into report metadata
};

// Throws std::invalid_argument when a field is out of contract
// (t1 < 1, t2 <= 300, non-positive scale or target, no agents).
void validate(const SessionConfig& config);

struct RecognitionRecord {
  uint32_t sample_index = 0;
  std::string ground_truth;
  Outcome outcome = Outcome::NoResult;
  std::string recognized_text;          // set iff a Result arrived
  std::optional<uint32_t> latency_ms;   // set iff a Result arrived
  std::string reason;                   // NoResult only, e.g. "timeout"
};

// Canonical-composition normalization on both strings, then exact codepoint
// equality; a missing observation is NoResult.
Outcome classify_result(std::string_view ground_truth,
                        const std::optional<std::string>& observed);

inline MergeableCounter accumulate(MergeableCounter counter,
                                   const RecognitionRecord& record) {
  return accumulate(counter, record.outcome);
}

// Entry resolution against the loaded pools; throws when a pool name repeats
// or an entry is unresolvable.
std::vector<const Sample*> resolve_replica(const TestReplica& replica,
                                           const std::vector<SamplePool>& pools);

// Replay position -> ground-truth label, the out-of-band oracle input.
LabelMap labels_for_replica(const TestReplica& replica,
                            const std::vector<SamplePool>& pools);

// Drives the full replay loop over one replica: normalize, flatten to touch
// events, stream with t1 pacing, wait up to t2 for each Result, classify.
// Samples are partitioned round-robin across agents and records re-merged in
// replica order. Always returns exactly one record per replica entry; agent
// faults surface as NoResult records with a reason, never as lost records.
std::vector<RecognitionRecord> run_session(const SessionConfig& config,
                                           const TestReplica& replica,
                                           const std::vector<SamplePool>& pools);

// Enforces a minimum wall-clock gap between consecutive send stamps.
class Pacer {
 public:
  explicit Pacer(std::chrono::microseconds min_gap) : min_gap_(min_gap) {}

  // Sleeps until the gap from the previous stamp is at least min_gap, then
  // stamps. The first call stamps immediately.
  std::chrono::steady_clock::time_point pace();

 private:
  std::chrono::microseconds min_gap_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

struct ReportMetadata {
  std::string set_name;
  uint32_t replica_index = 1;
  uint64_t seed = 0;
  std::string system = "agent";
};

// Writes records.jsonl (one record per line), summary.json and table.txt
// under `dir`. Pure function of its arguments: identical inputs produce
// byte-identical files.
void write_report(std::span<const RecognitionRecord> records,
                  const ReportMetadata& metadata, const std::string& dir);

std::string records_jsonl(std::span<const RecognitionRecord> records);
std::string summary_json(std::span<const RecognitionRecord> records,
                         const ReportMetadata& metadata);

struct ReplicaSummary {
  std::string set_name;
  std::string system;
  ReplicaRow row;
};

ReplicaSummary parse_summary(std::string_view body);
ReplicaSummary load_summary_file(const std::string& path);

// Groups per-replica summaries into one table column per system. All
// summaries must share one set name; columns are ordered by system name.
std::vector<AccuracyReport> merge_summaries(std::span<const ReplicaSummary> summaries);

}  // namespace hwime
