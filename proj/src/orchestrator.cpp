#include "hwime/orchestrator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "hwime/net.hpp"
#include "hwime/text.hpp"
#include "hwime/trajectory.hpp"
#include "hwime/wire.hpp"

namespace hwime {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

constexpr std::chrono::milliseconds kHandshakeTimeout{5000};

std::chrono::microseconds scaled_us(uint32_t nominal_ms, double scale) {
  return std::chrono::microseconds(
      static_cast<int64_t>(std::max(0.0, nominal_ms * scale * 1000.0)));
}

}  // namespace

void validate(const SessionConfig& config) {
  if (config.t1_ms < 1) throw std::invalid_argument("t1 must be >= 1 ms");
  if (config.t2_ms <= 300) {
    throw std::invalid_argument("t2 must exceed 300 ms; recognizers commit late");
  }
  if (config.normalization_target < 1) {
    throw std::invalid_argument("normalization target must be >= 1");
  }
  if (!(config.time_scale > 0.0)) {
    throw std::invalid_argument("time scale must be positive");
  }
  if (config.agents.empty()) throw std::invalid_argument("at least one agent required");
}

Outcome classify_result(std::string_view ground_truth,
                        const std::optional<std::string>& observed) {
  if (!observed) return Outcome::NoResult;
  return text::canonical_equal(ground_truth, *observed) ? Outcome::Correct
                                                        : Outcome::Incorrect;
}

std::vector<const Sample*> resolve_replica(const TestReplica& replica,
                                           const std::vector<SamplePool>& pools) {
  std::unordered_map<std::string, std::unordered_map<uint32_t, const Sample*>> index;
  for (const SamplePool& pool : pools) {
    auto [it, inserted] = index.try_emplace(pool.source_name);
    if (!inserted) {
      throw DatasetError(DatasetErrc::DuplicateSource, 0, pool.source_name);
    }
    for (const Sample& sample : pool.samples) it->second.emplace(sample.id, &sample);
  }

  std::vector<const Sample*> resolved;
  resolved.reserve(replica.entries.size());
  for (const ReplicaEntry& entry : replica.entries) {
    auto pool_it = index.find(entry.source_name);
    if (pool_it == index.end()) {
      throw std::runtime_error("replica entry references unknown pool '" +
                               entry.source_name + "'");
    }
    auto sample_it = pool_it->second.find(entry.sample_id);
    if (sample_it == pool_it->second.end()) {
      throw std::runtime_error("replica entry " + entry.source_name + "/" +
                               std::to_string(entry.sample_id) + " not found");
    }
    resolved.push_back(sample_it->second);
  }
  return resolved;
}

LabelMap labels_for_replica(const TestReplica& replica,
                            const std::vector<SamplePool>& pools) {
  std::vector<const Sample*> resolved = resolve_replica(replica, pools);
  LabelMap labels;
  labels.reserve(resolved.size());
  for (size_t i = 0; i < resolved.size(); ++i) {
    labels.emplace(static_cast<uint32_t>(i), resolved[i]->label);
  }
  return labels;
}

std::chrono::steady_clock::time_point Pacer::pace() {
  if (last_) std::this_thread::sleep_until(*last_ + min_gap_);
  last_ = Clock::now();
  return *last_;
}

namespace {

struct Assignment {
  uint32_t position;
  const Sample* sample;
};

// One connection's worth of the session: streams its round-robin share of
// samples and fills the shared record slots it owns (disjoint across drivers,
// so no locking).
class PartitionDriver {
 public:
  PartitionDriver(const SessionConfig& config, const std::string& endpoint,
                  std::vector<Assignment> assignments,
                  std::vector<RecognitionRecord>& records)
      : config_(config),
        endpoint_(endpoint),
        assignments_(std::move(assignments)),
        records_(records) {}

  void run() {
    if (assignments_.empty()) return;
    try {
      auto [host, port] = net::parse_endpoint(endpoint_);
      socket_ = net::TcpSocket::connect(host, port);
    } catch (const net::NetError& err) {
      mark_rest(0, "connect-failed: " + std::string(err.what()));
      return;
    }

    try {
      send(wire::Hello{wire::kProtocolVersion});
      if (!await_hello_ack()) return;
      stream_samples();
    } catch (const net::NetError& err) {
      mark_rest(next_, "agent-closed: " + std::string(err.what()));
    } catch (const std::exception& err) {
      mark_rest(next_, std::string("internal-error: ") + err.what());
    }
  }

 private:
  enum class ReadStatus { Got, Timeout, Eof };

  void send(const wire::Message& msg) {
    if (auto violation = tracker_.accept(msg)) {
      throw std::logic_error("orchestrator produced " + *violation);
    }
    socket_.send_all(wire::encode_frame(msg));
  }

  // Next frame before the deadline; feeds the tracker. A frame that the
  // state machine rejects throws after marking, handled by the caller.
  ReadStatus read_message(Clock::time_point deadline, wire::Message& out) {
    std::vector<uint8_t> chunk(4096);
    for (;;) {
      if (auto item = decoder_.poll()) {
        if (item->status == wire::DecodeStatus::Error) {
          throw ProtocolFault(std::string("undecodable frame: ") +
                              to_string(item->error));
        }
        if (auto violation = tracker_.accept(item->message)) {
          throw ProtocolFault(*violation);
        }
        out = std::move(item->message);
        return ReadStatus::Got;
      }
      auto now = Clock::now();
      if (now >= deadline) return ReadStatus::Timeout;
      auto remaining = std::chrono::duration_cast<std::chrono::microseconds>(deadline - now);
      auto received = socket_.recv_some(chunk, remaining);
      if (!received) return ReadStatus::Timeout;
      if (*received == 0) return ReadStatus::Eof;
      decoder_.feed(std::span(chunk.data(), *received));
    }
  }

  struct ProtocolFault : std::runtime_error {
    explicit ProtocolFault(const std::string& what) : std::runtime_error(what) {}
  };

  bool await_hello_ack() {
    wire::Message msg;
    try {
      switch (read_message(Clock::now() + kHandshakeTimeout, msg)) {
        case ReadStatus::Got:
          break;
        case ReadStatus::Timeout:
          mark_rest(0, "handshake-timeout");
          return false;
        case ReadStatus::Eof:
          mark_rest(0, "agent-closed");
          return false;
      }
    } catch (const ProtocolFault& fault) {
      mark_rest(0, "protocol-violation: " + std::string(fault.what()));
      return false;
    }
    if (std::holds_alternative<wire::HelloAck>(msg)) return true;
    if (const auto* err = std::get_if<wire::AgentError>(&msg)) {
      mark_rest(0, "agent-error: " + err->detail);
      return false;
    }
    mark_rest(0, "protocol-violation: unexpected handshake reply");
    return false;
  }

  void stream_samples() {
    Pacer pacer(scaled_us(config_.t1_ms, config_.time_scale));

    for (next_ = 0; next_ < assignments_.size(); ++next_) {
      const Assignment& assignment = assignments_[next_];
      RecognitionRecord& record = records_[assignment.position];

      // A Result that straggles in after its timeout would otherwise be
      // pinned on the next sample; flush it while it is still attributable.
      try {
        drain_pending();
      } catch (const ProtocolFault& fault) {
        mark_rest(next_, "protocol-violation: " + std::string(fault.what()));
        return;
      }

      Sample normalized =
          normalize_size(*assignment.sample, config_.normalization_target);
      std::vector<TouchEvent> events = to_touch_events(normalized, config_.t1_ms);

      send(wire::SampleBegin{assignment.position});
      for (const TouchEvent& ev : events) {
        pacer.pace();
        send(wire::Touch{ev.kind, ev.x, ev.y, ev.t});
      }
      send(wire::SampleEnd{});

      auto deadline = Clock::now() + scaled_us(config_.t2_ms, config_.time_scale);
      try {
        wire::Message msg;
        switch (read_message(deadline, msg)) {
          case ReadStatus::Got:
            if (const auto* result = std::get_if<wire::Result>(&msg)) {
              record.recognized_text = result->text;
              record.latency_ms = result->latency_ms;
              record.outcome = classify_result(record.ground_truth, result->text);
              record.reason.clear();
            } else if (const auto* err = std::get_if<wire::AgentError>(&msg)) {
              record.outcome = Outcome::NoResult;
              record.reason = "agent-error: " + err->detail;
            } else {
              mark_rest(next_, "protocol-violation: unexpected " +
                                   std::string(wire::message_name(msg)));
              return;
            }
            break;
          case ReadStatus::Timeout:
            record.outcome = Outcome::NoResult;
            record.reason = "timeout";
            // The agent may still answer this sample; one extra Result is
            // now potentially in flight.
            ++stale_budget_;
            break;
          case ReadStatus::Eof:
            mark_rest(next_, "agent-closed");
            return;
        }
      } catch (const ProtocolFault& fault) {
        mark_rest(next_, "protocol-violation: " + std::string(fault.what()));
        return;
      }
    }

    try {
      send(wire::Bye{});
    } catch (const net::NetError&) {
      // All samples are accounted for; a failed goodbye is not an outcome.
    }
  }

  // Zero-timeout sweep of frames already buffered between samples. Stale
  // Results are dropped: their sample already timed out and stays NoResult.
  // Results carry no sample index, so the only sound bookkeeping is a count:
  // each timeout leaves at most one extra Result in flight, and each one
  // discarded here pays that debt back. A Result with no timeout debt is the
  // genuine two-results-per-sample violation.
  void drain_pending() {
    std::vector<uint8_t> chunk(4096);
    for (;;) {
      while (auto item = decoder_.poll()) {
        if (item->status == wire::DecodeStatus::Error) {
          throw ProtocolFault(std::string("undecodable frame: ") +
                              to_string(item->error));
        }
        if (std::holds_alternative<wire::Result>(item->message)) {
          if (tracker_.state() == wire::SessionState::AwaitResult) {
            // Late answer to the sample that just timed out.
            if (auto violation = tracker_.accept(item->message)) {
              throw ProtocolFault(*violation);
            }
            if (stale_budget_ > 0) --stale_budget_;
            continue;
          }
          if (stale_budget_ > 0) {
            // Answer to an earlier timed-out sample, displaced past the
            // window that consumed its successor. Outside the machine.
            --stale_budget_;
            continue;
          }
          throw ProtocolFault("Result with no sample awaiting one");
        }
        if (auto violation = tracker_.accept(item->message)) {
          throw ProtocolFault(*violation);
        }
        if (!std::holds_alternative<wire::AgentError>(item->message)) {
          throw ProtocolFault("unexpected " +
                              std::string(wire::message_name(item->message)) +
                              " between samples");
        }
      }
      auto received = socket_.recv_some(chunk, std::chrono::microseconds(0));
      if (!received) return;  // nothing buffered
      if (*received == 0) throw net::NetError("connection closed");
      decoder_.feed(std::span(chunk.data(), *received));
    }
  }

  // Marks assignments [from, end) as NoResult for `reason` unless already
  // resolved, so every terminating session conserves the record count.
  void mark_rest(size_t from, const std::string& reason) {
    for (size_t i = from; i < assignments_.size(); ++i) {
      RecognitionRecord& record = records_[assignments_[i].position];
      if (record.reason == "not-run") {
        record.outcome = Outcome::NoResult;
        record.reason = reason;
      }
    }
  }

  const SessionConfig& config_;
  const std::string& endpoint_;
  std::vector<Assignment> assignments_;
  std::vector<RecognitionRecord>& records_;
  net::TcpSocket socket_;
  wire::SessionTracker tracker_;
  wire::FrameDecoder decoder_;
  size_t next_ = 0;
  size_t stale_budget_ = 0;
};

}  // namespace

std::vector<RecognitionRecord> run_session(const SessionConfig& config,
                                           const TestReplica& replica,
                                           const std::vector<SamplePool>& pools) {
  validate(config);
  std::vector<const Sample*> resolved = resolve_replica(replica, pools);

  std::vector<RecognitionRecord> records(resolved.size());
  for (size_t i = 0; i < resolved.size(); ++i) {
    records[i].sample_index = static_cast<uint32_t>(i);
    records[i].ground_truth = resolved[i]->label;
    records[i].outcome = Outcome::NoResult;
    records[i].reason = "not-run";
  }

  const size_t agent_count = config.agents.size();
  std::vector<std::vector<Assignment>> partitions(agent_count);
  for (size_t i = 0; i < resolved.size(); ++i) {
    partitions[i % agent_count].push_back({static_cast<uint32_t>(i), resolved[i]});
  }

  std::vector<std::thread> drivers;
  drivers.reserve(agent_count);
  for (size_t a = 0; a < agent_count; ++a) {
    drivers.emplace_back([&, a] {
      PartitionDriver driver(config, config.agents[a], std::move(partitions[a]), records);
      driver.run();
    });
  }
  for (std::thread& t : drivers) t.join();

  for (RecognitionRecord& record : records) {
    if (record.reason == "not-run") record.reason = "not-attempted";
  }
  return records;
}

namespace {

json record_json(const RecognitionRecord& record) {
  json j{{"sample_index", record.sample_index},
         {"ground_truth", record.ground_truth},
         {"outcome", to_string(record.outcome)},
         {"recognized_text", record.recognized_text},
         {"latency_ms", record.latency_ms ? json(*record.latency_ms) : json(nullptr)}};
  if (record.outcome == Outcome::NoResult && !record.reason.empty()) {
    j["reason"] = record.reason;
  }
  return j;
}

MergeableCounter count_records(std::span<const RecognitionRecord> records) {
  MergeableCounter counter;
  for (const RecognitionRecord& record : records) {
    counter = accumulate(counter, record.outcome);
  }
  return counter;
}

}  // namespace

std::string records_jsonl(std::span<const RecognitionRecord> records) {
  std::string out;
  for (const RecognitionRecord& record : records) {
    out += record_json(record).dump();
    out += '\n';
  }
  return out;
}

std::string summary_json(std::span<const RecognitionRecord> records,
                         const ReportMetadata& metadata) {
  MergeableCounter counter = count_records(records);
  std::optional<Centi> accuracy = accuracy_percent(counter);
  json j{{"set_name", metadata.set_name},
         {"replica_index", metadata.replica_index},
         {"seed", metadata.seed},
         {"system", metadata.system},
         {"correct", counter.correct},
         {"incorrect", counter.incorrect},
         {"no_result", counter.no_result},
         {"accuracy_percent", accuracy ? json(accuracy->to_double()) : json(nullptr)}};
  return j.dump(2) + "\n";
}

void write_report(std::span<const RecognitionRecord> records,
                  const ReportMetadata& metadata, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&dir](const std::string& name, std::string_view body) {
    std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
  };

  write("records.jsonl", records_jsonl(records));
  write("summary.json", summary_json(records, metadata));

  MergeableCounter counter = count_records(records);
  ReplicaRow row{metadata.replica_index, counter, accuracy_percent(counter)};
  AccuracyReport report = make_report(metadata.set_name, metadata.system, {row});
  write("table.txt", render_table(std::span(&report, 1)));
}

ReplicaSummary parse_summary(std::string_view body) {
  json j = json::parse(body);
  ReplicaSummary summary;
  summary.set_name = j.at("set_name").get<std::string>();
  summary.system = j.at("system").get<std::string>();
  summary.row.replica_index = j.at("replica_index").get<uint32_t>();
  summary.row.counts.correct = j.at("correct").get<uint64_t>();
  summary.row.counts.incorrect = j.at("incorrect").get<uint64_t>();
  summary.row.counts.no_result = j.at("no_result").get<uint64_t>();
  if (!j.at("accuracy_percent").is_null()) {
    summary.row.percent = Centi::from_double(j.at("accuracy_percent").get<double>());
  }
  return summary;
}

ReplicaSummary load_summary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_summary(body);
}

std::vector<AccuracyReport> merge_summaries(std::span<const ReplicaSummary> summaries) {
  if (summaries.empty()) return {};
  const std::string& set_name = summaries.front().set_name;

  std::map<std::string, std::vector<ReplicaRow>> by_system;
  for (const ReplicaSummary& summary : summaries) {
    if (summary.set_name != set_name) {
      throw std::runtime_error("cannot merge summaries across sets: '" + set_name +
                               "' vs '" + summary.set_name + "'");
    }
    by_system[summary.system].push_back(summary.row);
  }

  std::vector<AccuracyReport> reports;
  reports.reserve(by_system.size());
  for (auto& [system, rows] : by_system) {
    std::sort(rows.begin(), rows.end(),
              [](const ReplicaRow& a, const ReplicaRow& b) {
                return a.replica_index < b.replica_index;
              });
    reports.push_back(make_report(set_name, system, std::move(rows)));
  }
  return reports;
}

}  // namespace hwime
