#include "hwime/agent.hpp"

#include <chrono>
#include <fstream>

#include "hwime/trajectory.hpp"

#include <json.hpp>

namespace hwime {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

}  // namespace

void TextBuffer::clear() {
  content_.clear();
  history_.assign(1, 0);
}

bool TextBuffer::commit(std::string_view committed) {
  size_t before = content_.size();
  content_.append(committed);
  history_.push_back(content_.size());
  return content_.size() != before;
}

std::optional<std::string> process_sample(std::span<const TouchEvent> events,
                                          const ResampleConfig& resample,
                                          Recognizer& recognizer,
                                          uint32_t sample_index,
                                          TextBuffer& buffer) {
  std::vector<Stroke> strokes = from_touch_events(events);
  strokes = apply_resampling(strokes, resample);
  std::string text = recognizer.recognize(sample_index, strokes);
  if (!buffer.commit(text)) return std::nullopt;
  return text;
}

AgentServer::AgentServer(AgentConfig config, std::shared_ptr<Recognizer> recognizer)
    : config_(std::move(config)), recognizer_(std::move(recognizer)) {}

AgentServer::~AgentServer() { stop(); }

void AgentServer::bind(const std::string& host, uint16_t port) {
  listener_ = net::TcpListener::bind(host, port);
}

void AgentServer::serve() {
  while (!stop_.load()) serve_one();
}

void AgentServer::serve_one() {
  while (!stop_.load()) {
    auto socket = listener_.accept(std::chrono::milliseconds(50));
    if (socket) {
      run_session(std::move(*socket));
      return;
    }
  }
}

void AgentServer::start() {
  thread_ = std::thread([this] { serve(); });
}

void AgentServer::stop() {
  stop_.store(true);
  if (thread_.joinable()) thread_.join();
  listener_.close();
}

void AgentServer::run_session(net::TcpSocket socket) {
  wire::SessionTracker tracker;
  wire::FrameDecoder decoder;
  TextBuffer buffer;
  std::vector<TouchEvent> events;
  uint32_t sample_index = 0;
  Clock::time_point sample_end_at{};
  uint64_t frames_seen = 0;
  uint64_t results_sent = 0;

  std::ofstream log;
  if (!config_.log_path.empty()) {
    log.open(config_.log_path, std::ios::app);
  }
  auto log_line = [&log](json j) {
    if (log.is_open()) log << j.dump() << '\n' << std::flush;
  };

  auto send = [&](const wire::Message& msg) {
    // Our own frames run through the same tracker, so a buggy agent trips
    // the state machine instead of confusing the peer.
    if (auto violation = tracker.accept(msg)) {
      throw std::logic_error("agent produced " + *violation);
    }
    socket.send_all(wire::encode_frame(msg));
  };

  // Error notifications are not session-sequenced; they abort the sample in
  // flight or precede teardown.
  auto send_error = [&](uint16_t code, const std::string& detail) {
    socket.send_all(wire::encode_frame(wire::AgentError{code, detail}));
  };

  auto fail_connection = [&] {
    log_line({{"ev", "fault_close"}, {"frames", frames_seen}, {"results", results_sent}});
    socket.abort_connection();
  };

  std::vector<uint8_t> chunk(4096);
  try {
    for (;;) {
      if (stop_.load()) return;
      auto received = socket.recv_some(chunk, std::chrono::milliseconds(50));
      if (!received) continue;     // idle; keep polling so stop() works
      if (*received == 0) return;  // peer closed
      decoder.feed(std::span(chunk.data(), *received));

      while (auto item = decoder.poll()) {
        if (item->status == wire::DecodeStatus::Error) {
          send_error(wire::kErrProtocol,
                     std::string("bad frame: ") + to_string(item->error));
          return;
        }

        ++frames_seen;
        if (config_.faults.close_after_frames &&
            frames_seen >= config_.faults.close_after_frames) {
          fail_connection();
          return;
        }

        const wire::Message& msg = item->message;
        if (auto violation = tracker.accept(msg)) {
          send_error(wire::kErrProtocol, *violation);
          return;
        }

        if (const auto* hello = std::get_if<wire::Hello>(&msg)) {
          if (hello->version != wire::kProtocolVersion) {
            send_error(wire::kErrProtocol, "unsupported protocol version");
            return;
          }
          send(wire::HelloAck{wire::kProtocolVersion});
        } else if (const auto* begin = std::get_if<wire::SampleBegin>(&msg)) {
          sample_index = begin->sample_index;
          events.clear();
          buffer.clear();
          log_line({{"ev", "sample_begin"}, {"index", sample_index}});
        } else if (const auto* touch = std::get_if<wire::Touch>(&msg)) {
          events.push_back({touch->kind, touch->x, touch->y, touch->t_ms});
        } else if (std::holds_alternative<wire::SampleEnd>(msg)) {
          sample_end_at = Clock::now();
          std::optional<std::string> committed;
          try {
            committed = process_sample(events, config_.resample, *recognizer_,
                                       sample_index, buffer);
          } catch (const MalformedStream& err) {
            send_error(wire::kErrMalformedStream, err.what());
            log_line({{"ev", "malformed"}, {"index", sample_index}, {"detail", err.what()}});
            continue;
          }
          if (config_.recognizer_delay_ms > 0) {
            auto delay = std::chrono::duration<double, std::milli>(
                config_.recognizer_delay_ms * config_.time_scale);
            std::this_thread::sleep_for(delay);
          }
          if (committed) {
            auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                Clock::now() - sample_end_at);
            send(wire::Result{static_cast<uint32_t>(latency.count()), *committed});
            ++results_sent;
            log_line({{"ev", "result"},
                      {"index", sample_index},
                      {"text", *committed},
                      {"latency_ms", latency.count()}});
            if (config_.faults.close_after_results &&
                results_sent >= config_.faults.close_after_results) {
              fail_connection();
              return;
            }
          } else {
            log_line({{"ev", "silence"}, {"index", sample_index}});
          }
        } else if (std::holds_alternative<wire::Bye>(msg)) {
          log_line({{"ev", "bye"}});
          return;
        } else {
          // HelloAck/Result from the peer would have tripped the tracker.
        }
      }
    }
  } catch (const net::NetError&) {
    // Peer vanished mid-session; nothing to answer.
    log_line({{"ev", "net_error"}});
  }
}

}  // namespace hwime
