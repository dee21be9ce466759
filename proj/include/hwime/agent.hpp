#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hwime/geometry.hpp"
#include "hwime/net.hpp"
#include "hwime/recognizer.hpp"
#include "hwime/wire.hpp"

namespace hwime {

// Models the text box the recognizer commits into. Content only grows within
// one sample window and is cleared when the next sample begins; the length
// history is what the monitoring model watches.
class TextBuffer {
 public:
  void clear();

  // Appends committed text and records the new length. Returns true iff the
  // length changed, which is the monitor's emit trigger.
  bool commit(std::string_view committed);

  const std::string& content() const { return content_; }
  const std::vector<size_t>& length_history() const { return history_; }

 private:
  std::string content_;
  std::vector<size_t> history_{0};
};

struct AgentFaults {
  // Hard-close the connection after this many received frames (0 = off).
  uint64_t close_after_frames = 0;
  // Hard-close right after this many Results have been sent (0 = off).
  uint64_t close_after_results = 0;
};

struct AgentConfig {
  ResampleConfig resample;
  double time_scale = 1.0;
  uint32_t recognizer_delay_ms = 0;  // artificial commit delay, scaled by time_scale
  std::string log_path;              // line-delimited event/result log, empty = off
  AgentFaults faults;
};

// Reconstructs strokes from one sample's events, applies the touch-screen
// resampling model, runs the recognizer once, and commits into the buffer.
// Returns the committed text iff the buffer length changed (the monitoring
// trigger); empty optional means silence. Throws MalformedStream upward.
std::optional<std::string> process_sample(std::span<const TouchEvent> events,
                                          const ResampleConfig& resample,
                                          Recognizer& recognizer,
                                          uint32_t sample_index,
                                          TextBuffer& buffer);

// One-session-at-a-time TCP agent, the simulated phone.
class AgentServer {
 public:
  AgentServer(AgentConfig config, std::shared_ptr<Recognizer> recognizer);
  ~AgentServer();

  void bind(const std::string& host, uint16_t port);
  uint16_t port() const { return listener_.port(); }

  // Accepts and serves connections until stop(); sessions run sequentially.
  void serve();
  void serve_one();  // exactly one session (or stop)

  void start();  // serve() on a background thread
  void stop();

 private:
  void run_session(net::TcpSocket socket);

  AgentConfig config_;
  std::shared_ptr<Recognizer> recognizer_;
  net::TcpListener listener_;
  std::thread thread_;
  std::atomic<bool> stop_{false};
};

}  // namespace hwime
