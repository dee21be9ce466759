#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hwime/geometry.hpp"

namespace hwime::wire {

constexpr uint8_t kProtocolVersion = 1;

// Frames above this payload size are rejected outright; Touch and Result
// frames are tiny, the cap bounds memory against a hostile peer.
constexpr uint32_t kMaxPayloadBytes = 1u << 20;

constexpr uint16_t kErrProtocol = 1;
constexpr uint16_t kErrMalformedStream = 2;
constexpr uint16_t kErrInternal = 3;

struct Hello {
  uint8_t version = kProtocolVersion;
  friend bool operator==(const Hello&, const Hello&) = default;
};
struct HelloAck {
  uint8_t version = kProtocolVersion;
  friend bool operator==(const HelloAck&, const HelloAck&) = default;
};
struct SampleBegin {
  uint32_t sample_index = 0;
  friend bool operator==(const SampleBegin&, const SampleBegin&) = default;
};
struct Touch {
  EventKind kind = EventKind::Down;
  int16_t x = 0;
  int16_t y = 0;
  uint32_t t_ms = 0;
  friend bool operator==(const Touch&, const Touch&) = default;
};
struct SampleEnd {
  friend bool operator==(const SampleEnd&, const SampleEnd&) = default;
};
struct Result {
  uint32_t latency_ms = 0;
  std::string text;
  friend bool operator==(const Result&, const Result&) = default;
};
struct AgentError {
  uint16_t code = 0;
  std::string detail;
  friend bool operator==(const AgentError&, const AgentError&) = default;
};
struct Bye {
  friend bool operator==(const Bye&, const Bye&) = default;
};

using Message = std::variant<Hello, HelloAck, SampleBegin, Touch, SampleEnd,
                             Result, AgentError, Bye>;

const char* message_name(const Message& msg);

class TextTooLong : public std::runtime_error {
 public:
  TextTooLong() : std::runtime_error("string field exceeds 65535 bytes") {}
};

// Frame layout: u32 BE payload length (tag + body, excluding this field),
// u8 tag, fixed-layout body; strings are u16 BE length + UTF-8 bytes.
std::vector<uint8_t> encode_frame(const Message& msg);

enum class DecodeStatus : uint8_t { Ok, NeedMore, Error };

enum class DecodeErrc : uint8_t {
  UnknownTag,
  BodyLengthMismatch,
  InvalidUtf8,
  FrameTooLarge,
  InvalidTouchKind,
};

const char* to_string(DecodeErrc code);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Error;
  Message message;     // valid when status == Ok
  size_t consumed = 0; // bytes consumed when status == Ok
  size_t needed = 0;   // total bytes required when status == NeedMore
  DecodeErrc error = DecodeErrc::UnknownTag;  // valid when status == Error
};

// Total over arbitrary bytes: never throws, never reads past the buffer.
DecodeResult decode_frame(std::span<const uint8_t> bytes);

// Incremental decoder; splitting the byte stream differently never changes
// the decoded message sequence.
class FrameDecoder {
 public:
  void feed(std::span<const uint8_t> bytes);

  // Next complete message, if any. After a decode error, poll() keeps
  // reporting it; the stream cannot be resynchronized.
  struct Item {
    DecodeStatus status;
    Message message;
    DecodeErrc error;
  };
  std::optional<Item> poll();

  size_t buffered() const { return buffer_.size(); }

 private:
  std::vector<uint8_t> buffer_;
  bool failed_ = false;
  DecodeErrc fail_code_ = DecodeErrc::UnknownTag;
};

// Session state machine:
//   Hello -> HelloAck -> (SampleBegin -> Touch* -> SampleEnd
//                          -> [Result | timeout])* -> Bye
// AgentError is accepted anywhere after Hello: it refuses the handshake in
// AwaitHelloAck and otherwise closes the sample in flight. Both peers run one
// tracker over the merged send/receive order.
enum class SessionState : uint8_t {
  AwaitHello,
  AwaitHelloAck,
  Idle,
  InSample,
  AwaitResult,
  Closed,
};

const char* to_string(SessionState state);

class SessionTracker {
 public:
  SessionState state() const { return state_; }
  uint32_t sample_index() const { return sample_index_; }

  // Empty optional means accepted; otherwise names the offending transition.
  std::optional<std::string> accept(const Message& msg);

 private:
  SessionState state_ = SessionState::AwaitHello;
  uint32_t sample_index_ = 0;
};

// Replays an accepted history, then checks one more message.
std::optional<std::string> validate_sequence(std::span<const Message> history,
                                             const Message& next);

}  // namespace hwime::wire
