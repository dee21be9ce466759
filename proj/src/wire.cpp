#include "hwime/wire.hpp"

#include "hwime/bytes.hpp"
#include "hwime/text.hpp"

namespace hwime::wire {

namespace {

enum : uint8_t {
  kTagHello = 1,
  kTagHelloAck = 2,
  kTagSampleBegin = 3,
  kTagTouch = 4,
  kTagSampleEnd = 5,
  kTagResult = 6,
  kTagAgentError = 7,
  kTagBye = 8,
};

void put_string(std::vector<uint8_t>& out, const std::string& s) {
  if (s.size() > 0xFFFF) throw TextTooLong();
  put_u16be(out, static_cast<uint16_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

const char* message_name(const Message& msg) {
  struct Namer {
    const char* operator()(const Hello&) { return "Hello"; }
    const char* operator()(const HelloAck&) { return "HelloAck"; }
    const char* operator()(const SampleBegin&) { return "SampleBegin"; }
    const char* operator()(const Touch&) { return "Touch"; }
    const char* operator()(const SampleEnd&) { return "SampleEnd"; }
    const char* operator()(const Result&) { return "Result"; }
    const char* operator()(const AgentError&) { return "AgentError"; }
    const char* operator()(const Bye&) { return "Bye"; }
  };
  return std::visit(Namer{}, msg);
}

const char* to_string(DecodeErrc code) {
  switch (code) {
    case DecodeErrc::UnknownTag: return "UnknownTag";
    case DecodeErrc::BodyLengthMismatch: return "BodyLengthMismatch";
    case DecodeErrc::InvalidUtf8: return "InvalidUtf8";
    case DecodeErrc::FrameTooLarge: return "FrameTooLarge";
    case DecodeErrc::InvalidTouchKind: return "InvalidTouchKind";
  }
  return "?";
}

std::vector<uint8_t> encode_frame(const Message& msg) {
  std::vector<uint8_t> body;
  std::visit(
      [&body](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          put_u8(body, kTagHello);
          put_u8(body, m.version);
        } else if constexpr (std::is_same_v<T, HelloAck>) {
          put_u8(body, kTagHelloAck);
          put_u8(body, m.version);
        } else if constexpr (std::is_same_v<T, SampleBegin>) {
          put_u8(body, kTagSampleBegin);
          put_u32be(body, m.sample_index);
        } else if constexpr (std::is_same_v<T, Touch>) {
          put_u8(body, kTagTouch);
          put_u8(body, static_cast<uint8_t>(m.kind));
          put_i16be(body, m.x);
          put_i16be(body, m.y);
          put_u32be(body, m.t_ms);
        } else if constexpr (std::is_same_v<T, SampleEnd>) {
          put_u8(body, kTagSampleEnd);
        } else if constexpr (std::is_same_v<T, Result>) {
          put_u8(body, kTagResult);
          put_u32be(body, m.latency_ms);
          put_string(body, m.text);
        } else if constexpr (std::is_same_v<T, AgentError>) {
          put_u8(body, kTagAgentError);
          put_u16be(body, m.code);
          put_string(body, m.detail);
        } else if constexpr (std::is_same_v<T, Bye>) {
          put_u8(body, kTagBye);
        }
      },
      msg);

  std::vector<uint8_t> frame;
  frame.reserve(4 + body.size());
  put_u32be(frame, static_cast<uint32_t>(body.size()));
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

namespace {

DecodeResult ok(Message msg, size_t consumed) {
  DecodeResult r;
  r.status = DecodeStatus::Ok;
  r.message = std::move(msg);
  r.consumed = consumed;
  return r;
}

DecodeResult need(size_t total) {
  DecodeResult r;
  r.status = DecodeStatus::NeedMore;
  r.needed = total;
  return r;
}

DecodeResult fail(DecodeErrc code) {
  DecodeResult r;
  r.status = DecodeStatus::Error;
  r.error = code;
  return r;
}

// Body cursor with bounds tracking; `body` excludes the tag byte.
struct Body {
  std::span<const uint8_t> bytes;
  size_t at = 0;

  bool has(size_t n) const { return bytes.size() - at >= n; }
  uint8_t u8() { return bytes[at++]; }
  uint16_t u16() {
    uint16_t v = get_u16be(bytes, at);
    at += 2;
    return v;
  }
  uint32_t u32() {
    uint32_t v = get_u32be(bytes, at);
    at += 4;
    return v;
  }
  int16_t i16() { return static_cast<int16_t>(u16()); }
  bool done() const { return at == bytes.size(); }
};

}  // namespace

DecodeResult decode_frame(std::span<const uint8_t> bytes) {
  // Smallest possible frame: 4-byte length + 1-byte tag.
  if (bytes.size() < 4) return need(5);

  uint32_t payload = get_u32be(bytes, 0);
  if (payload > kMaxPayloadBytes) return fail(DecodeErrc::FrameTooLarge);
  if (payload == 0) return fail(DecodeErrc::BodyLengthMismatch);

  size_t total = 4 + static_cast<size_t>(payload);
  if (bytes.size() < total) return need(total);

  uint8_t tag = bytes[4];
  Body body{bytes.subspan(5, payload - 1)};

  switch (tag) {
    case kTagHello:
    case kTagHelloAck: {
      if (body.bytes.size() != 1) return fail(DecodeErrc::BodyLengthMismatch);
      uint8_t version = body.u8();
      if (tag == kTagHello) return ok(Hello{version}, total);
      return ok(HelloAck{version}, total);
    }
    case kTagSampleBegin: {
      if (body.bytes.size() != 4) return fail(DecodeErrc::BodyLengthMismatch);
      return ok(SampleBegin{body.u32()}, total);
    }
    case kTagTouch: {
      if (body.bytes.size() != 9) return fail(DecodeErrc::BodyLengthMismatch);
      uint8_t kind = body.u8();
      if (kind > 2) return fail(DecodeErrc::InvalidTouchKind);
      Touch touch;
      touch.kind = static_cast<EventKind>(kind);
      touch.x = body.i16();
      touch.y = body.i16();
      touch.t_ms = body.u32();
      return ok(touch, total);
    }
    case kTagSampleEnd: {
      if (!body.bytes.empty()) return fail(DecodeErrc::BodyLengthMismatch);
      return ok(SampleEnd{}, total);
    }
    case kTagResult: {
      if (!body.has(6)) return fail(DecodeErrc::BodyLengthMismatch);
      Result result;
      result.latency_ms = body.u32();
      uint16_t len = body.u16();
      if (!body.has(len)) return fail(DecodeErrc::BodyLengthMismatch);
      result.text.assign(reinterpret_cast<const char*>(body.bytes.data()) + body.at, len);
      body.at += len;
      if (!body.done()) return fail(DecodeErrc::BodyLengthMismatch);
      if (!text::is_valid_utf8(result.text)) return fail(DecodeErrc::InvalidUtf8);
      return ok(std::move(result), total);
    }
    case kTagAgentError: {
      if (!body.has(4)) return fail(DecodeErrc::BodyLengthMismatch);
      AgentError err;
      err.code = body.u16();
      uint16_t len = body.u16();
      if (!body.has(len)) return fail(DecodeErrc::BodyLengthMismatch);
      err.detail.assign(reinterpret_cast<const char*>(body.bytes.data()) + body.at, len);
      body.at += len;
      if (!body.done()) return fail(DecodeErrc::BodyLengthMismatch);
      if (!text::is_valid_utf8(err.detail)) return fail(DecodeErrc::InvalidUtf8);
      return ok(std::move(err), total);
    }
    case kTagBye: {
      if (!body.bytes.empty()) return fail(DecodeErrc::BodyLengthMismatch);
      return ok(Bye{}, total);
    }
    default:
      return fail(DecodeErrc::UnknownTag);
  }
}

void FrameDecoder::feed(std::span<const uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<FrameDecoder::Item> FrameDecoder::poll() {
  if (failed_) return Item{DecodeStatus::Error, {}, fail_code_};

  DecodeResult r = decode_frame(buffer_);
  switch (r.status) {
    case DecodeStatus::NeedMore:
      return std::nullopt;
    case DecodeStatus::Error:
      failed_ = true;
      fail_code_ = r.error;
      return Item{DecodeStatus::Error, {}, r.error};
    case DecodeStatus::Ok:
      buffer_.erase(buffer_.begin(),
                    buffer_.begin() + static_cast<ptrdiff_t>(r.consumed));
      return Item{DecodeStatus::Ok, std::move(r.message), {}};
  }
  return std::nullopt;
}

const char* to_string(SessionState state) {
  switch (state) {
    case SessionState::AwaitHello: return "AwaitHello";
    case SessionState::AwaitHelloAck: return "AwaitHelloAck";
    case SessionState::Idle: return "Idle";
    case SessionState::InSample: return "InSample";
    case SessionState::AwaitResult: return "AwaitResult";
    case SessionState::Closed: return "Closed";
  }
  return "?";
}

std::optional<std::string> SessionTracker::accept(const Message& msg) {
  auto violation = [&]() -> std::optional<std::string> {
    return std::string(message_name(msg)) + " not allowed in state " +
           to_string(state_);
  };

  switch (state_) {
    case SessionState::AwaitHello:
      if (std::holds_alternative<Hello>(msg)) {
        state_ = SessionState::AwaitHelloAck;
        return std::nullopt;
      }
      return violation();

    case SessionState::AwaitHelloAck:
      if (std::holds_alternative<HelloAck>(msg)) {
        state_ = SessionState::Idle;
        return std::nullopt;
      }
      if (std::holds_alternative<AgentError>(msg)) {
        // Handshake refused.
        state_ = SessionState::Closed;
        return std::nullopt;
      }
      return violation();

    case SessionState::Idle:
      if (const auto* begin = std::get_if<SampleBegin>(&msg)) {
        sample_index_ = begin->sample_index;
        state_ = SessionState::InSample;
        return std::nullopt;
      }
      if (std::holds_alternative<Bye>(msg)) {
        state_ = SessionState::Closed;
        return std::nullopt;
      }
      if (std::holds_alternative<AgentError>(msg)) return std::nullopt;
      return violation();

    case SessionState::InSample:
      if (std::holds_alternative<Touch>(msg)) return std::nullopt;
      if (std::holds_alternative<SampleEnd>(msg)) {
        state_ = SessionState::AwaitResult;
        return std::nullopt;
      }
      if (std::holds_alternative<AgentError>(msg)) {
        state_ = SessionState::Idle;
        return std::nullopt;
      }
      return violation();

    case SessionState::AwaitResult:
      if (std::holds_alternative<Result>(msg)) {
        state_ = SessionState::Idle;
        return std::nullopt;
      }
      // No Result within the deadline: the driver moves straight on.
      if (const auto* begin = std::get_if<SampleBegin>(&msg)) {
        sample_index_ = begin->sample_index;
        state_ = SessionState::InSample;
        return std::nullopt;
      }
      if (std::holds_alternative<Bye>(msg)) {
        state_ = SessionState::Closed;
        return std::nullopt;
      }
      if (std::holds_alternative<AgentError>(msg)) {
        state_ = SessionState::Idle;
        return std::nullopt;
      }
      return violation();

    case SessionState::Closed:
      return violation();
  }
  return violation();
}

std::optional<std::string> validate_sequence(std::span<const Message> history,
                                             const Message& next) {
  SessionTracker tracker;
  for (const Message& msg : history) {
    if (auto v = tracker.accept(msg)) {
      return "history is not an accepted prefix: " + *v;
    }
  }
  return tracker.accept(next);
}

}  // namespace hwime::wire
