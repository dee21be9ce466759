#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hwime {

// Big-endian byte composition shared by the sample-file format and the wire
// protocol. Explicit byte assembly keeps both layouts host-order independent.

inline void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

inline void put_u16be(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32be(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_i16be(std::vector<uint8_t>& out, int16_t v) {
  put_u16be(out, static_cast<uint16_t>(v));
}

inline uint8_t get_u8(std::span<const uint8_t> in, size_t at) { return in[at]; }

inline uint16_t get_u16be(std::span<const uint8_t> in, size_t at) {
  return static_cast<uint16_t>((in[at] << 8) | in[at + 1]);
}

inline uint32_t get_u32be(std::span<const uint8_t> in, size_t at) {
  return (static_cast<uint32_t>(in[at]) << 24) |
         (static_cast<uint32_t>(in[at + 1]) << 16) |
         (static_cast<uint32_t>(in[at + 2]) << 8) |
         static_cast<uint32_t>(in[at + 3]);
}

inline int16_t get_i16be(std::span<const uint8_t> in, size_t at) {
  return static_cast<int16_t>(get_u16be(in, at));
}

}  // namespace hwime
