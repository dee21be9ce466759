#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace hwime::text {

// True iff `s` is well-formed UTF-8 (rejects overlongs, surrogates and
// codepoints above U+10FFFF).
bool is_valid_utf8(std::string_view s);

// Number of codepoints; `s` must be valid UTF-8.
size_t codepoint_count(std::string_view s);

// Canonical composition (NFC). Input must be valid UTF-8.
std::string nfc(std::string_view s);

// NFC on both sides, then exact codepoint equality.
bool canonical_equal(std::string_view a, std::string_view b);

}  // namespace hwime::text
