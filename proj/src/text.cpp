#include "hwime/text.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <stdexcept>
#include <vector>

namespace hwime::text {

bool is_valid_utf8(std::string_view s) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(s.data());
  size_t n = s.size();
  size_t i = 0;
  while (i < n) {
    unsigned char b = p[i];
    if (b < 0x80) {
      ++i;
      continue;
    }
    int len;
    uint32_t cp;
    if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (int k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    if (cp > 0x10FFFF) return false;
    i += len;
  }
  return true;
}

size_t codepoint_count(std::string_view s) {
  size_t count = 0;
  for (unsigned char b : s) {
    if ((b & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::string nfc(std::string_view s) {
  if (s.empty()) return {};

  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
  if (U_FAILURE(ec)) throw std::runtime_error("ICU NFC instance unavailable");

  std::vector<UChar> units(s.size() + 1);
  int32_t unit_len = 0;
  u_strFromUTF8(units.data(), static_cast<int32_t>(units.size()), &unit_len,
                s.data(), static_cast<int32_t>(s.size()), &ec);
  if (U_FAILURE(ec)) throw std::runtime_error("invalid UTF-8 passed to nfc()");

  std::vector<UChar> composed(static_cast<size_t>(unit_len) + 16);
  int32_t composed_len =
      unorm2_normalize(norm, units.data(), unit_len, composed.data(),
                       static_cast<int32_t>(composed.size()), &ec);
  if (ec == U_BUFFER_OVERFLOW_ERROR) {
    ec = U_ZERO_ERROR;
    composed.resize(static_cast<size_t>(composed_len));
    composed_len =
        unorm2_normalize(norm, units.data(), unit_len, composed.data(),
                         static_cast<int32_t>(composed.size()), &ec);
  }
  if (U_FAILURE(ec)) throw std::runtime_error("ICU normalization failed");

  std::string out(static_cast<size_t>(composed_len) * 4, '\0');
  int32_t out_len = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &out_len,
              composed.data(), composed_len, &ec);
  if (U_FAILURE(ec)) throw std::runtime_error("ICU UTF-8 conversion failed");
  out.resize(static_cast<size_t>(out_len));
  return out;
}

bool canonical_equal(std::string_view a, std::string_view b) {
  return nfc(a) == nfc(b);
}

}  // namespace hwime::text
