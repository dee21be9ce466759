#include "hwime/text.hpp"

#include <doctest.h>

using namespace hwime;

TEST_CASE("utf8 validation accepts well-formed strings") {
  CHECK(text::is_valid_utf8(""));
  CHECK(text::is_valid_utf8("plain ascii"));
  CHECK(text::is_valid_utf8("永水一"));
  CHECK(text::is_valid_utf8("π√∫"));
  CHECK(text::is_valid_utf8("\xF0\x9F\x98\x80"));  // emoji, 4-byte form
}

TEST_CASE("utf8 validation rejects malformed bytes") {
  CHECK(!text::is_valid_utf8("\xFF"));
  CHECK(!text::is_valid_utf8("\xC0\xAF"));          // overlong '/'
  CHECK(!text::is_valid_utf8("\xE0\x80\x80"));      // overlong
  CHECK(!text::is_valid_utf8("\xED\xA0\x80"));      // surrogate
  CHECK(!text::is_valid_utf8("\xF4\x90\x80\x80"));  // above U+10FFFF
  CHECK(!text::is_valid_utf8("\xE6\xB0"));          // truncated
  CHECK(!text::is_valid_utf8("a\x80"));             // stray continuation
}

TEST_CASE("codepoint_count counts codepoints not bytes") {
  CHECK(text::codepoint_count("") == 0);
  CHECK(text::codepoint_count("ab") == 2);
  CHECK(text::codepoint_count("永") == 1);
  CHECK(text::codepoint_count("永x水") == 3);
}

TEST_CASE("nfc composes the decomposed form") {
  std::string precomposed = "\xC3\xA9";        // U+00E9
  std::string decomposed = "e\xCC\x81";        // e + U+0301
  CHECK(text::nfc(decomposed) == precomposed);
  CHECK(text::nfc(precomposed) == precomposed);
  CHECK(text::canonical_equal(precomposed, decomposed));
  CHECK(!text::canonical_equal(precomposed, "e"));
}

TEST_CASE("nfc leaves CJK untouched and is idempotent") {
  for (std::string s : {"永", "水", "一丁", "abc", "ぱ", "\xE1\x84\x80\xE1\x85\xA1"}) {
    std::string once = text::nfc(s);
    CHECK(text::nfc(once) == once);
  }
  CHECK(text::nfc("永") == "永");
  // Hangul jamo pair composes to the precomposed syllable
  CHECK(text::nfc("\xE1\x84\x80\xE1\x85\xA1") == "\xEA\xB0\x80");  // 가
}
