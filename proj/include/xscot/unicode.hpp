#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xscot {

struct Codepoint {
  char32_t value = 0;
  std::size_t offset = 0;  // byte offset in the source string
  std::size_t size = 0;    // byte length of the encoding
};

/// Decodes UTF-8. Invalid byte sequences are passed through one byte at a
/// time as U+FFFD so that offsets stay consistent with the input.
std::vector<Codepoint> decode_utf8(std::string_view text);

std::string encode_utf8(char32_t cp);

bool is_space_cp(char32_t cp);
bool is_ascii_digit_cp(char32_t cp);

/// Coarse script buckets, just enough to group mixed-script text into
/// word-like units.
enum class ScriptClass {
  Space,
  Digit,
  Latin,
  Hiragana,
  Katakana,
  Han,
  Hangul,
  Punct,
  Other,
};

ScriptClass script_class(char32_t cp);

std::string_view trim_ascii(std::string_view text);

}  // namespace xscot
