#include "xscot/unicode.hpp"

namespace xscot {

std::vector<Codepoint> decode_utf8(std::string_view text) {
  std::vector<Codepoint> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < text.size() &&
               (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80) {
      cp = static_cast<char32_t>(b0 & 0x1F) << 6 |
           (static_cast<unsigned char>(text[i + 1]) & 0x3F);
      len = 2;
      if (cp < 0x80) cp = 0xFFFD;  // overlong
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < text.size() &&
               (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(text[i + 2]) & 0xC0) == 0x80) {
      cp = static_cast<char32_t>(b0 & 0x0F) << 12 |
           static_cast<char32_t>(static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6 |
           (static_cast<unsigned char>(text[i + 2]) & 0x3F);
      len = 3;
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    } else if ((b0 & 0xF8) == 0xF0 && i + 3 < text.size() &&
               (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(text[i + 2]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(text[i + 3]) & 0xC0) == 0x80) {
      cp = static_cast<char32_t>(b0 & 0x07) << 18 |
           static_cast<char32_t>(static_cast<unsigned char>(text[i + 1]) & 0x3F) << 12 |
           static_cast<char32_t>(static_cast<unsigned char>(text[i + 2]) & 0x3F) << 6 |
           (static_cast<unsigned char>(text[i + 3]) & 0x3F);
      len = 4;
      if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
    }
    if (cp == 0xFFFD && b0 >= 0x80) len = 1;  // resync on the next byte
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x00A0:   // no-break space
    case 0x3000:   // ideographic space
    case 0x200B:   // zero-width space
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;  // en quad .. hair space
  }
}

bool is_ascii_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

ScriptClass script_class(char32_t cp) {
  if (is_space_cp(cp)) return ScriptClass::Space;
  if (is_ascii_digit_cp(cp) || (cp >= 0xFF10 && cp <= 0xFF19)) return ScriptClass::Digit;
  if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z') || cp == U'_' ||
      (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) ||
      (cp >= 0xFF21 && cp <= 0xFF3A) || (cp >= 0xFF41 && cp <= 0xFF5A)) {
    return ScriptClass::Latin;
  }
  if (cp >= 0x3041 && cp <= 0x309F) return ScriptClass::Hiragana;
  if ((cp >= 0x30A0 && cp <= 0x30FF) || (cp >= 0x31F0 && cp <= 0x31FF) ||
      (cp >= 0xFF66 && cp <= 0xFF9D)) {
    return ScriptClass::Katakana;
  }
  if ((cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
      (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2A6DF)) {
    return ScriptClass::Han;
  }
  if ((cp >= 0xAC00 && cp <= 0xD7A3) || (cp >= 0x1100 && cp <= 0x11FF) ||
      (cp >= 0x3130 && cp <= 0x318F)) {
    return ScriptClass::Hangul;
  }
  if (cp < 0x80) return ScriptClass::Punct;  // remaining ASCII is symbols
  if ((cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
      (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
      (cp >= 0xFF5B && cp <= 0xFF65) || (cp >= 0x2000 && cp <= 0x206F)) {
    return ScriptClass::Punct;
  }
  return ScriptClass::Other;
}

std::string_view trim_ascii(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  auto is_ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (begin < end && is_ws(text[begin])) ++begin;
  while (end > begin && is_ws(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

}  // namespace xscot
