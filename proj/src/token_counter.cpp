#include "xscot/token_counter.hpp"

#include "xscot/core.hpp"
#include "xscot/unicode.hpp"

namespace xscot {

namespace {

bool is_word_cp(char32_t cp) {
  ScriptClass cls = script_class(cp);
  return cls == ScriptClass::Latin || cls == ScriptClass::Digit || cls == ScriptClass::Other ||
         cls == ScriptClass::Hiragana || cls == ScriptClass::Katakana ||
         cls == ScriptClass::Han || cls == ScriptClass::Hangul;
}

std::size_t count_space_delimited(const std::vector<Codepoint>& cps) {
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    char32_t cp = cps[i].value;
    if (is_space_cp(cp)) {
      ++i;
    } else if (is_word_cp(cp)) {
      while (i < cps.size() && is_word_cp(cps[i].value)) ++i;
      ++tokens;
    } else {
      // Punctuation: a run of one repeated codepoint is a single token,
      // so "..." costs one, same as ".".
      char32_t mark = cp;
      while (i < cps.size() && cps[i].value == mark) ++i;
      ++tokens;
    }
  }
  return tokens;
}

std::size_t count_cjk(const std::vector<Codepoint>& cps) {
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    char32_t cp = cps[i].value;
    if (is_space_cp(cp)) {
      ++i;
      continue;
    }
    if (script_class(cp) == ScriptClass::Punct) {
      while (i < cps.size() && cps[i].value == cp) ++i;
      ++tokens;
      continue;
    }
    ++i;
    ++tokens;
  }
  return tokens;
}

}  // namespace

std::size_t ReferenceTokenCounter::count(std::string_view text, std::string_view lang) const {
  if (text.empty()) return 0;
  const std::vector<Codepoint> cps = decode_utf8(text);
  return is_cjk_language(lang) ? count_cjk(cps) : count_space_delimited(cps);
}

std::size_t WhitespaceTokenCounter::count(std::string_view text, std::string_view) const {
  const std::vector<Codepoint> cps = decode_utf8(text);
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i].value)) {
      ++i;
      continue;
    }
    while (i < cps.size() && !is_space_cp(cps[i].value)) ++i;
    ++tokens;
  }
  return tokens;
}

const TokenCounter& reference_token_counter() {
  static const ReferenceTokenCounter counter;
  return counter;
}

}  // namespace xscot
