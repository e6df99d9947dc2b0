#include "xscot/segmenter.hpp"

#include <algorithm>

#include "xscot/unicode.hpp"

namespace xscot {

namespace {

bool contains(const std::vector<char32_t>& set, char32_t cp) {
  return std::find(set.begin(), set.end(), cp) != set.end();
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text,
                                      const SegmentationProfile& profile) {
  std::vector<Sentence> sentences;
  const std::vector<Codepoint> cps = decode_utf8(text);
  std::size_t start_byte = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!contains(profile.terminators, cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool run_has_fullwidth = false;
    while (j < cps.size() && contains(profile.terminators, cps[j].value)) {
      if (cps[j].value >= 0x80) run_has_fullwidth = true;
      ++j;
    }
    // ASCII terminators only end a sentence before whitespace or end of
    // text; fullwidth ones are unambiguous and always end one.
    bool next_is_break = j == cps.size() || is_space_cp(cps[j].value);
    if (!run_has_fullwidth && !next_is_break) {
      i = j;
      continue;
    }
    while (j < cps.size() && is_space_cp(cps[j].value)) ++j;
    std::size_t end_byte = j < cps.size() ? cps[j].offset : text.size();
    sentences.push_back(
        {text.substr(start_byte, end_byte - start_byte), sentences.size(), start_byte});
    start_byte = end_byte;
    i = j;
  }
  if (start_byte < text.size()) {
    sentences.push_back({text.substr(start_byte), sentences.size(), start_byte});
  }
  return sentences;
}

namespace {

std::vector<WordGroup> split_whitespace_groups(std::string_view text) {
  std::vector<WordGroup> groups;
  const std::vector<Codepoint> cps = decode_utf8(text);
  std::size_t i = 0;
  std::size_t ws_start = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t word_start = cps[i].offset;
    while (i < cps.size() && !is_space_cp(cps[i].value)) ++i;
    std::size_t word_end = i < cps.size() ? cps[i].offset : text.size();
    groups.push_back({text.substr(word_start, word_end - word_start),
                      text.substr(ws_start, word_start - ws_start), groups.size(), {}});
    ws_start = word_end;
  }
  if (!groups.empty() && ws_start < text.size()) {
    groups.back().trailing_ws = text.substr(ws_start);
  }
  return groups;
}

std::vector<WordGroup> split_script_run_groups(std::string_view text) {
  std::vector<WordGroup> groups;
  const std::vector<Codepoint> cps = decode_utf8(text);
  std::size_t i = 0;
  std::size_t ws_start = 0;
  bool last_group_adjacent = false;  // no whitespace since the previous group
  while (i < cps.size()) {
    if (is_space_cp(cps[i].value)) {
      last_group_adjacent = false;
      ++i;
      continue;
    }
    ScriptClass cls = script_class(cps[i].value);
    std::size_t run_start = cps[i].offset;
    while (i < cps.size() && !is_space_cp(cps[i].value) &&
           script_class(cps[i].value) == cls) {
      ++i;
    }
    std::size_t run_end = i < cps.size() ? cps[i].offset : text.size();
    if (cls == ScriptClass::Punct && last_group_adjacent && !groups.empty()) {
      WordGroup& prev = groups.back();
      prev.text = text.substr(prev.text.data() - text.data(),
                              run_end - (prev.text.data() - text.data()));
    } else {
      groups.push_back({text.substr(run_start, run_end - run_start),
                        text.substr(ws_start, run_start - ws_start), groups.size(), {}});
    }
    ws_start = run_end;
    last_group_adjacent = true;
  }
  if (!groups.empty() && ws_start < text.size()) {
    groups.back().trailing_ws = text.substr(ws_start);
  }
  return groups;
}

}  // namespace

std::vector<WordGroup> split_groups(std::string_view text,
                                    const SegmentationProfile& profile) {
  if (profile.grouping == GroupingRule::ScriptRunGroups) {
    return split_script_run_groups(text);
  }
  return split_whitespace_groups(text);
}

SegmentationProfiles SegmentationProfiles::defaults() {
  SegmentationProfiles profiles;
  const std::vector<char32_t> full = {U'.', U'!', U'?', U'。', U'！', U'？', U'．'};
  for (const char* lang : {"ja", "zh", "ko"}) {
    profiles.set({lang, GroupingRule::ScriptRunGroups, full});
  }
  for (const char* lang : {"en", "de", "fr", "es", "it", "pt", "nl"}) {
    profiles.set({lang, GroupingRule::WhitespaceGroups, full});
  }
  profiles.fallback_ = {"", GroupingRule::WhitespaceGroups, {U'.', U'!', U'?'}};
  return profiles;
}

const SegmentationProfile& SegmentationProfiles::for_language(std::string_view lang) const {
  auto it = by_language_.find(lang);
  if (it != by_language_.end()) return it->second;
  auto dash = lang.find('-');
  if (dash != std::string_view::npos) {
    it = by_language_.find(lang.substr(0, dash));
    if (it != by_language_.end()) return it->second;
  }
  return fallback_;
}

void SegmentationProfiles::set(SegmentationProfile profile) {
  std::string key = profile.language;
  by_language_[key] = std::move(profile);
}

}  // namespace xscot
