#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace xscot {

/// A sentence is an exact contiguous slice of the input: concatenating
/// all sentences in order reproduces the source byte for byte. Whitespace
/// following a terminator run belongs to the preceding sentence.
struct Sentence {
  std::string_view text;   // view into the segmented string
  std::size_t index = 0;   // 0-based position within the segment
  std::size_t offset = 0;  // byte offset in the source string
};

enum class GroupingRule {
  WhitespaceGroups,  // maximal runs of non-whitespace characters
  ScriptRunGroups,   // maximal runs of one script class
};

struct SegmentationProfile {
  std::string language;
  GroupingRule grouping = GroupingRule::WhitespaceGroups;
  /// Codepoints that end a sentence. ASCII terminators only split when
  /// followed by whitespace or end of text; fullwidth ones always split.
  std::vector<char32_t> terminators = {U'.', U'!', U'?', U'。', U'！', U'？', U'．'};
};

std::vector<Sentence> split_sentences(std::string_view text,
                                      const SegmentationProfile& profile);

/// A word group plus its surrounding whitespace, so that joining
/// leading_ws + text (+ trailing_ws on the final group) over all groups
/// reproduces the input exactly. Whitespace-only text has no groups and
/// is passed through unchanged by every caller.
struct WordGroup {
  std::string_view text;
  std::string_view leading_ws;
  std::size_t index = 0;  // 0-based position within its sentence
  std::string_view trailing_ws;
};

std::vector<WordGroup> split_groups(std::string_view text,
                                    const SegmentationProfile& profile);

/// Per-language profile registry. CJK languages default to script-run
/// grouping with the full terminator set; other known languages use
/// whitespace grouping; unknown languages fall back to whitespace
/// grouping with ASCII terminators only.
class SegmentationProfiles {
 public:
  static SegmentationProfiles defaults();

  const SegmentationProfile& for_language(std::string_view lang) const;
  void set(SegmentationProfile profile);  // keyed by profile.language

 private:
  std::map<std::string, SegmentationProfile, std::less<>> by_language_;
  SegmentationProfile fallback_;
};

}  // namespace xscot
