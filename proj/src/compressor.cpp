#include "xscot/compressor.hpp"

#include <limits>

#include "xscot/errors.hpp"

namespace xscot {

void CompressionConfig::validate() const {
  if (keep_groups < 1) fail(Errc::InvalidConfig, "compression.k must be at least 1");
  if (ellipsis_marker.empty()) fail(Errc::InvalidConfig, "ellipsis marker must be non-empty");
  // Unconditional sentence terminators inside the marker would make
  // compressed output re-segment differently; ASCII ones are fine
  // because they only split before whitespace.
  for (const char* hard : {"。", "！", "？", "．"}) {
    if (ellipsis_marker.find(hard) != std::string::npos) {
      fail(Errc::InvalidConfig, "ellipsis marker must not contain a sentence terminator");
    }
  }
}

std::string compress_sentence(std::string_view sentence, const CompressionConfig& config,
                              const SegmentationProfile& profile) {
  config.validate();
  const std::vector<WordGroup> groups = split_groups(sentence, profile);
  if (groups.size() <= config.keep_groups) return std::string(sentence);

  const bool spaced = profile.grouping == GroupingRule::WhitespaceGroups;
  std::string out{groups.front().leading_ws};
  for (std::size_t i = 0; i < config.keep_groups; ++i) {
    if (i > 0 && spaced) out += ' ';
    out += groups[i].text;
  }
  if (spaced) out += ' ';
  out += config.ellipsis_marker;
  out += groups.back().trailing_ws;
  return out;
}

CompressedSegment compress_segment_prefix(std::string_view text, std::size_t depth,
                                          const CompressionConfig& config,
                                          const SegmentationProfile& profile,
                                          const TokenCounter& counter,
                                          std::string_view lang) {
  const std::vector<Sentence> sentences = split_sentences(text, profile);
  CompressedSegment result;
  result.sentences_total = sentences.size();
  result.sentences_compressed = std::min(depth, sentences.size());
  for (const Sentence& sentence : sentences) {
    if (sentence.index < result.sentences_compressed) {
      result.text += compress_sentence(sentence.text, config, profile);
    } else {
      result.text += sentence.text;
    }
  }
  result.tokens_before = counter.count(text, lang);
  result.tokens_after = counter.count(result.text, lang);
  return result;
}

CompressedSegment compress_whole_segment(std::string_view text,
                                         const CompressionConfig& config,
                                         const SegmentationProfile& profile,
                                         const TokenCounter& counter,
                                         std::string_view lang) {
  return compress_segment_prefix(text, std::numeric_limits<std::size_t>::max(), config,
                                 profile, counter, lang);
}

}  // namespace xscot
